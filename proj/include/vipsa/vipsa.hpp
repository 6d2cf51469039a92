// Copyright 2026 The vipsa Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file vipsa.hpp
 * The adaptive interaction-rotation ansatz: gradient screening, operator
 * selection and full re-optimization, epoch by epoch, on the mode register.
 */
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "adam.hpp"
#include "circuit.hpp"
#include "exact.hpp"
#include "pool.hpp"

namespace vipsa {

struct VipsaConfig {
    double r = 0.1;     ///< selection ratio
    double eps1 = 1e-2; ///< terminal pool-gradient tolerance
    AdamConfig adam;    ///< adam.tol is the epoch energy tolerance
    int max_epochs = 30;
    std::vector<int> shell_up;   ///< optional degenerate-shell choice
    std::vector<int> shell_down;
    unsigned threads = 0;        ///< 0: thread_count()
    bool carry_moments = true;   ///< keep ADAM moments of existing parameters across epochs

    void validate() const {
        if (!(r > 0.0 && r <= 1.0)) {
            throw std::invalid_argument("r must lie in (0, 1]");
        }
        if (!(eps1 > 0.0)) {
            throw std::invalid_argument("eps1 must be positive");
        }
        if (max_epochs < 0) {
            throw std::invalid_argument("max_epochs must be non-negative");
        }
        adam.validate();
    }
};

/// Per-epoch summary. Epoch 0 is the Fermi sea; epoch e > 0 appends
/// `selected` and re-optimizes. max_gradient is screened at the epoch's
/// final state.
struct EpochRecord {
    int epoch = 0;
    double max_gradient = 0.0;
    std::vector<std::string> selected;
    std::size_t n_params = 0;
    int inner_steps = 0;
    bool inner_converged = true;
    double energy = 0.0;
    double fidelity = std::numeric_limits<double>::quiet_NaN();
};

/// One optimizer iterate; global step 0 is the initial state.
struct StepRecord {
    int step = 0;
    int epoch = 0;
    double energy = 0.0;
    double fidelity = std::numeric_limits<double>::quiet_NaN();
};

enum class RunStatus { Converged, Exhausted };

inline const char *to_string(RunStatus s) {
    return s == RunStatus::Converged ? "converged" : "exhausted";
}

struct RunResult {
    std::vector<EpochRecord> epochs;
    std::vector<StepRecord> steps;
    RunStatus status = RunStatus::Converged;
    std::string reason;
    AnsatzCircuit circuit;
    std::vector<double> params;
    double energy = 0.0;
    double fidelity = std::numeric_limits<double>::quiet_NaN();
};

/// Sees every state the run evaluates: (state, epoch, global step).
using StateObserver = std::function<void(const StateVector &, int, int)>;

/// Everything fixed for a (grid, filling) before the loop starts.
struct VipsaProblem {
    GridSpec grid;
    int n_up = 0;
    int n_down = 0;
    FermiSea sea;
    KSpaceHamiltonian hamiltonian;
    std::shared_ptr<const SectorOperator> h;
    Pool pool;
    StateVector phi0;

    static VipsaProblem make(const GridSpec &grid, int n_up, int n_down,
                             const std::vector<int> &shell_up = {},
                             const std::vector<int> &shell_down = {}) {
        grid.validate();
        VipsaProblem p;
        p.grid = grid;
        p.n_up = n_up;
        p.n_down = n_down;
        p.sea = fermi_sea(grid, n_up, n_down, shell_up, shell_down);
        p.hamiltonian = build_kspace(grid);
        auto sector = std::make_shared<const Sector>(grid.n_qubits(), n_up, n_down);
        p.h = std::make_shared<const SectorOperator>(p.hamiltonian.total, sector);
        p.pool = build_pool(grid);
        p.phi0 = basis_state(fermi_sea_qubits(grid, p.sea), grid.n_qubits());
        return p;
    }
};

namespace detail {
inline double max_abs(const std::vector<double> &g) {
    double m = 0.0;
    for (double x : g) {
        m = std::max(m, std::abs(x));
    }
    return m;
}
} // namespace detail

/// Runs the adaptive loop. Fidelities are taken against `ground` when given
/// (a ground space of the mode-register Hamiltonian in the same sector).
inline RunResult vipsa_run(const VipsaProblem &prob, const VipsaConfig &cfg,
                           const GroundSpace *ground = nullptr, const StateObserver &observe = {}) {
    cfg.validate();
    const unsigned threads = cfg.threads ? cfg.threads : thread_count();
    const SectorOperator &h = *prob.h;
    auto fid = [&](const StateVector &psi) {
        return ground ? fidelity(psi, *ground) : std::numeric_limits<double>::quiet_NaN();
    };

    RunResult res;
    res.circuit.initial = prob.phi0;
    int step = 0;
    AdamState moments;

    StateVector psi = prob.phi0;
    StateVector h_psi = h.apply(psi);
    if (observe) {
        observe(psi, 0, 0);
    }
    EpochRecord e0;
    e0.energy = inner(psi, h_psi).real();
    e0.fidelity = fid(psi);
    std::vector<double> g = pool_gradients(psi, h_psi, prob.pool.ops, threads);
    e0.max_gradient = detail::max_abs(g);
    res.epochs.push_back(e0);
    res.steps.push_back({0, 0, e0.energy, e0.fidelity});
    res.energy = e0.energy;
    res.fidelity = e0.fidelity;

    for (int epoch = 1;; ++epoch) {
        const double gmax = detail::max_abs(g);
        if (gmax < cfg.eps1) {
            res.status = RunStatus::Converged;
            res.reason = "max pool gradient below eps1";
            break;
        }
        const auto chosen = select(g, cfg.r);
        if (chosen.empty()) {
            res.status = RunStatus::Converged;
            res.reason = "empty selection";
            break;
        }
        if (epoch > cfg.max_epochs) {
            res.status = RunStatus::Exhausted;
            res.reason = "max_epochs reached";
            break;
        }
        EpochRecord rec;
        rec.epoch = epoch;
        for (std::size_t i : chosen) {
            const auto &op = prob.pool.ops[i];
            res.circuit.add_gate({PoolRotation{op.qubits}, res.params.size(), 1.0});
            res.params.push_back(0.0);
            rec.selected.push_back(op.label);
        }
        auto objective = [&](const std::vector<double> &x) {
            return circuit_gradient(res.circuit, x, h);
        };
        auto on_step = [&](int k, const std::vector<double> &x, double e) {
            if (k == 0) {
                return; // same state as the previous epoch's optimum
            }
            const StateVector s = res.circuit.prepare(x);
            if (observe) {
                observe(s, epoch, step + k);
            }
            res.steps.push_back({step + k, epoch, e, fid(s)});
        };
        const AdamResult ar = adam_optimize(objective, res.params, cfg.adam, on_step,
                                            cfg.carry_moments ? &moments : nullptr);
        step += ar.steps;
        res.params = ar.params;
        psi = res.circuit.prepare(res.params);
        h_psi = h.apply(psi);
        rec.energy = inner(psi, h_psi).real();
        rec.fidelity = fid(psi);
        rec.inner_steps = ar.steps;
        rec.inner_converged = ar.converged;
        rec.n_params = res.params.size();
        g = pool_gradients(psi, h_psi, prob.pool.ops, threads);
        rec.max_gradient = detail::max_abs(g);
        res.epochs.push_back(rec);
        res.energy = rec.energy;
        res.fidelity = rec.fidelity;
    }
    return res;
}

inline RunResult vipsa_run(const GridSpec &grid, int n_up, int n_down, const VipsaConfig &cfg,
                           const GroundSpace *ground = nullptr, const StateObserver &observe = {}) {
    return vipsa_run(VipsaProblem::make(grid, n_up, n_down, cfg.shell_up, cfg.shell_down), cfg,
                     ground, observe);
}

struct FirstOrderResult {
    std::vector<double> theta; ///< one per pool operator, pool order
    StateVector reference;     ///< normalized (1 - sum' V O / eps)|phi0>
    StateVector sequential;    ///< pool rotations applied in pool order
};

/// Weak-coupling parameter assignment sin(theta) = -V / eps and the
/// first-order state it reproduces.
inline FirstOrderResult first_order_oracle(const VipsaProblem &prob) {
    FirstOrderResult out;
    const int n = prob.grid.n_qubits();
    out.reference = prob.phi0;
    for (const auto &q : prob.hamiltonian.table) {
        if (std::abs(q.eps) <= kZeroDenominatorTol) {
            continue;
        }
        const auto o = jordan_wigner(q.ladder(-q.V / q.eps), n);
        out.reference += apply_pauli_sum(o, prob.phi0);
    }
    out.reference.normalize();
    out.sequential = prob.phi0;
    for (const auto &op : prob.pool.ops) {
        const double s = -op.quad.V / op.quad.eps;
        if (std::abs(s) > 1.0) {
            throw std::domain_error("|V/eps| > 1 for " + op.label +
                                    ": coupling too strong for the first-order assignment");
        }
        out.theta.push_back(std::asin(s));
        apply_pool_unitary(op.qubits, out.theta.back(), out.sequential);
    }
    return out;
}

} // namespace vipsa
