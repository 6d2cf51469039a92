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
 * @file hva.hpp
 * Hamiltonian variational ansatz on the real-space register: layers of
 * half-step on-site phases around horizontal and vertical hopping matchings.
 */
#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <vector>

#include "adam.hpp"
#include "circuit.hpp"
#include "exact.hpp"
#include "hamiltonian.hpp"
#include "lattice.hpp"
#include "vipsa.hpp"

namespace vipsa {

/// A set of vertex-disjoint bonds sharing one hopping angle.
using Matching = std::vector<Edge>;

struct HvaLayout {
    int layers = 10;
    std::vector<Matching> horizontal;
    std::vector<Matching> vertical;

    [[nodiscard]] std::size_t params_per_layer() const {
        return 1 + horizontal.size() + vertical.size();
    }
    [[nodiscard]] std::size_t n_params() const {
        return static_cast<std::size_t>(layers) * params_per_layer();
    }
};

/// Greedy edge colouring: each bond joins the first matching it fits.
inline std::vector<Matching> greedy_matchings(const std::vector<Edge> &edges) {
    std::vector<Matching> out;
    for (const auto &e : edges) {
        bool placed = false;
        for (auto &m : out) {
            bool disjoint = true;
            for (const auto &f : m) {
                if (f.site_a == e.site_a || f.site_a == e.site_b || f.site_b == e.site_a ||
                    f.site_b == e.site_b) {
                    disjoint = false;
                    break;
                }
            }
            if (disjoint) {
                m.push_back(e);
                placed = true;
                break;
            }
        }
        if (!placed) {
            out.push_back({e});
        }
    }
    return out;
}

inline HvaLayout hva_layout(const GridSpec &grid, int layers) {
    if (layers < 1) {
        throw std::invalid_argument("HVA needs at least one layer");
    }
    HvaLayout l;
    l.layers = layers;
    std::vector<Edge> h;
    std::vector<Edge> v;
    for (const auto &e : lattice_edges(grid)) {
        (e.axis == Axis::X ? h : v).push_back(e);
    }
    l.horizontal = greedy_matchings(h);
    l.vertical = greedy_matchings(v);
    return l;
}

/// Both spin species hop on every bond of the matching.
inline HoppingRotation matching_rotation(const Matching &m, int n_qubits) {
    HoppingRotation r;
    for (const auto &e : m) {
        for (int s = 0; s < 2; ++s) {
            r.terms.emplace_back(2 * e.site_a + s, 2 * e.site_b + s, n_qubits);
        }
    }
    return r;
}

/// Real Slater determinant of the Fermi sea on the site register.
inline StateVector hva_initial_state(const GridSpec &grid, const FermiSea &sea) {
    return slater_statevector(mode_transform(grid, enumerate_modes(grid), true), sea.occupied_up,
                              sea.occupied_down);
}

/// Circuit with parameters laid out per layer as (theta_U, horizontal..., vertical...).
/// The initial state is left empty.
inline AnsatzCircuit build_hva(const GridSpec &grid, const HvaLayout &layout) {
    const int n = grid.n_qubits();
    const DiagonalOperator d(double_occupancy(grid.n_sites()));
    std::vector<HoppingRotation> hr;
    std::vector<HoppingRotation> vr;
    for (const auto &m : layout.horizontal) {
        hr.push_back(matching_rotation(m, n));
    }
    for (const auto &m : layout.vertical) {
        vr.push_back(matching_rotation(m, n));
    }
    AnsatzCircuit c;
    std::size_t p = 0;
    for (int layer = 0; layer < layout.layers; ++layer) {
        const std::size_t pu = p++;
        c.add_gate({DiagonalPhase{d}, pu, 0.5});
        for (const auto &r : hr) {
            c.add_gate({r, p++, 1.0});
        }
        for (const auto &r : vr) {
            c.add_gate({r, p++, 1.0});
        }
        c.add_gate({DiagonalPhase{d}, pu, 0.5});
    }
    return c;
}

inline AnsatzCircuit build_hva(const GridSpec &grid, int layers = 10) {
    return build_hva(grid, hva_layout(grid, layers));
}

struct HvaConfig {
    int layers = 10;
    AdamConfig adam{.tol = 1e-6, .window = 50, .max_steps = 2000};
    double init_angle = 1e-3; ///< common starting angle; 0 leaves the stationary point untouched
    std::vector<int> shell_up;
    std::vector<int> shell_down;

    void validate() const {
        if (layers < 1) {
            throw std::invalid_argument("layers must be positive");
        }
        if (!std::isfinite(init_angle)) {
            throw std::invalid_argument("init_angle must be finite");
        }
        adam.validate();
    }
};

struct HvaProblem {
    GridSpec grid;
    int n_up = 0;
    int n_down = 0;
    FermiSea sea;
    std::shared_ptr<const SectorOperator> h; ///< real-space Hamiltonian
    AnsatzCircuit circuit;

    static HvaProblem make(const GridSpec &grid, int n_up, int n_down, const HvaConfig &cfg) {
        cfg.validate();
        HvaProblem p;
        p.grid = grid;
        p.n_up = n_up;
        p.n_down = n_down;
        p.sea = fermi_sea(grid, n_up, n_down, cfg.shell_up, cfg.shell_down);
        auto sector = std::make_shared<const Sector>(grid.n_qubits(), n_up, n_down);
        p.h = std::make_shared<const SectorOperator>(build_real(grid), sector);
        p.circuit = build_hva(grid, cfg.layers);
        p.circuit.initial = hva_initial_state(grid, p.sea);
        return p;
    }
};

/// ADAM from all angles equal to cfg.init_angle. Epoch 0 records the
/// Slater state (all-zero angles), epoch 1 the optimum; fidelities use
/// `ground`, a ground space of the real-space Hamiltonian.
inline RunResult hva_run(const HvaProblem &prob, const HvaConfig &cfg,
                         const GroundSpace *ground = nullptr, const StateObserver &observe = {}) {
    cfg.validate();
    const SectorOperator &h = *prob.h;
    auto fid = [&](const StateVector &psi) {
        return ground ? fidelity(psi, *ground) : std::numeric_limits<double>::quiet_NaN();
    };
    RunResult res;
    res.circuit = prob.circuit;
    const EnergyGradient g0 =
        circuit_gradient(res.circuit, std::vector<double>(res.circuit.n_params, 0.0), h);
    const std::vector<double> x0(res.circuit.n_params, cfg.init_angle);

    EpochRecord e0;
    e0.energy = g0.energy;
    e0.fidelity = fid(res.circuit.initial);
    e0.max_gradient = detail::max_abs(g0.gradient);
    res.epochs.push_back(e0);
    if (observe) {
        observe(res.circuit.initial, 0, 0);
    }
    res.steps.push_back({0, 0, e0.energy, e0.fidelity});

    auto objective = [&](const std::vector<double> &x) { return circuit_gradient(res.circuit, x, h); };
    auto on_step = [&](int k, const std::vector<double> &x, double e) {
        if (k == 0) {
            return;
        }
        const StateVector s = res.circuit.prepare(x);
        if (observe) {
            observe(s, 1, k);
        }
        res.steps.push_back({k, 1, e, fid(s)});
    };
    const AdamResult ar = adam_optimize(objective, x0, cfg.adam, on_step);

    res.params = ar.params;
    const StateVector psi = res.circuit.prepare(res.params);
    const EnergyGradient gf = circuit_gradient(res.circuit, res.params, h);
    EpochRecord e1;
    e1.epoch = 1;
    e1.energy = gf.energy;
    e1.fidelity = fid(psi);
    e1.max_gradient = detail::max_abs(gf.gradient);
    e1.n_params = res.params.size();
    e1.inner_steps = ar.steps;
    e1.inner_converged = ar.converged;
    res.epochs.push_back(e1);
    res.energy = e1.energy;
    res.fidelity = e1.fidelity;
    res.status = ar.converged ? RunStatus::Converged : RunStatus::Exhausted;
    res.reason = ar.converged ? "energy plateau" : "max_steps reached";
    return res;
}

} // namespace vipsa
