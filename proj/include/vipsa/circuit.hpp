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
 * @file circuit.hpp
 * Parameterized ansatz circuits and their exact energy gradients by
 * adjoint (reverse-sweep) differentiation.
 */
#pragma once

#include <cmath>
#include <concepts>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "gates.hpp"

namespace vipsa {

enum class GateKind : std::uint8_t { PoolRotation, HoppingRotation, DiagonalPhase };

/// exp(theta (O - O†)).
struct PoolRotation {
    PoolQuadruple quad;
};

/// exp(-i theta sum_e h_e) over mutually commuting hopping terms.
struct HoppingRotation {
    std::vector<HoppingTerm> terms;
};

/// exp(-i theta d).
struct DiagonalPhase {
    DiagonalOperator op;
};

using GateGenerator = std::variant<PoolRotation, HoppingRotation, DiagonalPhase>;

/// One gate; its angle is scale * params[param].
struct Gate {
    GateGenerator generator;
    std::size_t param = 0;
    double scale = 1.0;

    [[nodiscard]] GateKind kind() const { return static_cast<GateKind>(generator.index()); }
};

inline void apply_gate(const Gate &g, double angle, StateVector &psi) {
    std::visit(
        [&](const auto &gen) {
            using T = std::decay_t<decltype(gen)>;
            if constexpr (std::is_same_v<T, PoolRotation>) {
                apply_pool_unitary(gen.quad, angle, psi);
            } else if constexpr (std::is_same_v<T, HoppingRotation>) {
                for (const auto &h : gen.terms) {
                    apply_hopping_unitary(h, angle, psi);
                }
            } else {
                apply_diagonal_phase(gen.op, angle, psi);
            }
        },
        g.generator);
}

/// <lambda|G|phi> with the gate written as exp(angle * G).
inline cplx generator_overlap(const Gate &g, const StateVector &lambda, const StateVector &phi) {
    return std::visit(
        [&](const auto &gen) -> cplx {
            using T = std::decay_t<decltype(gen)>;
            if constexpr (std::is_same_v<T, PoolRotation>) {
                return pool_generator_overlap(gen.quad, lambda, phi);
            } else if constexpr (std::is_same_v<T, HoppingRotation>) {
                cplx acc{};
                for (const auto &h : gen.terms) {
                    acc += hopping_overlap(h, lambda, phi);
                }
                return cplx{0.0, -1.0} * acc;
            } else {
                const auto &v = gen.op.values();
                cplx acc{};
                for (std::size_t b = 0; b < phi.dim(); ++b) {
                    acc += std::conj(lambda[b]) * v[b] * phi[b];
                }
                return cplx{0.0, -1.0} * acc;
            }
        },
        g.generator);
}

/// Operators the gradient engine can measure: anything mapping a state to
/// h|state>.
template <class Op>
concept StateOperator = requires(const Op &op, const StateVector &psi) {
    { op.apply(psi) } -> std::convertible_to<StateVector>;
};

struct AnsatzCircuit {
    StateVector initial;
    std::vector<Gate> gates;
    std::size_t n_params = 0;

    void add_gate(Gate g) {
        n_params = std::max(n_params, g.param + 1);
        gates.push_back(std::move(g));
    }

    void check_params(std::span<const double> params) const {
        if (params.size() != n_params) {
            throw std::invalid_argument("parameter count does not match circuit");
        }
        for (double p : params) {
            if (!std::isfinite(p)) {
                throw std::domain_error("non-finite circuit parameter");
            }
        }
    }

    [[nodiscard]] StateVector prepare(std::span<const double> params) const {
        check_params(params);
        StateVector psi = initial;
        for (const auto &g : gates) {
            apply_gate(g, g.scale * params[g.param], psi);
        }
        return psi;
    }
};

struct EnergyGradient {
    double energy = 0.0;
    std::vector<double> gradient;
};

/// Energy and its exact gradient: one forward pass, one H application and
/// one reverse sweep that un-applies each gate from both the state and
/// H|state>.
template <StateOperator Op>
EnergyGradient circuit_gradient(const AnsatzCircuit &c, std::span<const double> params,
                                const Op &h) {
    StateVector phi = c.prepare(params);
    StateVector lambda = h.apply(phi);
    EnergyGradient out;
    out.energy = inner(phi, lambda).real();
    out.gradient.assign(c.n_params, 0.0);
    for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) {
        const double angle = it->scale * params[it->param];
        out.gradient[it->param] += it->scale * 2.0 * generator_overlap(*it, lambda, phi).real();
        apply_gate(*it, -angle, phi);
        apply_gate(*it, -angle, lambda);
    }
    return out;
}

template <StateOperator Op>
double circuit_energy(const AnsatzCircuit &c, std::span<const double> params, const Op &h) {
    const StateVector psi = c.prepare(params);
    return inner(psi, h.apply(psi)).real();
}

} // namespace vipsa
