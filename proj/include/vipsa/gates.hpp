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
 * @file gates.hpp
 * Exact, matrix-free exponentials of the three generator families used by
 * the ansätze: interaction rotations exp(theta (O - O†)), hopping
 * rotations exp(-i theta h) and diagonal phases exp(-i theta d).
 *
 * Each generator couples basis states in disjoint pairs (or acts
 * diagonally), so its exponential is applied pair by pair; this is the
 * closed form 1 + sin(theta) G + (1 - cos(theta)) G^2 evaluated on each
 * invariant two-dimensional block.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "fermion.hpp"
#include "statevector.hpp"

namespace vipsa {

namespace detail {
/// Spreads the bits of `r` over the positions not in `sorted_fixed`
/// (ascending), leaving the fixed positions zero.
template <std::size_t K>
inline std::uint64_t deposit(std::uint64_t r, const std::array<int, K> &sorted_fixed) {
    for (int p : sorted_fixed) {
        const std::uint64_t low = r & ((std::uint64_t{1} << p) - 1);
        r = ((r >> p) << (p + 1)) | low;
    }
    return r;
}

/// Calls f(source, target, sign) for every basis pair with
/// term|source> = sign |target>, where `term` touches exactly the qubits in
/// `fixed` and `pattern` gives the required source bits on them.
template <std::size_t K, class F>
inline void for_each_pair(int n_qubits, std::array<int, K> fixed, std::uint64_t pattern,
                          const std::vector<LadderFactor> &factors, F &&f) {
    std::sort(fixed.begin(), fixed.end());
    const std::uint64_t free_count = std::uint64_t{1} << (n_qubits - static_cast<int>(K));
    for (std::uint64_t r = 0; r < free_count; ++r) {
        const std::uint64_t b = deposit(r, fixed) | pattern;
        const auto img = apply_ladder(factors, b);
        f(b, img->bits, img->sign);
    }
}
} // namespace detail

/// Qubits of O = c†_a c†_b c_c c_d.
struct PoolQuadruple {
    int a = 0;
    int b = 0;
    int c = 0;
    int d = 0;

    [[nodiscard]] LadderTerm ladder() const { return LadderTerm::two_body(a, b, c, d); }

    [[nodiscard]] bool distinct() const {
        std::array<int, 4> q{a, b, c, d};
        std::sort(q.begin(), q.end());
        return std::adjacent_find(q.begin(), q.end()) == q.end();
    }

    void validate(int n_qubits) const {
        if (!distinct()) {
            throw std::invalid_argument("interaction rotation needs four distinct orbitals");
        }
        for (int q : {a, b, c, d}) {
            if (q < 0 || q >= n_qubits) {
                throw std::out_of_range("interaction rotation acts outside the register");
            }
        }
    }

    /// Jordan-Wigner image of O - O†.
    [[nodiscard]] PauliSum generator(int n_qubits) const {
        const auto o = ladder();
        return jordan_wigner(o, n_qubits) - jordan_wigner(o.adjoint(), n_qubits);
    }

    template <class F> void for_each_pair(int n_qubits, F &&f) const {
        const std::uint64_t pattern = (std::uint64_t{1} << c) | (std::uint64_t{1} << d);
        detail::for_each_pair<4>(n_qubits, {a, b, c, d}, pattern, ladder().factors,
                                 std::forward<F>(f));
    }

    friend auto operator<=>(const PoolQuadruple &, const PoolQuadruple &) = default;
};

/// (O - O†)|psi>.
inline StateVector apply_pool_generator(const PoolQuadruple &q, const StateVector &psi) {
    q.validate(psi.n_qubits());
    StateVector out = StateVector::zeros(psi.n_qubits());
    q.for_each_pair(psi.n_qubits(), [&](std::uint64_t src, std::uint64_t dst, int s) {
        out[dst] += double(s) * psi[src];
        out[src] -= double(s) * psi[dst];
    });
    return out;
}

/// exp(theta (O - O†)) applied in place.
inline void apply_pool_unitary(const PoolQuadruple &q, double theta, StateVector &psi) {
    q.validate(psi.n_qubits());
    const double c = std::cos(theta);
    const double sn = std::sin(theta);
    q.for_each_pair(psi.n_qubits(), [&](std::uint64_t src, std::uint64_t dst, int s) {
        const cplx u = psi[src];
        const cplx v = psi[dst];
        psi[src] = c * u - double(s) * sn * v;
        psi[dst] = double(s) * sn * u + c * v;
    });
}

/// <lambda|(O - O†)|phi>.
inline cplx pool_generator_overlap(const PoolQuadruple &q, const StateVector &lambda,
                                   const StateVector &phi) {
    cplx acc{};
    q.for_each_pair(phi.n_qubits(), [&](std::uint64_t src, std::uint64_t dst, int s) {
        acc += double(s) * (std::conj(lambda[dst]) * phi[src] - std::conj(lambda[src]) * phi[dst]);
    });
    return acc;
}

/// h = c†_i c_j + c†_j c_i on two distinct spin orbitals.
class HoppingTerm {
  public:
    HoppingTerm(int i, int j, int n_qubits) : i_(std::min(i, j)), j_(std::max(i, j)) {
        if (i == j || i_ < 0 || j_ >= n_qubits) {
            throw std::invalid_argument("hopping needs two distinct orbitals in the register");
        }
        // h^3 = h ensures exp(-i theta h) = 1 - i sin(theta) h + (cos(theta) - 1) h^2.
        const PauliSum h = pauli(n_qubits);
        const PauliSum diff = h * h * h - h;
        if (diff.max_abs_coefficient() > 1e-10) {
            throw std::invalid_argument("hopping generator fails h^3 = h");
        }
    }

    [[nodiscard]] int i() const { return i_; }
    [[nodiscard]] int j() const { return j_; }

    [[nodiscard]] std::vector<LadderTerm> ladder() const {
        return {LadderTerm::hopping(i_, j_), LadderTerm::hopping(j_, i_)};
    }

    [[nodiscard]] PauliSum pauli(int n_qubits) const { return jordan_wigner(ladder(), n_qubits); }

    template <class F> void for_each_pair(int n_qubits, F &&f) const {
        // source: j occupied, i empty; target via c†_i c_j.
        detail::for_each_pair<2>(n_qubits, {i_, j_}, std::uint64_t{1} << j_,
                                 LadderTerm::hopping(i_, j_).factors, std::forward<F>(f));
    }

  private:
    int i_;
    int j_;
};

/// exp(-i theta h) applied in place.
inline void apply_hopping_unitary(const HoppingTerm &h, double theta, StateVector &psi) {
    const double c = std::cos(theta);
    const cplx ms{0.0, -std::sin(theta)};
    h.for_each_pair(psi.n_qubits(), [&](std::uint64_t src, std::uint64_t dst, int s) {
        const cplx u = psi[src];
        const cplx v = psi[dst];
        psi[src] = c * u + double(s) * ms * v;
        psi[dst] = double(s) * ms * u + c * v;
    });
}

/// <lambda|h|phi>.
inline cplx hopping_overlap(const HoppingTerm &h, const StateVector &lambda,
                            const StateVector &phi) {
    cplx acc{};
    h.for_each_pair(phi.n_qubits(), [&](std::uint64_t src, std::uint64_t dst, int s) {
        acc += double(s) * (std::conj(lambda[dst]) * phi[src] + std::conj(lambda[src]) * phi[dst]);
    });
    return acc;
}

/// Real diagonal operator tabulated on every basis state.
class DiagonalOperator {
  public:
    DiagonalOperator() = default;

    explicit DiagonalOperator(const PauliSum &d) : n_qubits_(d.n_qubits()) {
        if (!d.is_diagonal() || !d.is_hermitian()) {
            throw std::invalid_argument("diagonal phase needs a real Z-only operator");
        }
        values_ = std::make_shared<const std::vector<double>>(CompiledPauliSum(d).diagonal());
    }

    [[nodiscard]] int n_qubits() const { return n_qubits_; }
    [[nodiscard]] const std::vector<double> &values() const { return *values_; }

  private:
    int n_qubits_ = 0;
    std::shared_ptr<const std::vector<double>> values_;
};

/// exp(-i theta d) applied in place, one fused pass over the amplitudes.
inline void apply_diagonal_phase(const DiagonalOperator &d, double theta, StateVector &psi) {
    if (d.n_qubits() != psi.n_qubits()) {
        throw std::invalid_argument("diagonal phase register mismatch");
    }
    const auto &v = d.values();
    for (std::size_t b = 0; b < psi.dim(); ++b) {
        if (v[b] != 0.0) {
            psi[b] *= std::polar(1.0, -theta * v[b]);
        }
    }
}

} // namespace vipsa
