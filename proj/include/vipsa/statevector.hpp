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
 * @file statevector.hpp
 * Dense statevector over 2^n computational basis states and the
 * matrix-free action of Pauli sums on it.
 *
 * Amplitude index bit q is the occupation of qubit q.
 */
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "pauli.hpp"

namespace vipsa {

class StateVector {
  public:
    StateVector() = default;

    /// |0...0>.
    explicit StateVector(int n_qubits) : n_qubits_(n_qubits) {
        if (n_qubits < 1 || n_qubits > 30) {
            throw std::out_of_range("unsupported register size");
        }
        amps_.assign(std::size_t{1} << n_qubits, cplx{});
        amps_[0] = 1.0;
    }

    StateVector(int n_qubits, std::vector<cplx> amps)
        : n_qubits_(n_qubits), amps_(std::move(amps)) {
        if (amps_.size() != (std::size_t{1} << n_qubits)) {
            throw std::invalid_argument("amplitude count does not match register");
        }
    }

    static StateVector zeros(int n_qubits) {
        StateVector s(n_qubits);
        s.amps_[0] = 0.0;
        return s;
    }

    [[nodiscard]] int n_qubits() const { return n_qubits_; }
    [[nodiscard]] std::size_t dim() const { return amps_.size(); }

    [[nodiscard]] std::span<cplx> amplitudes() { return amps_; }
    [[nodiscard]] std::span<const cplx> amplitudes() const { return amps_; }

    cplx &operator[](std::size_t i) { return amps_[i]; }
    const cplx &operator[](std::size_t i) const { return amps_[i]; }

    [[nodiscard]] double norm() const {
        double s = 0.0;
        for (const auto &a : amps_) {
            s += std::norm(a);
        }
        return std::sqrt(s);
    }

    void normalize() {
        const double n = norm();
        if (n == 0.0) {
            throw std::domain_error("cannot normalize the zero vector");
        }
        for (auto &a : amps_) {
            a /= n;
        }
    }

    /// Largest |Im| over all amplitudes.
    [[nodiscard]] double max_imag() const {
        double m = 0.0;
        for (const auto &a : amps_) {
            m = std::max(m, std::abs(a.imag()));
        }
        return m;
    }

    StateVector &operator+=(const StateVector &o) {
        require_same(o);
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            amps_[i] += o.amps_[i];
        }
        return *this;
    }

    StateVector &operator-=(const StateVector &o) {
        require_same(o);
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            amps_[i] -= o.amps_[i];
        }
        return *this;
    }

    StateVector &operator*=(cplx c) {
        for (auto &a : amps_) {
            a *= c;
        }
        return *this;
    }

    /// this += c * o
    void axpy(cplx c, const StateVector &o) {
        require_same(o);
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            amps_[i] += c * o.amps_[i];
        }
    }

    friend StateVector operator+(StateVector a, const StateVector &b) { return a += b; }
    friend StateVector operator-(StateVector a, const StateVector &b) { return a -= b; }
    friend StateVector operator*(cplx c, StateVector a) { return a *= c; }

    void require_same(const StateVector &o) const {
        if (o.n_qubits_ != n_qubits_) {
            throw std::invalid_argument("statevectors live on different registers");
        }
    }

  private:
    int n_qubits_ = 0;
    std::vector<cplx> amps_;
};

/// <a|b>
inline cplx inner(const StateVector &a, const StateVector &b) {
    a.require_same(b);
    cplx s{};
    const auto x = a.amplitudes();
    const auto y = b.amplitudes();
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += std::conj(x[i]) * y[i];
    }
    return s;
}

inline StateVector basis_state(const std::vector<int> &occupied, int n_qubits) {
    std::uint64_t bits = 0;
    for (int q : occupied) {
        if (q < 0 || q >= n_qubits) {
            throw std::out_of_range("occupied qubit outside the register");
        }
        bits |= std::uint64_t{1} << q;
    }
    StateVector s = StateVector::zeros(n_qubits);
    s[bits] = 1.0;
    return s;
}

/// Pauli sum regrouped by X pattern so that one pass over the amplitudes
/// applies every string sharing a bit flip.
class CompiledPauliSum {
  public:
    struct Group {
        std::uint64_t x = 0;
        std::vector<std::pair<std::uint64_t, cplx>> z_terms; ///< (z mask, coeff * i^{|x&z|})
    };

    CompiledPauliSum() = default;

    explicit CompiledPauliSum(const PauliSum &h) : n_qubits_(h.n_qubits()) {
        std::map<std::uint64_t, Group> groups;
        for (const auto &t : h.terms()) {
            auto &g = groups[t.x];
            g.x = t.x;
            g.z_terms.emplace_back(t.z, t.coeff * detail::i_pow(std::popcount(t.x & t.z)));
        }
        for (auto &[x, g] : groups) {
            groups_.push_back(std::move(g));
        }
    }

    [[nodiscard]] int n_qubits() const { return n_qubits_; }
    [[nodiscard]] const std::vector<Group> &groups() const { return groups_; }

    /// Amplitude factor of group `g` for source basis state `b`:
    /// <b^x| h_g |b>.
    static cplx element(const Group &g, std::uint64_t b) {
        cplx s{};
        for (const auto &[z, c] : g.z_terms) {
            s += (std::popcount(z & b) & 1) ? -c : c;
        }
        return s;
    }

    [[nodiscard]] StateVector apply(const StateVector &psi) const {
        if (psi.n_qubits() != n_qubits_) {
            throw std::invalid_argument("operator and state registers differ");
        }
        StateVector out = StateVector::zeros(n_qubits_);
        const std::uint64_t dim = psi.dim();
        for (const auto &g : groups_) {
            for (std::uint64_t b = 0; b < dim; ++b) {
                const cplx a = psi[b];
                if (a == cplx{}) {
                    continue;
                }
                out[b ^ g.x] += element(g, b) * a;
            }
        }
        return out;
    }

    /// Diagonal of a Z-only sum evaluated on every basis state.
    [[nodiscard]] std::vector<double> diagonal() const {
        std::vector<double> d(std::size_t{1} << n_qubits_, 0.0);
        for (const auto &g : groups_) {
            if (g.x != 0) {
                throw std::invalid_argument("operator is not diagonal");
            }
            for (std::uint64_t b = 0; b < d.size(); ++b) {
                d[b] += element(g, b).real();
            }
        }
        return d;
    }

  private:
    int n_qubits_ = 0;
    std::vector<Group> groups_;
};

/// h|psi>; not normalized.
inline StateVector apply_pauli_sum(const PauliSum &h, const StateVector &psi) {
    return CompiledPauliSum(h).apply(psi);
}

/// <psi|h|psi> for Hermitian h.
inline double expectation(const PauliSum &h, const StateVector &psi) {
    if (!h.is_hermitian()) {
        throw std::invalid_argument("expectation requires a Hermitian operator");
    }
    const cplx e = inner(psi, apply_pauli_sum(h, psi));
    if (std::abs(e.imag()) > 1e-10 * std::max(1.0, std::abs(e.real()))) {
        throw std::domain_error("expectation has a non-negligible imaginary part");
    }
    return e.real();
}

/// Number of occupied up (even) and down (odd) qubits of a basis index.
inline std::pair<int, int> spin_counts(std::uint64_t bits) {
    constexpr std::uint64_t even = 0x5555555555555555ULL;
    return {std::popcount(bits & even), std::popcount(bits & ~even)};
}

/// Total weight of amplitudes outside the (n_up, n_down) sector.
inline double weight_outside_sector(const StateVector &psi, int n_up, int n_down) {
    double w = 0.0;
    for (std::uint64_t b = 0; b < psi.dim(); ++b) {
        if (spin_counts(b) != std::pair{n_up, n_down}) {
            w += std::norm(psi[b]);
        }
    }
    return w;
}

/// Product of per-spin Slater determinants. Column j of `w` is the
/// single-particle orbital j expressed on the register's orbitals; the
/// occupied lists name columns. Qubit of orbital p with spin s is 2p + s.
inline StateVector slater_statevector(const Eigen::MatrixXcd &w, const std::vector<int> &occ_up,
                                      const std::vector<int> &occ_down) {
    const auto n = w.rows();
    if (w.cols() != n) {
        throw std::invalid_argument("single-particle transform must be square");
    }
    const Eigen::MatrixXcd gram = w.adjoint() * w;
    if ((gram - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10) {
        throw std::invalid_argument("single-particle transform is not unitary");
    }
    for (const auto *occ : {&occ_up, &occ_down}) {
        for (int j : *occ) {
            if (j < 0 || j >= n) {
                throw std::out_of_range("occupied orbital outside the transform");
            }
        }
    }
    const int n_qubits = static_cast<int>(2 * n);
    StateVector psi = StateVector::zeros(n_qubits);

    // prod_{j up} d†_j prod_{j down} d†_j |0> expands into determinants
    // times a†_{p1 up}..a†_{pk up} a†_{q1 down}..|0>; |b> itself is the
    // ascending-qubit creation string.
    auto det_of = [&](const std::vector<int> &rows, const std::vector<int> &cols) {
        const auto k = static_cast<Eigen::Index>(rows.size());
        if (k == 0) {
            return cplx{1.0, 0.0};
        }
        Eigen::MatrixXcd m(k, k);
        for (Eigen::Index r = 0; r < k; ++r) {
            for (Eigen::Index c = 0; c < k; ++c) {
                m(r, c) = w(rows[r], cols[c]);
            }
        }
        return m.determinant();
    };

    std::vector<int> rows_up;
    std::vector<int> rows_dn;
    const std::uint64_t dim = psi.dim();
    for (std::uint64_t b = 0; b < dim; ++b) {
        const auto [nu, nd] = spin_counts(b);
        if (nu != static_cast<int>(occ_up.size()) || nd != static_cast<int>(occ_down.size())) {
            continue;
        }
        rows_up.clear();
        rows_dn.clear();
        for (int p = 0; p < n; ++p) {
            if ((b >> (2 * p)) & 1U) {
                rows_up.push_back(p);
            }
            if ((b >> (2 * p + 1)) & 1U) {
                rows_dn.push_back(p);
            }
        }
        // Reordering sign: one swap per (up, down) pair with down qubit < up qubit.
        int swaps = 0;
        for (int pd : rows_dn) {
            for (int pu : rows_up) {
                swaps += (2 * pd + 1 < 2 * pu) ? 1 : 0;
            }
        }
        const double sign = (swaps & 1) ? -1.0 : 1.0;
        psi[b] = sign * det_of(rows_up, occ_up) * det_of(rows_dn, occ_down);
    }
    return psi;
}

} // namespace vipsa
