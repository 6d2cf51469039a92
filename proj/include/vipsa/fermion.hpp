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
 * @file fermion.hpp
 * Products of fermionic ladder operators and their Jordan-Wigner images.
 *
 * Occupation convention: basis bit q = 1 means spin orbital q is occupied,
 * n_q = (I - Z_q)/2, c_q = Z_0..Z_{q-1} (X_q + iY_q)/2.
 */
#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pauli.hpp"

namespace vipsa {

enum class Ladder : std::uint8_t { Create, Annihilate };

struct LadderFactor {
    int orbital = 0;
    Ladder op = Ladder::Create;

    friend bool operator==(const LadderFactor &, const LadderFactor &) = default;
};

/// coeff * f_0 f_1 ... f_{n-1}; the rightmost factor acts first.
struct LadderTerm {
    cplx coeff{1.0, 0.0};
    std::vector<LadderFactor> factors;

    static LadderTerm hopping(int i, int j, cplx c = 1.0) {
        return {c, {{i, Ladder::Create}, {j, Ladder::Annihilate}}};
    }

    static LadderTerm number(int q, cplx c = 1.0) { return hopping(q, q, c); }

    /// c†_a c†_b c_c c_d.
    static LadderTerm two_body(int a, int b, int c, int d, cplx coeff = 1.0) {
        return {coeff,
                {{a, Ladder::Create},
                 {b, Ladder::Create},
                 {c, Ladder::Annihilate},
                 {d, Ladder::Annihilate}}};
    }

    /// Reversed factor order, flipped ladder types, conjugated coefficient.
    [[nodiscard]] LadderTerm adjoint() const {
        LadderTerm r{std::conj(coeff), {}};
        r.factors.reserve(factors.size());
        for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
            r.factors.push_back(
                {it->orbital, it->op == Ladder::Create ? Ladder::Annihilate : Ladder::Create});
        }
        return r;
    }

    /// Identical factors anywhere in the product make it vanish: two equal
    /// factors can be brought together by anticommutation (picking up only
    /// a sign and terms that are themselves zero), and c^2 = (c†)^2 = 0.
    [[nodiscard]] bool is_zero() const {
        if (coeff == cplx{}) {
            return true;
        }
        for (std::size_t i = 0; i < factors.size(); ++i) {
            for (std::size_t j = i + 1; j < factors.size(); ++j) {
                if (factors[i] != factors[j]) {
                    continue;
                }
                // Only vanishes if no opposite factor on the same orbital sits
                // between them.
                bool separated = false;
                for (std::size_t k = i + 1; k < j; ++k) {
                    separated |= factors[k].orbital == factors[i].orbital;
                }
                if (!separated) {
                    return true;
                }
            }
        }
        return false;
    }

    [[nodiscard]] int max_orbital() const {
        int m = -1;
        for (const auto &f : factors) {
            m = std::max(m, f.orbital);
        }
        return m;
    }
};

/// Result of acting with a ladder product on a computational basis state.
struct BasisImage {
    std::uint64_t bits = 0;
    int sign = 1;
};

/// Applies the factors right to left with Jordan-Wigner parity signs;
/// empty when the product annihilates the state.
inline std::optional<BasisImage> apply_ladder(const std::vector<LadderFactor> &factors,
                                              std::uint64_t bits) {
    int sign = 1;
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
        const std::uint64_t bit = std::uint64_t{1} << it->orbital;
        const bool occupied = (bits & bit) != 0;
        if ((it->op == Ladder::Create) == occupied) {
            return std::nullopt;
        }
        if (std::popcount(bits & (bit - 1)) & 1) {
            sign = -sign;
        }
        bits ^= bit;
    }
    return BasisImage{bits, sign};
}

namespace detail {
inline PauliSum jw_factor(const LadderFactor &f, int n_qubits) {
    std::uint64_t chain = (std::uint64_t{1} << f.orbital) - 1;
    const double s = f.op == Ladder::Create ? -0.5 : 0.5;
    PauliSum r(n_qubits);
    PauliString x = PauliString::single(PauliLetter::X, f.orbital, 0.5);
    PauliString y = PauliString::single(PauliLetter::Y, f.orbital, cplx{0.0, s});
    x.z |= chain;
    y.z |= chain;
    r.add(x);
    r.add(y);
    return r;
}
} // namespace detail

/// Exact Pauli expansion of a ladder product.
inline PauliSum jordan_wigner(const LadderTerm &term, int n_qubits) {
    if (n_qubits <= 0 || n_qubits > 63) {
        throw std::out_of_range("register size out of range");
    }
    for (const auto &f : term.factors) {
        if (f.orbital < 0 || f.orbital >= n_qubits) {
            throw std::out_of_range("ladder factor outside the register");
        }
    }
    PauliSum r = PauliSum::identity(n_qubits, term.coeff);
    for (const auto &f : term.factors) {
        r = r * detail::jw_factor(f, n_qubits);
    }
    return r;
}

inline PauliSum jordan_wigner(const std::vector<LadderTerm> &terms, int n_qubits) {
    PauliSum r(n_qubits);
    for (const auto &t : terms) {
        r += jordan_wigner(t, n_qubits);
    }
    return r;
}

} // namespace vipsa
