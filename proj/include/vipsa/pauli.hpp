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
 * @file pauli.hpp
 * Pauli strings in symplectic (x, z) bitmask form and canonical weighted
 * sums of them.
 *
 * A string with masks (x, z) and coefficient c stands for
 * c * prod_q P_q with P_q = X (x only), Z (z only) or Y (both bits set).
 */
#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vipsa {

using cplx = std::complex<double>;

/// Terms below this magnitude are dropped on canonicalization.
inline constexpr double kPauliDropTol = 1e-12;

enum class PauliLetter : std::uint8_t { I, X, Y, Z };

namespace detail {
/// i^k for integer k.
inline cplx i_pow(int k) {
    switch (((k % 4) + 4) % 4) {
    case 0:
        return {1.0, 0.0};
    case 1:
        return {0.0, 1.0};
    case 2:
        return {-1.0, 0.0};
    default:
        return {0.0, -1.0};
    }
}

inline std::string format_coefficient(cplx c) {
    std::ostringstream os;
    os << std::setprecision(12);
    if (c.imag() == 0.0) {
        os << c.real();
    } else if (c.real() == 0.0) {
        os << c.imag() << "i";
    } else {
        os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
    }
    return os.str();
}
} // namespace detail

struct PauliString {
    cplx coeff{1.0, 0.0};
    std::uint64_t x = 0;
    std::uint64_t z = 0;

    static PauliString single(PauliLetter p, int qubit, cplx c = 1.0) {
        const std::uint64_t bit = std::uint64_t{1} << qubit;
        PauliString s{c, 0, 0};
        if (p == PauliLetter::X || p == PauliLetter::Y) {
            s.x = bit;
        }
        if (p == PauliLetter::Z || p == PauliLetter::Y) {
            s.z = bit;
        }
        return s;
    }

    [[nodiscard]] PauliLetter letter(int qubit) const {
        const bool xb = (x >> qubit) & 1U;
        const bool zb = (z >> qubit) & 1U;
        if (xb && zb) {
            return PauliLetter::Y;
        }
        if (xb) {
            return PauliLetter::X;
        }
        return zb ? PauliLetter::Z : PauliLetter::I;
    }

    [[nodiscard]] int weight() const { return std::popcount(x | z); }

    /// Canonical text form, e.g. "0.125 X0 Y3 Z5".
    [[nodiscard]] std::string to_string() const {
        std::string s = detail::format_coefficient(coeff);
        const std::uint64_t support = x | z;
        for (int q = 0; q < 64; ++q) {
            if (!((support >> q) & 1U)) {
                continue;
            }
            static constexpr char names[] = {'I', 'X', 'Y', 'Z'};
            s += ' ';
            s += names[static_cast<int>(letter(q))];
            s += std::to_string(q);
        }
        return s;
    }
};

/// Product a*b including the phase from single-qubit Pauli algebra.
inline PauliString multiply(const PauliString &a, const PauliString &b) {
    // P = i^{|x&z|} X^x Z^z; Z^z1 X^x2 = (-1)^{|z1&x2|} X^x2 Z^z1.
    const int ya = std::popcount(a.x & a.z);
    const int yb = std::popcount(b.x & b.z);
    PauliString r;
    r.x = a.x ^ b.x;
    r.z = a.z ^ b.z;
    const int yr = std::popcount(r.x & r.z);
    const int sign = std::popcount(a.z & b.x);
    r.coeff = a.coeff * b.coeff * detail::i_pow(ya + yb - yr + 2 * sign);
    return r;
}

/// True iff the strings anticommute on an even number of qubits.
inline bool commutes(const PauliString &a, const PauliString &b) {
    return std::popcount((a.x & b.z) ^ (a.z & b.x)) % 2 == 0;
}

/// Weighted sum of Pauli strings, kept canonical: one entry per letter
/// pattern, negligible coefficients removed.
class PauliSum {
  public:
    using Key = std::pair<std::uint64_t, std::uint64_t>;

    PauliSum() = default;
    explicit PauliSum(int n_qubits) : n_qubits_(n_qubits) {}
    PauliSum(int n_qubits, const PauliString &s) : n_qubits_(n_qubits) { add(s); }

    static PauliSum identity(int n_qubits, cplx c = 1.0) {
        return PauliSum(n_qubits, PauliString{c, 0, 0});
    }

    [[nodiscard]] int n_qubits() const { return n_qubits_; }
    [[nodiscard]] std::size_t size() const { return terms_.size(); }
    [[nodiscard]] bool empty() const { return terms_.empty(); }

    void add(const PauliString &s) {
        check_register(s);
        auto [it, inserted] = terms_.try_emplace(Key{s.x, s.z}, s.coeff);
        if (!inserted) {
            it->second += s.coeff;
        }
        if (std::abs(it->second) < kPauliDropTol) {
            terms_.erase(it);
        }
    }

    PauliSum &operator+=(const PauliSum &o) {
        require_same_register(o);
        for (const auto &[k, c] : o.terms_) {
            add({c, k.first, k.second});
        }
        return *this;
    }

    PauliSum &operator-=(const PauliSum &o) { return *this += o * cplx{-1.0, 0.0}; }

    PauliSum &operator*=(cplx c) {
        std::map<Key, cplx> out;
        for (const auto &[k, v] : terms_) {
            const cplx nv = v * c;
            if (std::abs(nv) >= kPauliDropTol) {
                out.emplace(k, nv);
            }
        }
        terms_ = std::move(out);
        return *this;
    }

    friend PauliSum operator+(PauliSum a, const PauliSum &b) { return a += b; }
    friend PauliSum operator-(PauliSum a, const PauliSum &b) { return a -= b; }
    friend PauliSum operator*(PauliSum a, cplx c) { return a *= c; }
    friend PauliSum operator*(cplx c, PauliSum a) { return a *= c; }

    friend PauliSum operator*(const PauliSum &a, const PauliSum &b) {
        a.require_same_register(b);
        PauliSum r(a.n_qubits_);
        for (const auto &[ka, ca] : a.terms_) {
            for (const auto &[kb, cb] : b.terms_) {
                r.add(multiply({ca, ka.first, ka.second}, {cb, kb.first, kb.second}));
            }
        }
        return r;
    }

    /// Hermitian conjugate (Pauli strings are Hermitian, so only the
    /// coefficients are conjugated).
    [[nodiscard]] PauliSum adjoint() const {
        PauliSum r(n_qubits_);
        for (const auto &[k, c] : terms_) {
            r.terms_.emplace(k, std::conj(c));
        }
        return r;
    }

    [[nodiscard]] bool is_hermitian(double tol = kPauliDropTol) const {
        for (const auto &[k, c] : terms_) {
            if (std::abs(c.imag()) > tol) {
                return false;
            }
        }
        return true;
    }

    /// True when every string is built from I and Z only.
    [[nodiscard]] bool is_diagonal() const {
        for (const auto &[k, c] : terms_) {
            if (k.first != 0) {
                return false;
            }
        }
        return true;
    }

    /// Largest coefficient magnitude (0 for the empty sum).
    [[nodiscard]] double max_abs_coefficient() const {
        double m = 0.0;
        for (const auto &[k, c] : terms_) {
            m = std::max(m, std::abs(c));
        }
        return m;
    }

    /// Terms in canonical (x, z) order.
    [[nodiscard]] std::vector<PauliString> terms() const {
        std::vector<PauliString> out;
        out.reserve(terms_.size());
        for (const auto &[k, c] : terms_) {
            out.push_back({c, k.first, k.second});
        }
        return out;
    }

    [[nodiscard]] cplx coefficient(std::uint64_t x, std::uint64_t z) const {
        const auto it = terms_.find(Key{x, z});
        return it == terms_.end() ? cplx{} : it->second;
    }

    [[nodiscard]] std::string to_string() const {
        std::string s;
        for (const auto &t : terms()) {
            if (!s.empty()) {
                s += '\n';
            }
            s += t.to_string();
        }
        return s;
    }

    friend bool operator==(const PauliSum &a, const PauliSum &b) {
        return (a - b).empty();
    }

  private:
    void check_register(const PauliString &s) const {
        const std::uint64_t support = s.x | s.z;
        if (n_qubits_ < 64 && (support >> n_qubits_) != 0) {
            throw std::out_of_range("Pauli string acts outside the register");
        }
    }

    void require_same_register(const PauliSum &o) const {
        if (o.n_qubits_ != n_qubits_) {
            throw std::invalid_argument("Pauli sums act on different registers");
        }
    }

    int n_qubits_ = 0;
    std::map<Key, cplx> terms_;
};

/// [a, b] = ab - ba.
inline PauliSum commutator(const PauliSum &a, const PauliSum &b) {
    return a * b - b * a;
}

} // namespace vipsa
