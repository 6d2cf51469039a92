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
 * @file sector.hpp
 * Fixed (n_up, n_down) particle-number sectors and sparse operators
 * restricted to them.
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "statevector.hpp"

namespace vipsa {

/// Basis states with n_up occupied even qubits and n_down occupied odd
/// qubits, in ascending index order.
class Sector {
  public:
    Sector(int n_qubits, int n_up, int n_down)
        : n_qubits_(n_qubits), n_up_(n_up), n_down_(n_down) {
        if (n_qubits % 2 != 0 || n_qubits > 30) {
            throw std::invalid_argument("sector needs an even register of at most 30 qubits");
        }
        const int n_orb = n_qubits / 2;
        if (n_up < 0 || n_down < 0 || n_up > n_orb || n_down > n_orb) {
            throw std::invalid_argument("sector particle counts out of range");
        }
        const std::uint64_t full = std::uint64_t{1} << n_qubits;
        index_.assign(full, -1);
        for (std::uint64_t b = 0; b < full; ++b) {
            if (spin_counts(b) == std::pair{n_up, n_down}) {
                index_[b] = static_cast<std::int32_t>(states_.size());
                states_.push_back(b);
            }
        }
    }

    [[nodiscard]] int n_qubits() const { return n_qubits_; }
    [[nodiscard]] int n_up() const { return n_up_; }
    [[nodiscard]] int n_down() const { return n_down_; }
    [[nodiscard]] std::size_t dim() const { return states_.size(); }
    [[nodiscard]] const std::vector<std::uint64_t> &states() const { return states_; }

    /// Position of basis state b in the sector, or -1.
    [[nodiscard]] std::int32_t index(std::uint64_t b) const { return index_[b]; }

    [[nodiscard]] std::vector<cplx> restrict(const StateVector &psi) const {
        if (psi.n_qubits() != n_qubits_) {
            throw std::invalid_argument("state and sector registers differ");
        }
        std::vector<cplx> v(states_.size());
        for (std::size_t i = 0; i < states_.size(); ++i) {
            v[i] = psi[states_[i]];
        }
        return v;
    }

    [[nodiscard]] StateVector embed(const std::vector<cplx> &v) const {
        if (v.size() != states_.size()) {
            throw std::invalid_argument("sector vector has the wrong length");
        }
        StateVector psi = StateVector::zeros(n_qubits_);
        for (std::size_t i = 0; i < states_.size(); ++i) {
            psi[states_[i]] = v[i];
        }
        return psi;
    }

    [[nodiscard]] std::string label() const {
        return std::to_string(n_qubits_) + "q(" + std::to_string(n_up_) + "," +
               std::to_string(n_down_) + ")";
    }

  private:
    int n_qubits_;
    int n_up_;
    int n_down_;
    std::vector<std::uint64_t> states_;
    std::vector<std::int32_t> index_;
};

/// Compressed-row matrix of a Pauli sum restricted to one sector.
class SectorOperator {
  public:
    SectorOperator(const PauliSum &h, std::shared_ptr<const Sector> sector)
        : sector_(std::move(sector)) {
        if (h.n_qubits() != sector_->n_qubits()) {
            throw std::invalid_argument("operator and sector registers differ");
        }
        const CompiledPauliSum compiled(h);
        const auto &states = sector_->states();
        const std::size_t n = states.size();
        // Column-wise gather: entry (target, source) = <target|h|source>.
        std::vector<std::vector<std::pair<std::int32_t, cplx>>> rows(n);
        for (std::size_t col = 0; col < n; ++col) {
            const std::uint64_t b = states[col];
            for (const auto &g : compiled.groups()) {
                const cplx v = CompiledPauliSum::element(g, b);
                if (std::abs(v) < 1e-14) {
                    continue;
                }
                const std::int32_t row = sector_->index(b ^ g.x);
                if (row < 0) {
                    throw std::domain_error("operator leaves the particle-number sector " +
                                            sector_->label());
                }
                rows[row].emplace_back(static_cast<std::int32_t>(col), v);
            }
        }
        row_ptr_.reserve(n + 1);
        row_ptr_.push_back(0);
        for (auto &r : rows) {
            std::sort(r.begin(), r.end(),
                      [](const auto &x, const auto &y) { return x.first < y.first; });
            for (const auto &[c, v] : r) {
                cols_.push_back(c);
                vals_.push_back(v);
            }
            row_ptr_.push_back(cols_.size());
            r.clear();
            r.shrink_to_fit();
        }
        real_ = std::all_of(vals_.begin(), vals_.end(),
                            [](const cplx &v) { return v.imag() == 0.0; });
    }

    [[nodiscard]] const Sector &sector() const { return *sector_; }
    [[nodiscard]] std::shared_ptr<const Sector> sector_ptr() const { return sector_; }
    [[nodiscard]] std::size_t dim() const { return sector_->dim(); }
    [[nodiscard]] std::size_t nnz() const { return vals_.size(); }
    [[nodiscard]] bool is_real() const { return real_; }

    /// y = H x on sector coordinates.
    void multiply(const cplx *x, cplx *y) const {
        const std::size_t n = dim();
        for (std::size_t r = 0; r < n; ++r) {
            cplx acc{};
            for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
                acc += vals_[k] * x[cols_[k]];
            }
            y[r] = acc;
        }
    }

    [[nodiscard]] std::vector<cplx> multiply(const std::vector<cplx> &x) const {
        std::vector<cplx> y(x.size());
        multiply(x.data(), y.data());
        return y;
    }

    /// H|psi> for a state supported in the sector (amplitudes outside it
    /// are ignored).
    [[nodiscard]] StateVector apply(const StateVector &psi) const {
        return sector_->embed(multiply(sector_->restrict(psi)));
    }

    [[nodiscard]] double expectation(const StateVector &psi) const {
        const auto x = sector_->restrict(psi);
        const auto y = multiply(x);
        cplx s{};
        for (std::size_t i = 0; i < x.size(); ++i) {
            s += std::conj(x[i]) * y[i];
        }
        return s.real();
    }

    template <class F> void for_each_entry(F &&f) const {
        for (std::size_t r = 0; r < dim(); ++r) {
            for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
                f(r, static_cast<std::size_t>(cols_[k]), vals_[k]);
            }
        }
    }

  private:
    std::shared_ptr<const Sector> sector_;
    std::vector<std::size_t> row_ptr_;
    std::vector<std::int32_t> cols_;
    std::vector<cplx> vals_;
    bool real_ = true;
};

} // namespace vipsa
