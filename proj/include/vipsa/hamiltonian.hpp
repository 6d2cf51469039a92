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
 * @file hamiltonian.hpp
 * Hubbard Hamiltonians on the real-space and mode registers, interaction
 * coefficient tables and total-spin operators.
 */
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fermion.hpp"
#include "lattice.hpp"
#include "pauli.hpp"

namespace vipsa {

inline int up_qubit(int orbital) { return 2 * orbital; }
inline int down_qubit(int orbital) { return 2 * orbital + 1; }

/// One term V c†_{a up} c†_{b down} c_{c down} c_{d up} of the mode-space
/// interaction. Indices are orbitals (mx + nx*my).
struct InteractionQuadruple {
    int a = 0;
    int b = 0;
    int c = 0;
    int d = 0;
    double V = 0.0;
    double eps = 0.0; ///< e_a + e_b - e_c - e_d

    [[nodiscard]] LadderTerm ladder(cplx coeff = 1.0) const {
        return LadderTerm::two_body(up_qubit(a), down_qubit(b), down_qubit(c), up_qubit(d), coeff);
    }

    [[nodiscard]] InteractionQuadruple conjugate() const { return {d, c, b, a, V, -eps}; }

    [[nodiscard]] bool diagonal() const { return a == d && b == c; }
};

/// Real-space Hubbard model: -t sum_<ij>,s (a†_is a_js + h.c.) + U sum_i n_i,up n_i,down.
inline PauliSum build_real(const GridSpec &grid) {
    grid.validate();
    const int nq = grid.n_qubits();
    std::vector<LadderTerm> terms;
    for (const auto &e : lattice_edges(grid)) {
        for (int s = 0; s < 2; ++s) {
            const int i = 2 * e.site_a + s;
            const int j = 2 * e.site_b + s;
            terms.push_back(LadderTerm::hopping(i, j, -grid.t));
            terms.push_back(LadderTerm::hopping(j, i, -grid.t));
        }
    }
    for (int p = 0; p < grid.n_sites(); ++p) {
        terms.push_back(LadderTerm{grid.U,
                                   {{up_qubit(p), Ladder::Create},
                                    {up_qubit(p), Ladder::Annihilate},
                                    {down_qubit(p), Ladder::Create},
                                    {down_qubit(p), Ladder::Annihilate}}});
    }
    return jordan_wigner(terms, nq);
}

/// sum_i n_i,up n_i,down (U-independent), diagonal.
inline PauliSum double_occupancy(int n_orbitals) {
    std::vector<LadderTerm> terms;
    for (int p = 0; p < n_orbitals; ++p) {
        terms.push_back(LadderTerm{1.0,
                                   {{up_qubit(p), Ladder::Create},
                                    {up_qubit(p), Ladder::Annihilate},
                                    {down_qubit(p), Ladder::Create},
                                    {down_qubit(p), Ladder::Annihilate}}});
    }
    return jordan_wigner(terms, 2 * n_orbitals);
}

/// Per-axis overlap sum_j conj(f_a f_b) f_c f_d of four axis modes.
inline cplx axis_overlap(const AxisMode &a, const AxisMode &b, const AxisMode &c,
                         const AxisMode &d) {
    cplx s{};
    for (int j = 0; j < a.axis_len; ++j) {
        s += std::conj(a.amplitude(j) * b.amplitude(j)) * c.amplitude(j) * d.amplitude(j);
    }
    return s;
}

/// Every (a, b, c, d) with |V| >= 1e-12, where
/// V = U sum_sites conj(phi_a phi_b) phi_c phi_d.
inline std::vector<InteractionQuadruple> interaction_table(const GridSpec &grid) {
    const auto modes = modes_by_orbital(grid);
    const int n = grid.n_sites();
    std::vector<InteractionQuadruple> table;
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            for (int c = 0; c < n; ++c) {
                for (int d = 0; d < n; ++d) {
                    const cplx fx = axis_overlap(modes[a].x, modes[b].x, modes[c].x, modes[d].x);
                    const cplx fy = axis_overlap(modes[a].y, modes[b].y, modes[c].y, modes[d].y);
                    const cplx v = grid.U * fx * fy;
                    if (std::abs(v) < 1e-12) {
                        continue;
                    }
                    if (std::abs(v.imag()) > 1e-12) {
                        throw std::logic_error("complex interaction coefficient");
                    }
                    table.push_back({a, b, c, d, v.real(),
                                     modes[a].energy + modes[b].energy - modes[c].energy -
                                         modes[d].energy});
                }
            }
        }
    }
    return table;
}

struct KSpaceHamiltonian {
    PauliSum kinetic;     ///< sum_k e_k n_k
    PauliSum interaction; ///< sum V O(a,b,c,d)
    PauliSum total;
    std::vector<InteractionQuadruple> table;
};

inline KSpaceHamiltonian build_kspace(const GridSpec &grid) {
    grid.validate();
    const int nq = grid.n_qubits();
    KSpaceHamiltonian h;
    std::vector<LadderTerm> kin;
    for (const auto &m : enumerate_modes(grid)) {
        kin.push_back(LadderTerm::number(m.qubit(Spin::Up), m.energy));
        kin.push_back(LadderTerm::number(m.qubit(Spin::Down), m.energy));
    }
    h.kinetic = jordan_wigner(kin, nq);
    h.table = interaction_table(grid);
    std::vector<LadderTerm> inter;
    inter.reserve(h.table.size());
    for (const auto &q : h.table) {
        inter.push_back(q.ladder(q.V));
    }
    h.interaction = inter.empty() ? PauliSum(nq) : jordan_wigner(inter, nq);
    h.total = h.kinetic + h.interaction;
    return h;
}

struct SpinOperators {
    PauliSum sz;
    PauliSum s2;
};

/// Total S_z and S^2 on a register of 2*n_orbitals qubits.
inline SpinOperators spin_operators(int n_orbitals) {
    const int nq = 2 * n_orbitals;
    std::vector<LadderTerm> sz_terms;
    std::vector<LadderTerm> sp_terms;
    for (int p = 0; p < n_orbitals; ++p) {
        sz_terms.push_back(LadderTerm::number(up_qubit(p), 0.5));
        sz_terms.push_back(LadderTerm::number(down_qubit(p), -0.5));
        sp_terms.push_back(LadderTerm::hopping(up_qubit(p), down_qubit(p)));
    }
    SpinOperators s;
    s.sz = jordan_wigner(sz_terms, nq);
    const PauliSum sp = jordan_wigner(sp_terms, nq);
    const PauliSum sm = sp.adjoint();
    // S^2 = S- S+ + Sz^2 + Sz
    s.s2 = sm * sp + s.sz * s.sz + s.sz;
    return s;
}

} // namespace vipsa
