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
 * @file lattice.hpp
 * Rectangular Hubbard grids: geometry, boundary conditions, single-particle
 * modes and the Fermi-sea occupation used as the non-interacting reference.
 *
 * Spin orbitals live on qubit 2*orbital + spin, with orbital = x + nx*y for
 * both the real-space register (x, y are site coordinates) and the mode
 * register (x, y are the per-axis mode indices).
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace vipsa {

enum class Boundary : std::uint8_t { Open, Periodic };
enum class Spin : std::uint8_t { Up = 0, Down = 1 };

inline const char *to_string(Boundary bc) {
    return bc == Boundary::Open ? "open" : "periodic";
}

struct GridSpec {
    int nx = 2;
    int ny = 2;
    Boundary bc_x = Boundary::Open;
    Boundary bc_y = Boundary::Open;
    double t = 1.0;
    double U = 0.0;

    /// Grid with the default boundary rule: length-2 axes are open, longer
    /// axes periodic.
    static GridSpec make(int nx, int ny, double t = 1.0, double U = 0.0) {
        GridSpec g;
        g.nx = nx;
        g.ny = ny;
        g.bc_x = nx > 2 ? Boundary::Periodic : Boundary::Open;
        g.bc_y = ny > 2 ? Boundary::Periodic : Boundary::Open;
        g.t = t;
        g.U = U;
        g.validate();
        return g;
    }

    void validate() const {
        if (nx < 2 || ny < 2) {
            throw std::invalid_argument("grid axes must have length >= 2");
        }
        if (2 * nx * ny > 24) {
            throw std::invalid_argument("grid too large for a dense register");
        }
        if (!std::isfinite(t) || !std::isfinite(U)) {
            throw std::invalid_argument("t and U must be finite");
        }
    }

    [[nodiscard]] int n_sites() const { return nx * ny; }
    [[nodiscard]] int n_qubits() const { return 2 * nx * ny; }
    [[nodiscard]] int orbital(int x, int y) const { return x + nx * y; }

    [[nodiscard]] std::string label() const {
        return std::to_string(nx) + "x" + std::to_string(ny);
    }

    friend bool operator==(const GridSpec &, const GridSpec &) = default;
};

/// One standing or travelling wave along a single axis.
struct AxisMode {
    int axis_len = 2;
    Boundary bc = Boundary::Open;
    int m = 0;
    double k = 0.0;

    static AxisMode make(int axis_len, Boundary bc, int m) {
        AxisMode a{axis_len, bc, m, 0.0};
        if (bc == Boundary::Periodic) {
            a.k = 2.0 * std::numbers::pi * m / axis_len;
        } else {
            a.k = std::numbers::pi * (m + 1) / (axis_len + 1);
        }
        return a;
    }

    /// -2t cos k. A periodic axis of length 2 has a single bond, so its
    /// plane waves see -t cos k.
    [[nodiscard]] double energy(double t) const {
        const double bonds = (bc == Boundary::Periodic && axis_len == 2) ? 1.0 : 2.0;
        return -bonds * t * std::cos(k);
    }

    /// Momentum eigenfunction at coordinate j (plane wave on periodic axes,
    /// standing wave on open axes).
    [[nodiscard]] std::complex<double> amplitude(int j) const {
        if (bc == Boundary::Periodic) {
            return std::polar(1.0 / std::sqrt(double(axis_len)), k * j);
        }
        return {std::sqrt(2.0 / (axis_len + 1)) * std::sin(k * (j + 1)), 0.0};
    }

    /// Real orbital with the same energy: cos/sin combinations of the +-k
    /// plane-wave pair on periodic axes.
    [[nodiscard]] double real_amplitude(int j) const {
        if (bc == Boundary::Open) {
            return amplitude(j).real();
        }
        const double L = axis_len;
        if (m == 0 || 2 * m == axis_len) {
            return std::cos(k * j) / std::sqrt(L);
        }
        if (2 * m < axis_len) {
            return std::sqrt(2.0 / L) * std::cos(k * j);
        }
        return std::sqrt(2.0 / L) * std::sin(k * j);
    }
};

struct Mode {
    AxisMode x;
    AxisMode y;
    double energy = 0.0;
    int orbital = 0; ///< mx + nx*my

    [[nodiscard]] int mx() const { return x.m; }
    [[nodiscard]] int my() const { return y.m; }

    [[nodiscard]] int qubit(Spin s) const {
        return 2 * orbital + static_cast<int>(s);
    }
};

/// Tolerance used to decide that two single-particle energies are equal.
inline constexpr double kEnergyTieTol = 1e-9;

namespace detail {
inline long long energy_key(double e) {
    return std::llround(e / kEnergyTieTol);
}
} // namespace detail

/// All nx*ny modes sorted by energy, ties broken by (my, mx).
inline std::vector<Mode> enumerate_modes(const GridSpec &grid) {
    grid.validate();
    std::vector<Mode> modes;
    modes.reserve(grid.n_sites());
    for (int my = 0; my < grid.ny; ++my) {
        for (int mx = 0; mx < grid.nx; ++mx) {
            Mode mode;
            mode.x = AxisMode::make(grid.nx, grid.bc_x, mx);
            mode.y = AxisMode::make(grid.ny, grid.bc_y, my);
            mode.energy = mode.x.energy(grid.t) + mode.y.energy(grid.t);
            mode.orbital = grid.orbital(mx, my);
            modes.push_back(mode);
        }
    }
    std::stable_sort(modes.begin(), modes.end(), [](const Mode &a, const Mode &b) {
        const auto ka = detail::energy_key(a.energy);
        const auto kb = detail::energy_key(b.energy);
        if (ka != kb) {
            return ka < kb;
        }
        if (a.my() != b.my()) {
            return a.my() < b.my();
        }
        return a.mx() < b.mx();
    });
    return modes;
}

/// Modes indexed by orbital (mx + nx*my) rather than by energy rank.
inline std::vector<Mode> modes_by_orbital(const GridSpec &grid) {
    auto modes = enumerate_modes(grid);
    std::sort(modes.begin(), modes.end(),
              [](const Mode &a, const Mode &b) { return a.orbital < b.orbital; });
    return modes;
}

enum class Axis : std::uint8_t { X, Y };

struct Edge {
    int site_a = 0;
    int site_b = 0;
    Axis axis = Axis::X;
};

namespace detail {
/// Bonds (j, j+1) along one axis; a periodic ring of length > 2 adds the
/// wrap-around bond, a length-2 ring has only its single bond.
inline std::vector<std::pair<int, int>> axis_bonds(int len, Boundary bc) {
    std::vector<std::pair<int, int>> bonds;
    for (int j = 0; j + 1 < len; ++j) {
        bonds.emplace_back(j, j + 1);
    }
    if (bc == Boundary::Periodic && len > 2) {
        bonds.emplace_back(len - 1, 0);
    }
    return bonds;
}
} // namespace detail

/// Nearest-neighbour bonds, horizontal first (row by row), then vertical
/// (column by column).
inline std::vector<Edge> lattice_edges(const GridSpec &grid) {
    std::vector<Edge> edges;
    const auto xb = detail::axis_bonds(grid.nx, grid.bc_x);
    const auto yb = detail::axis_bonds(grid.ny, grid.bc_y);
    for (int y = 0; y < grid.ny; ++y) {
        for (auto [a, b] : xb) {
            edges.push_back({grid.orbital(a, y), grid.orbital(b, y), Axis::X});
        }
    }
    for (int x = 0; x < grid.nx; ++x) {
        for (auto [a, b] : yb) {
            edges.push_back({grid.orbital(x, a), grid.orbital(x, b), Axis::Y});
        }
    }
    return edges;
}

/// Real-space single-particle hopping matrix (-t on every bond).
inline Eigen::MatrixXd hopping_matrix(const GridSpec &grid) {
    const int n = grid.n_sites();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (const auto &e : lattice_edges(grid)) {
        h(e.site_a, e.site_b) -= grid.t;
        h(e.site_b, e.site_a) -= grid.t;
    }
    return h;
}

/// W(site, j) = amplitude of the j-th mode of `modes` on `site`, so that
/// a_site = sum_j W(site, j) c_j.
inline Eigen::MatrixXcd mode_transform(const GridSpec &grid, const std::vector<Mode> &modes,
                                       bool real_orbitals = false) {
    const int n = grid.n_sites();
    Eigen::MatrixXcd w(n, static_cast<Eigen::Index>(modes.size()));
    for (int y = 0; y < grid.ny; ++y) {
        for (int x = 0; x < grid.nx; ++x) {
            const int site = grid.orbital(x, y);
            for (std::size_t j = 0; j < modes.size(); ++j) {
                const auto &m = modes[j];
                w(site, static_cast<Eigen::Index>(j)) =
                    real_orbitals
                        ? std::complex<double>(m.x.real_amplitude(x) * m.y.real_amplitude(y), 0.0)
                        : m.x.amplitude(x) * m.y.amplitude(y);
            }
        }
    }
    return w;
}

struct FermiSea {
    std::vector<int> occupied_up;   ///< positions in the energy-sorted mode list
    std::vector<int> occupied_down;
    long long degeneracy = 1;
};

namespace detail {
inline long long binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0;
    }
    long long r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

/// Occupies the lowest `count` modes. `shell_pick` optionally names which
/// members (by position within the Fermi-level shell) get the partially
/// filled shell's electrons; default is index order.
inline std::pair<std::vector<int>, long long>
fill_lowest(const std::vector<Mode> &modes, int count, const std::vector<int> &shell_pick) {
    std::vector<int> occ;
    if (count == 0) {
        if (!shell_pick.empty()) {
            throw std::invalid_argument("shell choice given for an empty spin species");
        }
        return {occ, 1};
    }
    const auto fermi_key = energy_key(modes[count - 1].energy);
    int shell_begin = count - 1;
    while (shell_begin > 0 && energy_key(modes[shell_begin - 1].energy) == fermi_key) {
        --shell_begin;
    }
    int shell_end = count;
    while (shell_end < static_cast<int>(modes.size()) &&
           energy_key(modes[shell_end].energy) == fermi_key) {
        ++shell_end;
    }
    const int d = shell_end - shell_begin;
    const int r = count - shell_begin;
    for (int i = 0; i < shell_begin; ++i) {
        occ.push_back(i);
    }
    if (shell_pick.empty()) {
        for (int i = shell_begin; i < count; ++i) {
            occ.push_back(i);
        }
    } else {
        if (static_cast<int>(shell_pick.size()) != r) {
            throw std::invalid_argument("shell choice must name " + std::to_string(r) +
                                        " orbitals");
        }
        auto pick = shell_pick;
        std::sort(pick.begin(), pick.end());
        if (std::adjacent_find(pick.begin(), pick.end()) != pick.end() || pick.front() < 0 ||
            pick.back() >= d) {
            throw std::invalid_argument("shell choice out of range or repeated");
        }
        for (int p : pick) {
            occ.push_back(shell_begin + p);
        }
    }
    return {occ, binomial(d, r)};
}
} // namespace detail

inline FermiSea fermi_sea(const GridSpec &grid, int n_up, int n_down,
                          const std::vector<int> &shell_pick_up = {},
                          const std::vector<int> &shell_pick_down = {}) {
    const int n = grid.n_sites();
    if (n_up < 0 || n_down < 0 || n_up > n || n_down > n) {
        throw std::invalid_argument("particle counts out of range for grid " + grid.label());
    }
    const auto modes = enumerate_modes(grid);
    FermiSea sea;
    auto [up, dup] = detail::fill_lowest(modes, n_up, shell_pick_up);
    auto [dn, ddn] = detail::fill_lowest(modes, n_down, shell_pick_down);
    sea.occupied_up = std::move(up);
    sea.occupied_down = std::move(dn);
    sea.degeneracy = dup * ddn;
    return sea;
}

/// Qubits set in the Fermi-sea basis state of the mode register.
inline std::vector<int> fermi_sea_qubits(const GridSpec &grid, const FermiSea &sea) {
    const auto modes = enumerate_modes(grid);
    std::vector<int> q;
    for (int i : sea.occupied_up) {
        q.push_back(modes[i].qubit(Spin::Up));
    }
    for (int i : sea.occupied_down) {
        q.push_back(modes[i].qubit(Spin::Down));
    }
    std::sort(q.begin(), q.end());
    return q;
}

inline double fermi_sea_energy(const GridSpec &grid, const FermiSea &sea) {
    const auto modes = enumerate_modes(grid);
    double e = 0.0;
    for (int i : sea.occupied_up) {
        e += modes[i].energy;
    }
    for (int i : sea.occupied_down) {
        e += modes[i].energy;
    }
    return e;
}

inline int qubit_index(int mx, int my, Spin s, const GridSpec &grid) {
    if (mx < 0 || my < 0 || mx >= grid.nx || my >= grid.ny) {
        throw std::out_of_range("orbital outside grid");
    }
    return 2 * grid.orbital(mx, my) + static_cast<int>(s);
}

/// Default filling: half filling split evenly, with the extra electron on
/// the up spin for odd site counts (3x3 gives 5/4).
inline std::pair<int, int> default_filling(const GridSpec &grid) {
    const int n = grid.n_sites();
    return {(n + 1) / 2, n / 2};
}

} // namespace vipsa
