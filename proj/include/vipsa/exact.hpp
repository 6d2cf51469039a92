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
 * @file exact.hpp
 * Exact diagonalization inside a particle-number sector, ground-space
 * fidelity and a Rayleigh-Schrödinger perturbation reference.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sector.hpp"

namespace vipsa {

/// Sectors up to this dimension are solved densely; larger ones by
/// restarted Lanczos.
inline constexpr std::size_t kDenseSectorLimit = 1500;

/// Eigenvalues closer than this to the lowest count as ground states.
inline constexpr double kDegeneracyTol = 1e-8;

struct Eigenpairs {
    std::shared_ptr<const Sector> sector;
    std::vector<double> values;              ///< ascending
    std::vector<std::vector<cplx>> vectors;  ///< sector coordinates
};

namespace detail {

inline Eigenpairs dense_eigenpairs(const SectorOperator &h, std::size_t how_many,
                                   bool want_vectors) {
    const auto n = static_cast<Eigen::Index>(h.dim());
    Eigenpairs out;
    out.sector = h.sector_ptr();
    const auto opts = want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly;
    if (h.is_real()) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
        h.for_each_entry([&](std::size_t r, std::size_t c, cplx v) { m(r, c) += v.real(); });
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, opts);
        for (std::size_t i = 0; i < how_many; ++i) {
            out.values.push_back(es.eigenvalues()(i));
            if (want_vectors) {
                std::vector<cplx> v(n);
                for (Eigen::Index r = 0; r < n; ++r) {
                    v[r] = es.eigenvectors()(r, i);
                }
                out.vectors.push_back(std::move(v));
            }
        }
    } else {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
        h.for_each_entry([&](std::size_t r, std::size_t c, cplx v) { m(r, c) += v; });
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, opts);
        for (std::size_t i = 0; i < how_many; ++i) {
            out.values.push_back(es.eigenvalues()(i));
            if (want_vectors) {
                std::vector<cplx> v(n);
                for (Eigen::Index r = 0; r < n; ++r) {
                    v[r] = es.eigenvectors()(r, i);
                }
                out.vectors.push_back(std::move(v));
            }
        }
    }
    return out;
}

inline cplx dot(const std::vector<cplx> &a, const std::vector<cplx> &b) {
    cplx s{};
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += std::conj(a[i]) * b[i];
    }
    return s;
}

inline double norm(const std::vector<cplx> &a) { return std::sqrt(dot(a, a).real()); }

/// w -= <v|w> v for each v (applied twice for stability).
inline void orthogonalize(std::vector<cplx> &w, const std::vector<std::vector<cplx>> &basis) {
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto &v : basis) {
            const cplx c = dot(v, w);
            for (std::size_t i = 0; i < w.size(); ++i) {
                w[i] -= c * v[i];
            }
        }
    }
}

/// Lowest `how_many` eigenpairs by Lanczos with full reorthogonalization,
/// explicit restarts from the current Ritz vector and deflation against
/// converged vectors; deflation resolves degenerate eigenvalues one copy
/// at a time.
inline Eigenpairs lanczos_eigenpairs(const SectorOperator &h, std::size_t how_many,
                                     double residual_tol = 1e-9, std::size_t krylov_dim = 100,
                                     int max_restarts = 500) {
    const std::size_t n = h.dim();
    Eigenpairs out;
    out.sector = h.sector_ptr();
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);

    std::vector<std::vector<cplx>> locked;
    std::vector<double> locked_vals;
    for (std::size_t target = 0; target < how_many; ++target) {
        std::vector<cplx> x(n);
        for (auto &v : x) {
            v = uni(rng);
        }
        orthogonalize(x, locked);
        {
            const double nx = norm(x);
            for (auto &v : x) {
                v /= nx;
            }
        }
        const std::size_t m_max = std::min(krylov_dim, n - locked.size());
        bool converged = false;
        for (int restart = 0; restart < max_restarts && !converged; ++restart) {
            std::vector<std::vector<cplx>> basis{x};
            std::vector<double> alpha;
            std::vector<double> beta;
            std::vector<cplx> w(n);
            for (std::size_t j = 0; j < m_max; ++j) {
                h.multiply(basis[j].data(), w.data());
                alpha.push_back(dot(basis[j], w).real());
                orthogonalize(w, basis);
                orthogonalize(w, locked);
                const double b = norm(w);
                if (j + 1 == m_max || b < 1e-12) {
                    break;
                }
                beta.push_back(b);
                for (auto &v : w) {
                    v /= b;
                }
                basis.push_back(w);
            }
            const auto m = static_cast<Eigen::Index>(alpha.size());
            Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
            for (Eigen::Index i = 0; i < m; ++i) {
                t(i, i) = alpha[i];
                if (i + 1 < m) {
                    t(i, i + 1) = t(i + 1, i) = beta[i];
                }
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
            std::fill(x.begin(), x.end(), cplx{});
            for (Eigen::Index i = 0; i < m; ++i) {
                const double s = es.eigenvectors()(i, 0);
                for (std::size_t r = 0; r < n; ++r) {
                    x[r] += s * basis[i][r];
                }
            }
            orthogonalize(x, locked);
            const double nx = norm(x);
            for (auto &v : x) {
                v /= nx;
            }
            h.multiply(x.data(), w.data());
            const double theta = dot(x, w).real();
            double res = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                res += std::norm(w[r] - theta * x[r]);
            }
            res = std::sqrt(res);
            if (res < residual_tol * std::max(1.0, std::abs(theta))) {
                converged = true;
                locked.push_back(x);
                locked_vals.push_back(theta);
            }
        }
        if (!converged) {
            throw std::runtime_error("Lanczos failed to converge in sector " + h.sector().label());
        }
    }
    std::vector<std::size_t> order(locked.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return locked_vals[a] < locked_vals[b]; });
    for (std::size_t i : order) {
        out.values.push_back(locked_vals[i]);
        out.vectors.push_back(std::move(locked[i]));
    }
    return out;
}

} // namespace detail

/// Lowest `how_many` eigenpairs of a sector-restricted operator: dense
/// solve up to kDenseSectorLimit, Lanczos beyond.
inline Eigenpairs sector_eigenpairs(const SectorOperator &h, std::size_t how_many,
                                    bool want_vectors = true) {
    how_many = std::min(how_many, h.dim());
    if (h.dim() <= kDenseSectorLimit) {
        return detail::dense_eigenpairs(h, how_many, want_vectors);
    }
    return detail::lanczos_eigenpairs(h, how_many);
}

inline Eigenpairs sector_diagonalize(const PauliSum &h, int n_up, int n_down,
                                     std::size_t how_many, bool want_vectors = true) {
    auto sector = std::make_shared<const Sector>(h.n_qubits(), n_up, n_down);
    return sector_eigenpairs(SectorOperator(h, sector), how_many, want_vectors);
}

/// Ground energy and an orthonormal basis of the ground eigenspace.
struct GroundSpace {
    std::shared_ptr<const Sector> sector;
    double energy = 0.0;
    std::vector<std::vector<cplx>> basis;

    [[nodiscard]] std::size_t degeneracy() const { return basis.size(); }

    [[nodiscard]] StateVector state(std::size_t i) const { return sector->embed(basis.at(i)); }
};

inline GroundSpace ground_space(const SectorOperator &h) {
    std::size_t how_many = std::min<std::size_t>(6, h.dim());
    for (;;) {
        Eigenpairs ep = sector_eigenpairs(h, how_many);
        std::size_t deg = 0;
        while (deg < ep.values.size() && ep.values[deg] - ep.values[0] < kDegeneracyTol) {
            ++deg;
        }
        if (deg < ep.values.size() || how_many == h.dim()) {
            GroundSpace gs;
            gs.sector = ep.sector;
            gs.energy = ep.values[0];
            for (std::size_t i = 0; i < deg; ++i) {
                gs.basis.push_back(std::move(ep.vectors[i]));
            }
            return gs;
        }
        how_many = std::min(2 * how_many, h.dim());
    }
}

inline GroundSpace ground_space(const PauliSum &h, int n_up, int n_down) {
    auto sector = std::make_shared<const Sector>(h.n_qubits(), n_up, n_down);
    return ground_space(SectorOperator(h, sector));
}

/// sum_i |<psi|g_i>|^2 over the ground-space basis.
inline double fidelity(const StateVector &psi, const GroundSpace &gs) {
    const auto x = gs.sector->restrict(psi);
    double f = 0.0;
    for (const auto &g : gs.basis) {
        f += std::norm(detail::dot(g, x));
    }
    return f;
}

/// Binary layout (little endian):
///   char[8]  "VIPSAGS1"
///   u32      n_qubits, n_up, n_down, degeneracy
///   f64      energy
///   u64      sector dimension D
///   u64[D]   sector basis indices (ascending)
///   f64[2*D] per ground vector: (re, im) pairs in sector order
inline void save_ground_space(const GroundSpace &gs, const std::string &path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw std::runtime_error("cannot write " + path);
    }
    const auto put = [&](const auto &v) { os.write(reinterpret_cast<const char *>(&v), sizeof(v)); };
    os.write("VIPSAGS1", 8);
    put(static_cast<std::uint32_t>(gs.sector->n_qubits()));
    put(static_cast<std::uint32_t>(gs.sector->n_up()));
    put(static_cast<std::uint32_t>(gs.sector->n_down()));
    put(static_cast<std::uint32_t>(gs.degeneracy()));
    put(gs.energy);
    put(static_cast<std::uint64_t>(gs.sector->dim()));
    for (auto b : gs.sector->states()) {
        put(static_cast<std::uint64_t>(b));
    }
    for (const auto &v : gs.basis) {
        for (const auto &a : v) {
            put(a.real());
            put(a.imag());
        }
    }
    if (!os) {
        throw std::runtime_error("failed writing " + path);
    }
}

inline GroundSpace load_ground_space(const std::string &path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw std::runtime_error("cannot read " + path);
    }
    const auto get = [&](auto &v) {
        is.read(reinterpret_cast<char *>(&v), sizeof(v));
        if (!is) {
            throw std::runtime_error("truncated ground-space file " + path);
        }
    };
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, "VIPSAGS1", 8) != 0) {
        throw std::runtime_error("not a ground-space file: " + path);
    }
    std::uint32_t nq = 0, nu = 0, nd = 0, deg = 0;
    get(nq);
    get(nu);
    get(nd);
    get(deg);
    GroundSpace gs;
    get(gs.energy);
    std::uint64_t dim = 0;
    get(dim);
    gs.sector = std::make_shared<const Sector>(int(nq), int(nu), int(nd));
    if (dim != gs.sector->dim()) {
        throw std::runtime_error("sector dimension mismatch in " + path);
    }
    for (std::uint64_t i = 0; i < dim; ++i) {
        std::uint64_t b = 0;
        get(b);
        if (b != gs.sector->states()[i]) {
            throw std::runtime_error("sector basis mismatch in " + path);
        }
    }
    for (std::uint32_t k = 0; k < deg; ++k) {
        std::vector<cplx> v(dim);
        for (auto &a : v) {
            double re = 0.0, im = 0.0;
            get(re);
            get(im);
            a = {re, im};
        }
        gs.basis.push_back(std::move(v));
    }
    return gs;
}

struct PerturbationEnergies {
    double e0 = 0.0;
    double e1 = 0.0;
    double e2 = 0.0;

    [[nodiscard]] double total() const { return e0 + e1 + e2; }
};

/// (n_up, n_down) of a state supported in a single sector.
inline std::pair<int, int> state_sector(const StateVector &psi) {
    std::pair<int, int> sec{-1, -1};
    for (std::uint64_t b = 0; b < psi.dim(); ++b) {
        if (std::norm(psi[b]) < 1e-24) {
            continue;
        }
        const auto c = spin_counts(b);
        if (sec.first < 0) {
            sec = c;
        } else if (c != sec) {
            throw std::invalid_argument("state spans several particle-number sectors");
        }
    }
    if (sec.first < 0) {
        throw std::invalid_argument("zero state has no sector");
    }
    return sec;
}

/// Rayleigh-Schrödinger energies through second order for a
/// non-degenerate eigenstate phi0 of h0, evaluated in phi0's sector.
inline PerturbationEnergies rs_perturbation(const PauliSum &h0, const PauliSum &h1,
                                            const StateVector &phi0) {
    const auto [nu, nd] = state_sector(phi0);
    auto sector = std::make_shared<const Sector>(h0.n_qubits(), nu, nd);
    const SectorOperator op0(h0, sector);
    const SectorOperator op1(h1, sector);
    auto x = sector->restrict(phi0);
    {
        const double nx = detail::norm(x);
        for (auto &v : x) {
            v /= nx;
        }
    }
    PerturbationEnergies pe;
    const auto h0x = op0.multiply(x);
    pe.e0 = detail::dot(x, h0x).real();
    double res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        res += std::norm(h0x[i] - pe.e0 * x[i]);
    }
    if (std::sqrt(res) > 1e-8) {
        throw std::invalid_argument("reference state is not an eigenstate of h0");
    }
    const auto h1x = op1.multiply(x);
    pe.e1 = detail::dot(x, h1x).real();

    // Eigenbasis of h0 in the sector: the computational basis when h0 is
    // diagonal, a dense solve otherwise.
    std::vector<double> energies;
    std::vector<std::vector<cplx>> vecs;
    if (h0.is_diagonal()) {
        const auto diag = CompiledPauliSum(h0).diagonal();
        for (auto b : sector->states()) {
            energies.push_back(diag[b]);
        }
    } else {
        Eigenpairs ep = sector_eigenpairs(op0, op0.dim());
        energies = std::move(ep.values);
        vecs = std::move(ep.vectors);
    }
    int degenerate = 0;
    for (double e : energies) {
        degenerate += std::abs(e - pe.e0) < kDegeneracyTol ? 1 : 0;
    }
    if (degenerate != 1) {
        throw std::invalid_argument(
            "reference energy is degenerate; degenerate perturbation theory is not supported");
    }
    for (std::size_t m = 0; m < energies.size(); ++m) {
        if (std::abs(energies[m] - pe.e0) < kDegeneracyTol) {
            continue;
        }
        const cplx amp = vecs.empty() ? h1x[m] : detail::dot(vecs[m], h1x);
        pe.e2 += std::norm(amp) / (pe.e0 - energies[m]);
    }
    return pe;
}

} // namespace vipsa
