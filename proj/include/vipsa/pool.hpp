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
 * @file pool.hpp
 * Interaction-rotation operator pool, pool gradients and selection.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "gates.hpp"
#include "hamiltonian.hpp"

namespace vipsa {

/// Energy denominators at or below this magnitude are treated as zero.
inline constexpr double kZeroDenominatorTol = 1e-9;

/// Worker count from VIPSA_THREADS, else the hardware concurrency.
inline unsigned thread_count() {
    if (const char *env = std::getenv("VIPSA_THREADS")) {
        char *end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return static_cast<unsigned>(v);
        }
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

/// Runs f(i) for i in [0, n) over contiguous chunks on `threads` workers.
template <class F> void parallel_for(std::size_t n, unsigned threads, F &&f) {
    threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1U, threads), n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            f(i);
        }
        return;
    }
    std::vector<std::thread> workers;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        workers.emplace_back([lo, hi, &f] {
            for (std::size_t i = lo; i < hi; ++i) {
                f(i);
            }
        });
    }
    for (auto &t : workers) {
        t.join();
    }
}

/// One pool entry: A = O - O† for O = c†_{a up} c†_{b down} c_{c down} c_{d up},
/// oriented so that eps > 0.
struct PoolOperator {
    InteractionQuadruple quad;
    PoolQuadruple qubits;
    std::string label;

    [[nodiscard]] PauliSum generator(int n_qubits) const { return qubits.generator(n_qubits); }
};

inline std::string pool_label(const InteractionQuadruple &q) {
    return std::to_string(q.a) + "," + std::to_string(q.b) + "," + std::to_string(q.c) + "," +
           std::to_string(q.d);
}

struct PoolStats {
    std::size_t table_size = 0;      ///< quadruples with nonzero V
    std::size_t diagonal = 0;        ///< a = d and b = c (O Hermitian)
    std::size_t zero_denominator = 0;
    std::size_t repeated_orbital = 0; ///< a = d or b = c, not diagonal
    std::size_t conjugates = 0;      ///< eps < 0 partners of retained entries
    std::size_t pool_size = 0;
};

struct Pool {
    std::vector<PoolOperator> ops; ///< ascending (a, b, c, d)
    PoolStats stats;
};

inline Pool build_pool(const GridSpec &grid) {
    Pool pool;
    const auto table = interaction_table(grid);
    pool.stats.table_size = table.size();
    for (const auto &q : table) {
        if (q.diagonal()) {
            ++pool.stats.diagonal;
        } else if (std::abs(q.eps) <= kZeroDenominatorTol) {
            ++pool.stats.zero_denominator;
        } else if (q.a == q.d || q.b == q.c) {
            ++pool.stats.repeated_orbital;
        } else if (q.eps < 0.0) {
            ++pool.stats.conjugates;
        } else {
            PoolOperator op;
            op.quad = q;
            op.qubits = {up_qubit(q.a), down_qubit(q.b), down_qubit(q.c), up_qubit(q.d)};
            op.label = pool_label(q);
            pool.ops.push_back(std::move(op));
        }
    }
    std::sort(pool.ops.begin(), pool.ops.end(), [](const PoolOperator &x, const PoolOperator &y) {
        return std::tie(x.quad.a, x.quad.b, x.quad.c, x.quad.d) <
               std::tie(y.quad.a, y.quad.b, y.quad.c, y.quad.d);
    });
    pool.stats.pool_size = pool.ops.size();
    return pool;
}

/// g_i = <psi|[h, A_i]|psi> = 2 Re <h psi|A_i psi>, given h|psi>.
inline std::vector<double> pool_gradients(const StateVector &psi, const StateVector &h_psi,
                                          const std::vector<PoolOperator> &pool,
                                          unsigned threads = 1) {
    psi.require_same(h_psi);
    std::vector<double> g(pool.size());
    parallel_for(pool.size(), threads, [&](std::size_t i) {
        g[i] = 2.0 * pool_generator_overlap(pool[i].qubits, h_psi, psi).real();
    });
    return g;
}

template <StateOperator Op>
std::vector<double> pool_gradients(const StateVector &psi, const Op &h,
                                   const std::vector<PoolOperator> &pool, unsigned threads = 1) {
    return pool_gradients(psi, h.apply(psi), pool, threads);
}

/// Indices with |g_i| >= r max|g|, by descending |g_i| then index.
inline std::vector<std::size_t> select(const std::vector<double> &g, double r) {
    if (!(r > 0.0 && r <= 1.0)) {
        throw std::invalid_argument("selection ratio must lie in (0, 1]");
    }
    double gmax = 0.0;
    for (double x : g) {
        gmax = std::max(gmax, std::abs(x));
    }
    std::vector<std::size_t> s;
    if (gmax == 0.0) {
        return s;
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (std::abs(g[i]) >= r * gmax) {
            s.push_back(i);
        }
    }
    std::stable_sort(s.begin(), s.end(),
                     [&](std::size_t a, std::size_t b) { return std::abs(g[a]) > std::abs(g[b]); });
    return s;
}

} // namespace vipsa
