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

#include <array>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "vipsa/vipsa.hpp"

using namespace vipsa;

namespace {

struct CountOracle {
    std::size_t table = 0, diagonal = 0, zero = 0, repeated = 0, conj = 0, pool = 0;
};

/// Classifies every quadruple with V computed as a site sum over the
/// complex mode functions, independent of the per-axis factorization.
CountOracle count_pool(const GridSpec &g) {
    const auto modes = modes_by_orbital(g);
    const Eigen::MatrixXcd w = mode_transform(g, modes, false);
    const int n = g.n_sites();
    CountOracle c;
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            for (int cc = 0; cc < n; ++cc) {
                for (int d = 0; d < n; ++d) {
                    cplx v = 0.0;
                    for (int s = 0; s < n; ++s) {
                        v += std::conj(w(s, a) * w(s, b)) * w(s, cc) * w(s, d);
                    }
                    if (std::abs(g.U * v) < 1e-12) {
                        continue;
                    }
                    ++c.table;
                    const double eps =
                        modes[a].energy + modes[b].energy - modes[cc].energy - modes[d].energy;
                    if (a == d && b == cc) {
                        ++c.diagonal;
                    } else if (std::abs(eps) <= 1e-9) {
                        ++c.zero;
                    } else if (a == d || b == cc) {
                        ++c.repeated;
                    } else if (eps < 0) {
                        ++c.conj;
                    } else {
                        ++c.pool;
                    }
                }
            }
        }
    }
    return c;
}

std::vector<GridSpec> default_grids(double U) {
    return {GridSpec::make(2, 2, 1.0, U), GridSpec::make(2, 3, 1.0, U),
            GridSpec::make(2, 4, 1.0, U), GridSpec::make(3, 3, 1.0, U)};
}

} // namespace

TEST(Pool, GoldenCounts) {
    const auto p22 = build_pool(GridSpec::make(2, 2, 1.0, 2.0));
    EXPECT_EQ(p22.stats.pool_size, 13U);
    EXPECT_EQ(p22.stats.diagonal, 16U);
    EXPECT_EQ(p22.stats.zero_denominator, 22U);
    EXPECT_EQ(p22.stats.repeated_orbital, 0U);
    EXPECT_EQ(p22.stats.conjugates, 13U);
    const auto p24 = build_pool(GridSpec::make(2, 4, 1.0, 2.0));
    EXPECT_EQ(p24.stats.pool_size, 130U);
    EXPECT_EQ(p24.stats.diagonal, 64U);
    EXPECT_EQ(p24.stats.zero_denominator, 188U);
    EXPECT_EQ(p24.stats.conjugates, 130U);
}

TEST(Pool, CountsMatchIndependentEnumeration) {
    for (const auto &g : default_grids(3.0)) {
        const auto pool = build_pool(g);
        const auto want = count_pool(g);
        EXPECT_EQ(pool.stats.table_size, want.table) << g.label();
        EXPECT_EQ(pool.stats.diagonal, want.diagonal) << g.label();
        EXPECT_EQ(pool.stats.zero_denominator, want.zero) << g.label();
        EXPECT_EQ(pool.stats.repeated_orbital, want.repeated) << g.label();
        EXPECT_EQ(pool.stats.conjugates, want.conj) << g.label();
        EXPECT_EQ(pool.stats.pool_size, want.pool) << g.label();
        EXPECT_EQ(pool.ops.size(), want.pool);
    }
}

TEST(Pool, EntriesAreOrientedSortedAndUnique) {
    for (const auto &g : default_grids(2.0)) {
        const auto pool = build_pool(g);
        std::set<std::string> labels;
        for (std::size_t i = 0; i < pool.ops.size(); ++i) {
            const auto &q = pool.ops[i].quad;
            EXPECT_GT(q.eps, kZeroDenominatorTol);
            EXPECT_FALSE(q.diagonal());
            EXPECT_NE(q.a, q.d);
            EXPECT_NE(q.b, q.c);
            EXPECT_TRUE(labels.insert(pool.ops[i].label).second);
            if (i > 0) {
                const auto &p = pool.ops[i - 1].quad;
                EXPECT_LT(std::tie(p.a, p.b, p.c, p.d), std::tie(q.a, q.b, q.c, q.d));
            }
        }
        EXPECT_EQ(pool.stats.conjugates, pool.stats.pool_size);
    }
}

TEST(Pool, NoOperatorsWithoutInteraction) {
    const auto pool = build_pool(GridSpec::make(2, 2, 1.0, 0.0));
    EXPECT_TRUE(pool.ops.empty());
    EXPECT_EQ(pool.stats.table_size, 0U);
}

TEST(Pool, LabelFormat) {
    InteractionQuadruple q{3, 2, 1, 0, 0.5, 1.0};
    EXPECT_EQ(pool_label(q), "3,2,1,0");
}

TEST(PoolGradients, MatchCommutatorAndFiniteDifferences) {
    const auto prob = VipsaProblem::make(GridSpec::make(2, 2, 1.0, 4.0), 2, 2);
    std::mt19937_64 rng(21);
    const auto psi = oracle::random_sector_state(8, 2, 2, rng, true);
    const auto g = pool_gradients(psi, *prob.h, prob.pool.ops, 2);
    ASSERT_EQ(g.size(), prob.pool.ops.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto comm = commutator(prob.hamiltonian.total, prob.pool.ops[i].generator(8));
        EXPECT_NEAR(g[i], expectation(comm, psi), 1e-10);
        auto plus = psi;
        auto minus = psi;
        apply_pool_unitary(prob.pool.ops[i].qubits, 1e-5, plus);
        apply_pool_unitary(prob.pool.ops[i].qubits, -1e-5, minus);
        const double fd = (prob.h->expectation(plus) - prob.h->expectation(minus)) / 2e-5;
        EXPECT_NEAR(g[i], fd, 1e-6 * std::max(1.0, std::abs(fd)));
    }
}

TEST(PoolGradients, ThreadCountDoesNotChangeResults) {
    const auto prob = VipsaProblem::make(GridSpec::make(2, 3, 1.0, 2.0), 3, 3);
    std::mt19937_64 rng(22);
    const auto psi = oracle::random_sector_state(12, 3, 3, rng, true);
    const auto h_psi = prob.h->apply(psi);
    EXPECT_EQ(pool_gradients(psi, h_psi, prob.pool.ops, 1),
              pool_gradients(psi, h_psi, prob.pool.ops, 3));
}

TEST(FirstEpoch, AnnihilatingOperatorsHaveExactlyZeroGradient) {
    for (const auto &g : default_grids(4.0)) {
        const auto [nu, nd] = default_filling(g);
        const auto prob = VipsaProblem::make(g, nu, nd);
        const auto grad = pool_gradients(prob.phi0, *prob.h, prob.pool.ops);
        std::size_t annihilating = 0;
        for (std::size_t i = 0; i < grad.size(); ++i) {
            const auto a_phi = apply_pool_generator(prob.pool.ops[i].qubits, prob.phi0);
            if (a_phi.norm() == 0.0) {
                ++annihilating;
                EXPECT_EQ(grad[i], 0.0) << g.label() << " " << prob.pool.ops[i].label;
            }
        }
        EXPECT_GT(annihilating, 0U) << g.label();
        for (std::size_t i : select(grad, 0.1)) {
            const auto a_phi = apply_pool_generator(prob.pool.ops[i].qubits, prob.phi0);
            EXPECT_GT(a_phi.norm(), 0.0);
            EXPECT_GT(std::abs(prob.pool.ops[i].quad.eps), kZeroDenominatorTol);
        }
    }
}

TEST(Select, Examples) {
    const std::vector<double> g{0.5, -1.0, 0.05, 0.1, -0.1};
    EXPECT_EQ(select(g, 0.1), (std::vector<std::size_t>{1, 0, 3, 4}));
    EXPECT_EQ(select(g, 1.0), (std::vector<std::size_t>{1}));
    EXPECT_EQ(select(g, 0.01).size(), 5U);
    EXPECT_TRUE(select(std::vector<double>(4, 0.0), 0.1).empty());
    EXPECT_TRUE(select({}, 0.5).empty());
    EXPECT_THROW(select(g, 0.0), std::invalid_argument);
    EXPECT_THROW(select(g, 1.5), std::invalid_argument);
}

namespace {
/// Separable quadratic sum_i c_i (x_i - m_i)^2.
struct Quadratic {
    std::vector<double> c, m;
    EnergyGradient operator()(const std::vector<double> &x) const {
        EnergyGradient eg;
        for (std::size_t i = 0; i < x.size(); ++i) {
            eg.energy += c[i] * (x[i] - m[i]) * (x[i] - m[i]);
            eg.gradient.push_back(2 * c[i] * (x[i] - m[i]));
        }
        return eg;
    }
};
} // namespace

TEST(Adam, FirstStepHasLearningRateMagnitude) {
    const Quadratic q{{1.0, 100.0, 1e-3}, {1.0, -1.0, 5.0}};
    AdamConfig cfg;
    cfg.max_steps = 1;
    std::vector<std::vector<double>> seen;
    adam_optimize(q, {0.0, 0.0, 0.0}, cfg,
                  [&](int, const std::vector<double> &x, double) { seen.push_back(x); });
    ASSERT_EQ(seen.size(), 2U);
    EXPECT_NEAR(seen[1][0], cfg.lr, 1e-8);
    EXPECT_NEAR(seen[1][1], -cfg.lr, 1e-8);
    EXPECT_NEAR(seen[1][2], cfg.lr, 1e-6);
}

TEST(Adam, ZeroGradientStopsImmediately) {
    const Quadratic q{{1.0, 1.0}, {0.3, 0.3}};
    const auto r = adam_optimize(q, {0.3, 0.3}, AdamConfig{});
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.steps, 0);
    EXPECT_EQ(r.trace.size(), 1U);
}

TEST(Adam, MinimizesQuadraticAndIsDeterministic) {
    const Quadratic q{{1.0, 3.0}, {0.4, -0.2}};
    AdamConfig cfg;
    cfg.lr = 0.05;
    cfg.tol = 1e-12;
    cfg.window = 5;
    cfg.max_steps = 3000;
    const auto a = adam_optimize(q, {0.0, 0.0}, cfg);
    const auto b = adam_optimize(q, {0.0, 0.0}, cfg);
    EXPECT_EQ(a.trace, b.trace);
    EXPECT_NEAR(a.params[0], 0.4, 1e-3);
    EXPECT_NEAR(a.params[1], -0.2, 1e-3);
    EXPECT_LE(a.energy, a.trace.front());
    for (double e : a.trace) {
        EXPECT_GE(e, a.energy);
    }
}

TEST(Adam, PlateauRuleAndStepLimit) {
    const Quadratic q{{1.0}, {1.0}};
    AdamConfig cfg;
    cfg.tol = 1.0;
    cfg.window = 3;
    const auto r = adam_optimize(q, {0.0}, cfg);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.steps, 3);
    cfg.tol = 1e-15;
    cfg.max_steps = 7;
    const auto s = adam_optimize(q, {0.0}, cfg);
    EXPECT_FALSE(s.converged);
    EXPECT_EQ(s.steps, 7);
}

TEST(Adam, RejectsNonFiniteEnergyAndBadConfig) {
    auto bad = [](const std::vector<double> &) { return EnergyGradient{std::nan(""), {1.0}}; };
    EXPECT_THROW(adam_optimize(bad, {0.0}, AdamConfig{}), std::runtime_error);
    AdamConfig cfg;
    cfg.lr = 0.0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.beta2 = 1.0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Adam, ResumedStateKeepsStepCounts) {
    const Quadratic q{{1.0, 1.0}, {1.0, 1.0}};
    AdamConfig cfg;
    cfg.tol = 1e-15;
    cfg.max_steps = 4;
    AdamState st;
    auto r = adam_optimize(q, {0.0}, cfg, {}, &st);
    ASSERT_EQ(st.t.size(), 1U);
    EXPECT_EQ(st.t[0], 4); // energy falls monotonically, so the last iterate is best
    r.params.push_back(0.0);
    adam_optimize(q, r.params, cfg, {}, &st);
    EXPECT_EQ(st.t[0], 8);
    EXPECT_EQ(st.t[1], 4);
}

TEST(VipsaConfig, Validation) {
    VipsaConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.r = 0.0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.eps1 = -1;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.max_epochs = -1;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(VipsaRun, NonInteractingConvergesImmediately) {
    const auto r = vipsa_run(GridSpec::make(2, 2, 1.0, 0.0), 2, 2, VipsaConfig{});
    EXPECT_EQ(r.status, RunStatus::Converged);
    ASSERT_EQ(r.epochs.size(), 1U);
    EXPECT_EQ(r.steps.size(), 1U);
    EXPECT_NEAR(r.energy, -4.0, 1e-12);
    EXPECT_EQ(r.epochs[0].max_gradient, 0.0);
}

TEST(VipsaRun, ZeroEpochBudgetIsExhausted) {
    VipsaConfig cfg;
    cfg.max_epochs = 0;
    const auto r = vipsa_run(GridSpec::make(2, 2, 1.0, 4.0), 2, 2, cfg);
    EXPECT_EQ(r.status, RunStatus::Exhausted);
    EXPECT_EQ(r.epochs.size(), 1U);
}

TEST(VipsaRun, TwoByTwoStrongCouplingReachesGroundState) {
    const auto prob = VipsaProblem::make(GridSpec::make(2, 2, 1.0, 4.0), 2, 2);
    const auto gs = ground_space(*prob.h);
    EXPECT_NEAR(gs.energy, -2.10274848, 1e-7);
    const auto spins = spin_operators(4);
    const PauliSum &sz = spins.sz;
    double worst_imag = 0.0;
    double worst_sz = 0.0;
    std::vector<int> seen_steps;
    const auto r = vipsa_run(prob, VipsaConfig{}, &gs, [&](const StateVector &s, int, int step) {
        worst_imag = std::max(worst_imag, s.max_imag());
        worst_sz = std::max(worst_sz, std::abs(expectation(sz, s)));
        seen_steps.push_back(step);
    });
    EXPECT_LE(std::abs(r.energy - gs.energy), 1e-2);
    EXPECT_GE(r.fidelity, 0.99);
    EXPECT_LE(worst_imag, 1e-12);
    EXPECT_LE(worst_sz, 1e-8);

    ASSERT_EQ(seen_steps.size(), r.steps.size());
    for (std::size_t i = 0; i < r.steps.size(); ++i) {
        EXPECT_EQ(r.steps[i].step, static_cast<int>(i));
        EXPECT_EQ(seen_steps[i], static_cast<int>(i));
    }
    std::size_t params = 0;
    for (std::size_t e = 1; e < r.epochs.size(); ++e) {
        EXPECT_LE(r.epochs[e].energy, r.epochs[e - 1].energy + 1e-12);
        params += r.epochs[e].selected.size();
        EXPECT_EQ(r.epochs[e].n_params, params);
    }
    EXPECT_EQ(r.params.size(), params);
    EXPECT_NEAR(circuit_energy(r.circuit, r.params, *prob.h), r.energy, 1e-12);
}

TEST(VipsaRun, EpochZeroIsFermiSea) {
    const auto g = GridSpec::make(2, 4, 1.0, 2.0);
    VipsaConfig cfg;
    cfg.max_epochs = 1;
    const auto prob = VipsaProblem::make(g, 4, 4);
    const auto r = vipsa_run(prob, cfg);
    EXPECT_NEAR(r.epochs[0].energy, prob.h->expectation(prob.phi0), 1e-12);
    EXPECT_EQ(r.status, RunStatus::Exhausted);
    EXPECT_LT(r.epochs[1].energy, r.epochs[0].energy);
}

TEST(Symmetry, PoolCommutesWithSzNotAlwaysWithS2) {
    const auto prob = VipsaProblem::make(GridSpec::make(2, 2, 1.0, 2.0), 2, 2);
    const auto spins = spin_operators(4);
    double max_s2 = 0.0;
    for (const auto &op : prob.pool.ops) {
        const auto a = op.generator(8);
        EXPECT_LT(commutator(spins.sz, a).max_abs_coefficient(), 1e-12) << op.label;
        const oracle::Mat c = oracle::pauli_sum_matrix(spins.s2) * oracle::pauli_sum_matrix(a) -
                              oracle::pauli_sum_matrix(a) * oracle::pauli_sum_matrix(spins.s2);
        max_s2 = std::max(max_s2, oracle::max_abs(c));
    }
    EXPECT_GT(max_s2, 1e-3);
}

namespace {
double first_order_residual(const GridSpec &g) {
    const auto [nu, nd] = default_filling(g);
    const auto prob = VipsaProblem::make(g, nu, nd);
    const auto fo = first_order_oracle(prob);
    auto diff = fo.sequential;
    diff.axpy(-1.0, fo.reference);
    return diff.norm();
}
} // namespace

TEST(FirstOrder, ResidualIsSecondOrderInCoupling) {
    for (auto [nx, ny] : {std::pair{2, 2}, {2, 4}}) {
        const double r1 = first_order_residual(GridSpec::make(nx, ny, 1.0, 0.1));
        const double r2 = first_order_residual(GridSpec::make(nx, ny, 1.0, 0.05));
        EXPECT_GT(r1, 0.0);
        EXPECT_GE(r1 / r2, 3.2) << nx << "x" << ny;
        EXPECT_LE(r1 / r2, 4.8) << nx << "x" << ny;
    }
}

TEST(FirstOrder, AnglesAndStrongCouplingRejection) {
    const auto prob = VipsaProblem::make(GridSpec::make(2, 2, 1.0, 0.2), 2, 2);
    const auto fo = first_order_oracle(prob);
    ASSERT_EQ(fo.theta.size(), prob.pool.ops.size());
    for (std::size_t i = 0; i < fo.theta.size(); ++i) {
        const auto &q = prob.pool.ops[i].quad;
        EXPECT_NEAR(std::sin(fo.theta[i]), -q.V / q.eps, 1e-14);
    }
    EXPECT_NEAR(fo.reference.norm(), 1.0, 1e-12);
    EXPECT_LE(fo.sequential.max_imag(), 1e-14);
    const auto strong = VipsaProblem::make(GridSpec::make(2, 2, 1.0, 40.0), 2, 2);
    EXPECT_THROW(first_order_oracle(strong), std::domain_error);
}
