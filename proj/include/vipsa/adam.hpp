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
 * @file adam.hpp
 * Deterministic ADAM minimizer with an energy-plateau stopping rule.
 */
#pragma once

#include <cmath>
#include <concepts>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "circuit.hpp"

namespace vipsa {

struct AdamConfig {
    double lr = 1e-2;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double tol = 1e-2;  ///< energy change counted as "no progress"
    int window = 10;    ///< consecutive quiet steps required
    int max_steps = 500;

    void validate() const {
        if (!(lr > 0) || !(tol > 0) || !(epsilon > 0) || window < 1 || max_steps < 0 ||
            !(beta1 >= 0 && beta1 < 1) || !(beta2 >= 0 && beta2 < 1)) {
            throw std::invalid_argument("invalid ADAM configuration");
        }
    }
};

/// First and second moments with a per-parameter step count, so a state
/// can be carried over when parameters are appended.
struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    std::vector<int> t;

    /// Extends the state with fresh entries for newly appended parameters.
    void resize(std::size_t n) {
        m.resize(n, 0.0);
        v.resize(n, 0.0);
        t.resize(n, 0);
    }
};

struct AdamResult {
    std::vector<double> params; ///< lowest-energy iterate
    double energy = 0.0;
    int steps = 0;              ///< parameter updates performed
    bool converged = false;
    std::vector<double> trace;  ///< energy of every iterate, starting point first
};

using AdamStepCallback = std::function<void(int, const std::vector<double> &, double)>;

/// Minimizes `objective` (x -> EnergyGradient) from x0. `on_step(k, x, e)`
/// sees each evaluated iterate, k = 0 being the starting point. A given
/// `state` is resumed and left holding the moments of the returned iterate;
/// otherwise moments start at zero.
template <class F>
    requires std::invocable<F, const std::vector<double> &>
AdamResult adam_optimize(F &&objective, std::vector<double> x0, const AdamConfig &cfg,
                         const AdamStepCallback &on_step = {}, AdamState *state = nullptr) {
    cfg.validate();
    AdamResult res;
    std::vector<double> x = std::move(x0);
    AdamState st = state ? *state : AdamState{};
    st.resize(x.size());
    AdamState best = st;

    auto evaluate = [&](int k) {
        EnergyGradient eg = objective(x);
        if (!std::isfinite(eg.energy)) {
            std::ostringstream os;
            os << "non-finite energy at optimizer step " << k;
            throw std::runtime_error(os.str());
        }
        res.trace.push_back(eg.energy);
        if (on_step) {
            on_step(k, x, eg.energy);
        }
        if (k == 0 || eg.energy < res.energy) {
            res.energy = eg.energy;
            res.params = x;
            best = st;
        }
        return eg;
    };

    EnergyGradient eg = evaluate(0);
    bool zero_gradient = true;
    for (double gi : eg.gradient) {
        zero_gradient &= gi == 0.0;
    }
    if (zero_gradient) {
        res.converged = true;
        if (state) {
            *state = std::move(best);
        }
        return res;
    }
    double prev = eg.energy;
    int quiet = 0;
    for (int t = 1; t <= cfg.max_steps; ++t) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double gi = eg.gradient[i];
            const int ti = ++st.t[i];
            st.m[i] = cfg.beta1 * st.m[i] + (1.0 - cfg.beta1) * gi;
            st.v[i] = cfg.beta2 * st.v[i] + (1.0 - cfg.beta2) * gi * gi;
            const double mh = st.m[i] / (1.0 - std::pow(cfg.beta1, ti));
            const double vh = st.v[i] / (1.0 - std::pow(cfg.beta2, ti));
            x[i] -= cfg.lr * mh / (std::sqrt(vh) + cfg.epsilon);
        }
        eg = evaluate(t);
        res.steps = t;
        quiet = std::abs(eg.energy - prev) < cfg.tol ? quiet + 1 : 0;
        prev = eg.energy;
        if (quiet >= cfg.window) {
            res.converged = true;
            break;
        }
    }
    if (state) {
        *state = std::move(best);
    }
    return res;
}

} // namespace vipsa
