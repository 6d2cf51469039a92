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

// vipsa: command-line front end. Thread count comes from VIPSA_THREADS.

#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "vipsa/experiment.hpp"

namespace {

using vipsa::Boundary;
using vipsa::GridSpec;

struct GridArgs {
    int nx = 2;
    int ny = 2;
    std::string bc_x;
    std::string bc_y;
    double t = 1.0;

    void add(CLI::App *app) {
        app->add_option("--nx", nx, "sites along x")->capture_default_str();
        app->add_option("--ny", ny, "sites along y")->capture_default_str();
        app->add_option("--bc-x", bc_x, "open | periodic")->check(CLI::IsMember({"open", "periodic"}));
        app->add_option("--bc-y", bc_y, "open | periodic")->check(CLI::IsMember({"open", "periodic"}));
        app->add_option("-t", t, "hopping amplitude")->capture_default_str();
    }

    [[nodiscard]] GridSpec grid(double U) const {
        GridSpec g = GridSpec::make(nx, ny, t, U);
        if (!bc_x.empty()) {
            g.bc_x = bc_x == "open" ? Boundary::Open : Boundary::Periodic;
        }
        if (!bc_y.empty()) {
            g.bc_y = bc_y == "open" ? Boundary::Open : Boundary::Periodic;
        }
        g.validate();
        return g;
    }
};

void emit(const std::string &text, const std::string &out) {
    if (out.empty()) {
        std::cout << text;
    } else {
        vipsa::write_text(out, text);
    }
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Adaptive interaction-rotation ansatz for the 2D Hubbard model"};
    app.require_subcommand(1);

    auto *run = app.add_subcommand("run", "run an ansatz from a key = value config file");
    std::string config_path;
    std::string run_out;
    run->add_option("config", config_path, "configuration file")->required();
    run->add_option("--out", run_out, "output directory (overrides 'out')");

    auto *ed = app.add_subcommand("ed", "exact sector ground energies and degeneracies");
    GridArgs ed_grid;
    ed_grid.add(ed);
    std::vector<double> couplings{2.0, 4.0, 6.0};
    int ed_up = -1;
    int ed_down = -1;
    std::string reg = "momentum";
    std::string ed_out;
    ed->add_option("-U,--U", couplings, "couplings")->delimiter(',')->capture_default_str();
    ed->add_option("--n-up", ed_up, "up electrons (default half filling)");
    ed->add_option("--n-down", ed_down, "down electrons (default half filling)");
    ed->add_option("--register", reg, "momentum | site | both")
        ->check(CLI::IsMember({"momentum", "site", "both"}))
        ->capture_default_str();
    ed->add_option("--out", ed_out, "write the table here instead of stdout");

    auto *cmp = app.add_subcommand("compare", "merge run traces into one aligned table");
    std::vector<std::string> dirs;
    std::string by = "step";
    double threshold = -1.0;
    std::string cmp_out;
    cmp->add_option("runs", dirs, "run output directories")->required();
    cmp->add_option("--by", by, "step | epoch")->check(CLI::IsMember({"step", "epoch"}))->capture_default_str();
    cmp->add_option("--threshold", threshold,
                    "report (stderr) the first step within this energy error");
    cmp->add_option("--out", cmp_out, "write the table here instead of stdout");

    auto *pool = app.add_subcommand("pool-info", "pool size and excluded-operator counts");
    GridArgs pool_grid;
    pool_grid.add(pool);
    double pool_U = 2.0;
    pool->add_option("-U,--U", pool_U, "coupling")->capture_default_str();
    pool->add_flag("--all", "the 2x2, 2x3, 2x4 and 3x3 grids");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*run) {
            return vipsa::cmd_run(config_path, run_out, std::cout);
        }
        if (*ed) {
            const GridSpec g = ed_grid.grid(0.0);
            const auto [du, dd] = vipsa::default_filling(g);
            const int nu = ed_up >= 0 ? ed_up : du;
            const int nd = ed_down >= 0 ? ed_down : dd;
            std::string text;
            std::map<double, double> momentum;
            for (auto r : {vipsa::Register::Momentum, vipsa::Register::Site}) {
                if (reg != "both" && reg != vipsa::to_string(r)) {
                    continue;
                }
                const auto rows = vipsa::cmd_ed(g, couplings, nu, nd, r);
                const std::string table = vipsa::ed_table(g, nu, nd, r, rows);
                text += text.empty() ? table : table.substr(table.find('\n') + 1);
                for (const auto &row : rows) {
                    if (r == vipsa::Register::Momentum) {
                        momentum[row.U] = row.energy;
                    } else if (momentum.contains(row.U) &&
                               std::abs(momentum[row.U] - row.energy) > 1e-9) {
                        std::cerr << "warning: registers disagree at U=" << row.U << "\n";
                    }
                }
            }
            emit(text, ed_out);
            return 0;
        }
        if (*cmp) {
            std::vector<vipsa::LoadedRun> runs;
            for (const auto &d : dirs) {
                runs.push_back(vipsa::load_run(d));
            }
            const std::string table = vipsa::cmd_compare(runs, by);
            if (threshold >= 0) {
                for (const auto &r : runs) {
                    const auto s = vipsa::first_step_within(r, threshold);
                    std::cerr << r.dir << " (" << r.manifest.at("ansatz").get<std::string>()
                              << "): " << (s ? "step " + std::to_string(*s) : "never")
                              << " within " << threshold << "\n";
                }
            }
            emit(table, cmp_out);
            return 0;
        }
        if (*pool) {
            std::vector<GridSpec> grids;
            if (pool->count("--all") > 0) {
                for (auto [nx, ny] : {std::pair{2, 2}, {2, 3}, {2, 4}, {3, 3}}) {
                    grids.push_back(GridSpec::make(nx, ny, pool_grid.t, pool_U));
                }
            } else {
                grids.push_back(pool_grid.grid(pool_U));
            }
            std::cout << vipsa::pool_info_table(grids);
            return 0;
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
