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
 * @file experiment.hpp
 * Experiment plumbing behind the command-line tool: key = value run
 * configurations, ground-space caching, CSV/JSON artifacts, and the ed,
 * compare and pool-info tables.
 *
 * Config schema (one `key = value` per line, `#` starts a comment):
 *
 *   nx, ny            grid size (default 2, 2)
 *   bc_x, bc_y        open | periodic (default: open for length 2, else periodic)
 *   t, U              hopping and on-site coupling (default 1, 2)
 *   n_up, n_down      sector (default half filling, extra electron up)
 *   ansatz            vipsa | hva (default vipsa)
 *   r, eps1           selection ratio and pool-gradient tolerance (vipsa)
 *   max_epochs        epoch budget (vipsa)
 *   eps2, window      plateau rule: |dE| < eps2 for `window` steps
 *   lr                ADAM learning rate
 *   max_inner_steps   ADAM step budget per optimization
 *   layers            HVA layer count (default 10)
 *   init_angle        HVA common starting angle (default 1e-3)
 *   shell_up, shell_down   comma lists picking degenerate-shell members
 *   cache             true | false: reuse ground spaces on disk (default true)
 *   cache_dir         where cached ground spaces live (default: output dir)
 *   out               output directory (the --out flag takes precedence)
 */
#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "exact.hpp"
#include "hva.hpp"
#include "vipsa.hpp"

namespace vipsa {

/// Invalid configuration; `line` is 1-based, 0 for whole-file problems.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(const std::string &source, int line, const std::string &msg)
        : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) +
                             ": " + msg),
          line_(line) {}

    [[nodiscard]] int line() const { return line_; }

  private:
    int line_;
};

enum class Ansatz : std::uint8_t { Vipsa, Hva };

inline const char *to_string(Ansatz a) { return a == Ansatz::Vipsa ? "vipsa" : "hva"; }

struct ExperimentConfig {
    GridSpec grid = GridSpec::make(2, 2, 1.0, 2.0);
    std::optional<int> n_up;
    std::optional<int> n_down;
    Ansatz ansatz = Ansatz::Vipsa;
    double r = 0.1;
    double eps1 = 1e-2;
    int max_epochs = 30;
    std::optional<double> eps2;
    std::optional<double> lr;
    std::optional<int> window;
    std::optional<int> max_inner_steps;
    int layers = 10;
    double init_angle = 1e-3;
    std::vector<int> shell_up;
    std::vector<int> shell_down;
    bool cache = true;
    std::string cache_dir;
    std::string out;

    [[nodiscard]] std::pair<int, int> sector() const {
        const auto [du, dd] = default_filling(grid);
        return {n_up.value_or(du), n_down.value_or(dd)};
    }

    [[nodiscard]] AdamConfig adam(AdamConfig base) const {
        if (eps2) {
            base.tol = *eps2;
        }
        if (lr) {
            base.lr = *lr;
        }
        if (window) {
            base.window = *window;
        }
        if (max_inner_steps) {
            base.max_steps = *max_inner_steps;
        }
        return base;
    }

    [[nodiscard]] VipsaConfig vipsa_config() const {
        VipsaConfig c;
        c.r = r;
        c.eps1 = eps1;
        c.max_epochs = max_epochs;
        c.adam = adam(c.adam);
        c.shell_up = shell_up;
        c.shell_down = shell_down;
        return c;
    }

    [[nodiscard]] HvaConfig hva_config() const {
        HvaConfig c;
        c.layers = layers;
        c.init_angle = init_angle;
        c.adam = adam(c.adam);
        c.shell_up = shell_up;
        c.shell_down = shell_down;
        return c;
    }

    /// Effective settings, for the manifest.
    [[nodiscard]] nlohmann::json to_json() const {
        const auto [nu, nd] = sector();
        nlohmann::json j;
        j["nx"] = grid.nx;
        j["ny"] = grid.ny;
        j["bc_x"] = to_string(grid.bc_x);
        j["bc_y"] = to_string(grid.bc_y);
        j["t"] = grid.t;
        j["U"] = grid.U;
        j["n_up"] = nu;
        j["n_down"] = nd;
        j["ansatz"] = to_string(ansatz);
        j["shell_up"] = shell_up;
        j["shell_down"] = shell_down;
        j["cache"] = cache;
        if (ansatz == Ansatz::Vipsa) {
            const auto v = vipsa_config();
            j["r"] = v.r;
            j["eps1"] = v.eps1;
            j["max_epochs"] = v.max_epochs;
            j["eps2"] = v.adam.tol;
            j["lr"] = v.adam.lr;
            j["window"] = v.adam.window;
            j["max_inner_steps"] = v.adam.max_steps;
        } else {
            const auto h = hva_config();
            j["layers"] = h.layers;
            j["init_angle"] = h.init_angle;
            j["eps2"] = h.adam.tol;
            j["lr"] = h.adam.lr;
            j["window"] = h.adam.window;
            j["max_inner_steps"] = h.adam.max_steps;
        }
        return j;
    }
};

namespace detail {

inline std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <class T> std::optional<T> parse_number(const std::string &s) {
    T v{};
    const char *end = s.data() + s.size();
    const auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end) {
        return std::nullopt;
    }
    return v;
}

} // namespace detail

/// Parses and fully validates a configuration. `source` names the input in
/// error messages.
inline ExperimentConfig parse_config(std::istream &in, const std::string &source = "config") {
    ExperimentConfig cfg;
    std::map<std::string, int> seen;
    std::optional<int> nx, ny;
    std::optional<Boundary> bc_x, bc_y;
    double t = 1.0;
    double U = 2.0;

    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(source, line_no, "expected 'key = value'");
        }
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(source, line_no, "missing key");
        }
        if (seen.contains(key)) {
            throw ConfigError(source, line_no,
                              "duplicate key '" + key + "' (first set on line " +
                                  std::to_string(seen[key]) + ")");
        }
        seen[key] = line_no;
        auto fail = [&](const std::string &what) {
            throw ConfigError(source, line_no, key + ": " + what + ", got '" + val + "'");
        };
        auto as_int = [&]() {
            const auto v = detail::parse_number<int>(val);
            if (!v) {
                fail("expected an integer");
            }
            return *v;
        };
        auto as_double = [&]() {
            const auto v = detail::parse_number<double>(val);
            if (!v || !std::isfinite(*v)) {
                fail("expected a finite number");
            }
            return *v;
        };
        auto as_bc = [&]() {
            if (val == "open") {
                return Boundary::Open;
            }
            if (val != "periodic") {
                fail("expected 'open' or 'periodic'");
            }
            return Boundary::Periodic;
        };
        auto as_list = [&]() {
            std::vector<int> out;
            std::stringstream ss(val);
            std::string item;
            while (std::getline(ss, item, ',')) {
                const auto v = detail::parse_number<int>(detail::trim(item));
                if (!v) {
                    fail("expected a comma-separated integer list");
                }
                out.push_back(*v);
            }
            return out;
        };
        auto positive = [&](double v) {
            if (!(v > 0)) {
                fail("must be positive");
            }
            return v;
        };

        if (key == "nx") {
            nx = as_int();
        } else if (key == "ny") {
            ny = as_int();
        } else if (key == "bc_x") {
            bc_x = as_bc();
        } else if (key == "bc_y") {
            bc_y = as_bc();
        } else if (key == "t") {
            t = as_double();
        } else if (key == "U") {
            U = as_double();
        } else if (key == "n_up") {
            cfg.n_up = as_int();
        } else if (key == "n_down") {
            cfg.n_down = as_int();
        } else if (key == "ansatz") {
            if (val == "vipsa") {
                cfg.ansatz = Ansatz::Vipsa;
            } else if (val == "hva") {
                cfg.ansatz = Ansatz::Hva;
            } else {
                fail("expected 'vipsa' or 'hva'");
            }
        } else if (key == "r") {
            cfg.r = as_double();
            if (!(cfg.r > 0 && cfg.r <= 1)) {
                fail("must lie in (0, 1]");
            }
        } else if (key == "eps1") {
            cfg.eps1 = positive(as_double());
        } else if (key == "eps2") {
            cfg.eps2 = positive(as_double());
        } else if (key == "lr") {
            cfg.lr = positive(as_double());
        } else if (key == "window") {
            cfg.window = as_int();
            if (*cfg.window < 1) {
                fail("must be at least 1");
            }
        } else if (key == "max_epochs") {
            cfg.max_epochs = as_int();
            if (cfg.max_epochs < 0) {
                fail("must be non-negative");
            }
        } else if (key == "max_inner_steps") {
            cfg.max_inner_steps = as_int();
            if (*cfg.max_inner_steps < 0) {
                fail("must be non-negative");
            }
        } else if (key == "layers") {
            cfg.layers = as_int();
            if (cfg.layers < 1) {
                fail("must be at least 1");
            }
        } else if (key == "init_angle") {
            cfg.init_angle = as_double();
        } else if (key == "shell_up") {
            cfg.shell_up = as_list();
        } else if (key == "shell_down") {
            cfg.shell_down = as_list();
        } else if (key == "cache") {
            if (val == "true") {
                cfg.cache = true;
            } else if (val == "false") {
                cfg.cache = false;
            } else {
                fail("expected 'true' or 'false'");
            }
        } else if (key == "cache_dir") {
            cfg.cache_dir = val;
        } else if (key == "out") {
            cfg.out = val;
        } else {
            throw ConfigError(source, line_no, "unknown key '" + key + "'");
        }
    }

    auto line_of = [&](const std::string &k) { return seen.contains(k) ? seen[k] : 0; };
    GridSpec g;
    g.nx = nx.value_or(2);
    g.ny = ny.value_or(2);
    g.bc_x = bc_x.value_or(g.nx > 2 ? Boundary::Periodic : Boundary::Open);
    g.bc_y = bc_y.value_or(g.ny > 2 ? Boundary::Periodic : Boundary::Open);
    g.t = t;
    g.U = U;
    try {
        g.validate();
    } catch (const std::invalid_argument &e) {
        throw ConfigError(source, std::max(line_of("nx"), line_of("ny")), e.what());
    }
    cfg.grid = g;
    const auto [nu, nd] = cfg.sector();
    for (auto [k, v] : {std::pair{"n_up", nu}, {"n_down", nd}}) {
        if (v < 0 || v > g.n_sites()) {
            throw ConfigError(source, line_of(k),
                              std::string(k) + " must lie in [0, " + std::to_string(g.n_sites()) +
                                  "]");
        }
    }
    try {
        (void)fermi_sea(g, nu, nd, cfg.shell_up, cfg.shell_down);
    } catch (const std::exception &e) {
        throw ConfigError(source, std::max(line_of("shell_up"), line_of("shell_down")), e.what());
    }
    return cfg;
}

inline ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path, 0, "cannot read configuration file");
    }
    return parse_config(in, path);
}

/// Which Hamiltonian a ground space belongs to.
enum class Register : std::uint8_t { Momentum, Site };

inline const char *to_string(Register r) { return r == Register::Momentum ? "momentum" : "site"; }

/// Stable 64-bit FNV-1a hash of the ground-space identity.
inline std::string ground_space_key(const GridSpec &g, int n_up, int n_down, Register reg) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%d|%d|%s|%s|%.17g|%.17g|%d|%d|%s", g.nx, g.ny,
                  to_string(g.bc_x), to_string(g.bc_y), g.t, g.U, n_up, n_down, to_string(reg));
    std::uint64_t h = 1469598103934665603ULL;
    for (const char *p = buf; *p; ++p) {
        h ^= static_cast<unsigned char>(*p);
        h *= 1099511628211ULL;
    }
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// Loads the cached ground space of `h` or computes (and stores) it.
inline GroundSpace cached_ground_space(const SectorOperator &h, const std::string &path,
                                       bool use_cache) {
    const Sector &s = h.sector();
    if (use_cache && std::filesystem::exists(path)) {
        GroundSpace gs = load_ground_space(path);
        if (gs.sector->n_qubits() == s.n_qubits() && gs.sector->n_up() == s.n_up() &&
            gs.sector->n_down() == s.n_down()) {
            return gs;
        }
    }
    GroundSpace gs = ground_space(h);
    if (use_cache) {
        std::filesystem::create_directories(std::filesystem::path(path).parent_path());
        save_ground_space(gs, path);
    }
    return gs;
}

namespace detail {
inline std::string fmt(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}
} // namespace detail

inline std::string epochs_csv(const RunResult &r) {
    std::string s = "epoch,max_gradient,n_selected,n_params,inner_steps,energy,fidelity\n";
    for (const auto &e : r.epochs) {
        s += std::to_string(e.epoch) + "," + detail::fmt(e.max_gradient) + "," +
             std::to_string(e.selected.size()) + "," + std::to_string(e.n_params) + "," +
             std::to_string(e.inner_steps) + "," + detail::fmt(e.energy) + "," +
             detail::fmt(e.fidelity) + "\n";
    }
    return s;
}

inline std::string steps_csv(const RunResult &r) {
    std::string s = "step,epoch,energy,fidelity\n";
    for (const auto &st : r.steps) {
        s += std::to_string(st.step) + "," + std::to_string(st.epoch) + "," +
             detail::fmt(st.energy) + "," + detail::fmt(st.fidelity) + "\n";
    }
    return s;
}

struct RunArtifacts {
    RunResult result;
    GroundSpace exact;
    nlohmann::json manifest;

    [[nodiscard]] int exit_code() const { return result.status == RunStatus::Converged ? 0 : 2; }
};

inline nlohmann::json grid_json(const GridSpec &g, int n_up, int n_down) {
    return {{"nx", g.nx},         {"ny", g.ny},        {"bc_x", to_string(g.bc_x)},
            {"bc_y", to_string(g.bc_y)}, {"t", g.t},  {"U", g.U},
            {"n_qubits", g.n_qubits()},  {"n_up", n_up}, {"n_down", n_down}};
}

/// Runs the configured ansatz. `cache_dir` holds ground-space files.
inline RunArtifacts execute(const ExperimentConfig &cfg, const std::string &cache_dir) {
    const auto [nu, nd] = cfg.sector();
    RunArtifacts art;
    nlohmann::json m;
    m["ansatz"] = to_string(cfg.ansatz);
    m["config"] = cfg.to_json();
    m["grid"] = grid_json(cfg.grid, nu, nd);

    const Register reg = cfg.ansatz == Ansatz::Vipsa ? Register::Momentum : Register::Site;
    const std::string key = ground_space_key(cfg.grid, nu, nd, reg);
    const std::string gs_path = (std::filesystem::path(cache_dir) / ("ground-" + key + ".bin")).string();
    FermiSea sea;
    if (cfg.ansatz == Ansatz::Vipsa) {
        const auto vc = cfg.vipsa_config();
        const auto prob = VipsaProblem::make(cfg.grid, nu, nd, vc.shell_up, vc.shell_down);
        art.exact = cached_ground_space(*prob.h, gs_path, cfg.cache);
        art.result = vipsa_run(prob, vc, &art.exact);
        sea = prob.sea;
        const auto &ps = prob.pool.stats;
        m["pool"] = {{"size", ps.pool_size},
                     {"table", ps.table_size},
                     {"diagonal", ps.diagonal},
                     {"zero_denominator", ps.zero_denominator},
                     {"repeated_orbital", ps.repeated_orbital},
                     {"conjugates", ps.conjugates}};
    } else {
        const auto hc = cfg.hva_config();
        const auto prob = HvaProblem::make(cfg.grid, nu, nd, hc);
        art.exact = cached_ground_space(*prob.h, gs_path, cfg.cache);
        art.result = hva_run(prob, hc, &art.exact);
        sea = prob.sea;
        const auto l = hva_layout(cfg.grid, hc.layers);
        m["layout"] = {{"layers", l.layers},
                       {"params_per_layer", l.params_per_layer()},
                       {"horizontal_matchings", l.horizontal.size()},
                       {"vertical_matchings", l.vertical.size()}};
    }
    const auto &r = art.result;
    m["fermi_sea"] = {{"degeneracy", sea.degeneracy},
                      {"occupied_up", sea.occupied_up},
                      {"occupied_down", sea.occupied_down}};
    m["exact"] = {{"energy", art.exact.energy},
                  {"degeneracy", art.exact.degeneracy()},
                  {"register", to_string(reg)},
                  {"cache_key", key}};
    m["status"] = to_string(r.status);
    m["reason"] = r.reason;
    m["exit_code"] = art.exit_code();
    m["epochs"] = r.epochs.size();
    m["steps"] = r.steps.size();
    m["final"] = {{"energy", r.energy},
                  {"fidelity", r.fidelity},
                  {"energy_error", r.energy - art.exact.energy},
                  {"n_params", r.params.size()}};
    m["files"] = {{"epochs", "epochs.csv"}, {"steps", "steps.csv"}};
    art.manifest = std::move(m);
    return art;
}

inline void write_text(const std::filesystem::path &p, const std::string &text) {
    std::ofstream os(p, std::ios::binary);
    if (!os) {
        throw std::runtime_error("cannot write " + p.string());
    }
    os << text;
    if (!os) {
        throw std::runtime_error("write failed for " + p.string());
    }
}

inline void write_artifacts(const RunArtifacts &art, const std::filesystem::path &dir) {
    std::filesystem::create_directories(dir);
    write_text(dir / "epochs.csv", epochs_csv(art.result));
    write_text(dir / "steps.csv", steps_csv(art.result));
    write_text(dir / "manifest.json", art.manifest.dump(2) + "\n");
}

/// The `run` subcommand: validates, runs, writes artifacts and returns the
/// exit status (0 converged, 2 exhausted). Errors propagate as exceptions.
inline int cmd_run(const std::string &config_path, const std::string &out_override,
                   std::ostream &log) {
    ExperimentConfig cfg = load_config(config_path);
    if (!out_override.empty()) {
        cfg.out = out_override;
    }
    if (cfg.out.empty()) {
        throw ConfigError(config_path, 0, "no output directory (set 'out' or pass --out)");
    }
    const std::string cache_dir = cfg.cache_dir.empty() ? cfg.out : cfg.cache_dir;
    const RunArtifacts art = execute(cfg, cache_dir);
    write_artifacts(art, cfg.out);
    const auto &r = art.result;
    log << to_string(cfg.ansatz) << " " << cfg.grid.label() << " U=" << detail::fmt(cfg.grid.U)
        << ": " << to_string(r.status) << " (" << r.reason << "), E=" << detail::fmt(r.energy)
        << " E_exact=" << detail::fmt(art.exact.energy) << " F=" << detail::fmt(r.fidelity)
        << " epochs=" << r.epochs.size() - 1 << " steps=" << r.steps.size() - 1 << "\n";
    return art.exit_code();
}

struct EdRow {
    double U = 0.0;
    double energy = 0.0;
    std::size_t degeneracy = 0;
};

/// Sector ground energies per coupling on the chosen register.
inline std::vector<EdRow> cmd_ed(GridSpec grid, const std::vector<double> &couplings, int n_up,
                                 int n_down, Register reg) {
    std::vector<EdRow> rows;
    for (double U : couplings) {
        grid.U = U;
        grid.validate();
        const PauliSum h = reg == Register::Momentum ? build_kspace(grid).total : build_real(grid);
        const GroundSpace gs = ground_space(h, n_up, n_down);
        rows.push_back({U, gs.energy, gs.degeneracy()});
    }
    return rows;
}

inline std::string ed_table(const GridSpec &grid, int n_up, int n_down, Register reg,
                            const std::vector<EdRow> &rows) {
    std::string s = "grid,register,n_up,n_down,U,energy,degeneracy\n";
    for (const auto &r : rows) {
        s += grid.label() + "," + to_string(reg) + "," + std::to_string(n_up) + "," +
             std::to_string(n_down) + "," + detail::fmt(r.U) + "," + detail::fmt(r.energy) + "," +
             std::to_string(r.degeneracy) + "\n";
    }
    return s;
}

inline std::string pool_info_table(const std::vector<GridSpec> &grids) {
    std::string s =
        "grid,U,table,diagonal,zero_denominator,repeated_orbital,conjugates,pool_size\n";
    for (const auto &g : grids) {
        const auto st = build_pool(g).stats;
        s += g.label() + "," + detail::fmt(g.U) + "," + std::to_string(st.table_size) + "," +
             std::to_string(st.diagonal) + "," + std::to_string(st.zero_denominator) + "," +
             std::to_string(st.repeated_orbital) + "," + std::to_string(st.conjugates) + "," +
             std::to_string(st.pool_size) + "\n";
    }
    return s;
}

/// A run directory read back from disk.
struct LoadedRun {
    std::string dir;
    nlohmann::json manifest;
    std::string epochs_text;
    std::string steps_text;
    std::vector<std::vector<std::string>> epochs; ///< data rows, header dropped
    std::vector<std::vector<std::string>> steps;
};

namespace detail {
inline std::string read_text(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + p.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::vector<std::vector<std::string>> csv_rows(const std::string &text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        rows.push_back(std::move(cells));
    }
    return rows;
}
} // namespace detail

inline LoadedRun load_run(const std::string &dir) {
    LoadedRun r;
    r.dir = dir;
    const std::filesystem::path p(dir);
    r.manifest = nlohmann::json::parse(detail::read_text(p / "manifest.json"));
    r.epochs_text = detail::read_text(p / "epochs.csv");
    r.steps_text = detail::read_text(p / "steps.csv");
    r.epochs = detail::csv_rows(r.epochs_text);
    r.steps = detail::csv_rows(r.steps_text);
    if (r.epochs.size() != r.manifest.at("epochs").get<std::size_t>() ||
        r.steps.size() != r.manifest.at("steps").get<std::size_t>()) {
        throw std::runtime_error(dir + ": CSV row counts disagree with the manifest");
    }
    return r;
}

/// First step index whose energy is within `tol` of the exact ground
/// energy, if any.
inline std::optional<int> first_step_within(const LoadedRun &run, double tol) {
    const double exact = run.manifest.at("exact").at("energy").get<double>();
    for (const auto &row : run.steps) {
        if (std::abs(std::stod(row.at(2)) - exact) <= tol) {
            return std::stoi(row.at(0));
        }
    }
    return std::nullopt;
}

/// Aligned table over `by` ("step" or "epoch"). A single run passes its
/// file through unchanged; several runs must share grid and sector.
inline std::string cmd_compare(const std::vector<LoadedRun> &runs, const std::string &by = "step") {
    if (runs.empty()) {
        throw std::invalid_argument("compare needs at least one run");
    }
    if (by != "step" && by != "epoch") {
        throw std::invalid_argument("compare axis must be 'step' or 'epoch'");
    }
    for (const auto &r : runs) {
        if (r.manifest.at("grid") != runs.front().manifest.at("grid")) {
            throw std::invalid_argument("grid or register mismatch between " + runs.front().dir +
                                        " and " + r.dir);
        }
    }
    const bool steps = by == "step";
    if (runs.size() == 1) {
        return steps ? runs.front().steps_text : runs.front().epochs_text;
    }
    // energy/fidelity columns: steps.csv (2, 3); epochs.csv (5, 6).
    const std::size_t ce = steps ? 2 : 5;
    const std::size_t cf = steps ? 3 : 6;
    std::map<std::string, int> label_count;
    std::string s = by;
    std::map<int, std::vector<std::pair<std::string, std::string>>> table;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        std::string label = runs[i].manifest.at("ansatz").get<std::string>();
        if (++label_count[label] > 1) {
            label += "_" + std::to_string(label_count[label]);
        }
        s += "," + label + "_energy," + label + "_fidelity";
        for (const auto &row : steps ? runs[i].steps : runs[i].epochs) {
            auto &cells = table[std::stoi(row.at(0))];
            cells.resize(runs.size());
            cells[i] = {row.at(ce), row.at(cf)};
        }
    }
    s += "\n";
    for (auto &[k, cells] : table) {
        cells.resize(runs.size());
        s += std::to_string(k);
        for (const auto &[e, f] : cells) {
            s += "," + e + "," + f;
        }
        s += "\n";
    }
    return s;
}

} // namespace vipsa
