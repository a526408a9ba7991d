#include "wwm/cli.hpp"

#include "wwm/bubble.hpp"
#include "wwm/errors.hpp"
#include "wwm/io.hpp"
#include "wwm/run.hpp"
#include "wwm/sandbox.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <numbers>
#include <thread>

namespace wwm {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

ManifoldConfig load_manifold(const std::string& path) {
    if (path.empty()) return {};
    ManifoldConfig m = manifold_config_from_json(read_json_file(path));
    m.validate();
    return m;
}

// ---- simulate -------------------------------------------------------------------------

json simulate_one(const RunConfig& cfg, const fs::path& out_root) {
    const std::string start = utc_now();
    const RunResult result = run(cfg);
    const std::string end = utc_now();
    const fs::path dir = out_root / cfg.name;
    json meta = write_run_directory(dir, cfg, result, start, end);
    json summary = {{"run_dir", dir.string()},
                    {"status", meta["status"]},
                    {"message", meta["message"]},
                    {"steps", meta["steps"]},
                    {"energy_condition", result.initial.energy_condition},
                    {"winding", to_json(winding_series(result.series))}};
    if (!result.initial.warning.empty()) summary["warning"] = result.initial.warning;
    return summary;
}

int cmd_simulate(const std::string& config_path, const std::string& out_root, const std::string& name,
                 std::ostream& out) {
    RunConfig cfg = run_config_from_json(read_json_file(config_path));
    if (!name.empty()) {
        cfg.name = name;
        cfg.validate();
    }
    out << simulate_one(cfg, out_root).dump(2) << '\n';
    return 0;
}

// ---- analyze --------------------------------------------------------------------------

int cmd_analyze(const std::string& run_dir, double tol, std::ostream& out) {
    const fs::path dir(run_dir);
    const json meta = read_json_file(dir / "run_meta.json");
    const RunConfig cfg = run_config_from_json(meta.at("config"));
    const RadialGrid grid(cfg.grid.R, cfg.grid.J);
    const Manifold manifold(cfg.manifold);
    const std::vector<DiagnosticsRecord> series = read_series_csv(dir / "series.csv");

    const auto close = [tol](double a, double b) {
        if (std::isnan(a) && std::isnan(b)) return true;
        return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
    };
    json mismatches = json::array();
    double worst = 0.0;
    std::size_t compared = 0;
    for (const auto& snap : meta.at("snapshots")) {
        const double t = snap.at("t").get<double>();
        const std::string file = snap.at("file").get<std::string>();
        const FieldState s = read_snapshot_csv(dir / file, grid, t);
        const DiagnosticsRecord d =
            instantaneous_record(grid, s, manifold, cfg.diagnostics.A, cfg.diagnostics.lambda_frac);
        const auto row = std::find_if(series.begin(), series.end(), [t](const auto& r) { return r.t == t; });
        if (row == series.end()) {
            mismatches.push_back({{"file", file}, {"column", "t"}, {"detail", "no series row at this time"}});
            continue;
        }
        const std::pair<const char*, std::pair<double, double>> cols[] = {
            {"energy", {d.energy, row->energy}},
            {"lambda", {d.lambda, row->lambda}},
            {"Y_at_lambda", {d.Y_at_lambda, row->Y_at_lambda}},
            {"z_wrap", {d.z_wrap, row->z_wrap}},
            {"degree", {static_cast<double>(d.degree), static_cast<double>(row->degree)}},
            {"cone_energy_A", {d.cone_energy_A, row->cone_energy_A}},
            {"annulus_energy", {d.annulus_energy, row->annulus_energy}},
            {"flux_A", {d.flux_A, row->flux_A}},
        };
        for (const auto& [col, v] : cols) {
            ++compared;
            if (std::isfinite(v.first) && std::isfinite(v.second))
                worst = std::max(worst, std::abs(v.first - v.second) / std::max(1.0, std::abs(v.second)));
            if (!close(v.first, v.second))
                mismatches.push_back({{"file", file}, {"column", col}, {"recomputed", v.first}, {"series", v.second}});
        }
    }
    const WindingReport w = winding_series(series);
    write_json_file(dir / "winding_report.json", to_json(w));
    const bool pass = mismatches.empty();
    json report = {{"run_dir", dir.string()},
                   {"snapshots_checked", meta.at("snapshots").size()},
                   {"values_compared", compared},
                   {"max_relative_difference", worst},
                   {"tolerance", tol},
                   {"pass", pass},
                   {"mismatches", mismatches},
                   {"winding_report", to_json(w)}};
    out << report.dump(2) << '\n';
    return pass ? 0 : 1;
}

// ---- geometry-check -------------------------------------------------------------------

int cmd_geometry_check(const std::string& config_path, std::size_t samples, const std::string& report_path,
                       std::ostream& out) {
    const Manifold manifold(load_manifold(config_path));
    GeometryCheckOptions opt;
    opt.torus_samples = samples;
    json checks = json::array();
    bool pass = true;
    for (const auto& c : run_geometry_checks(manifold, opt)) {
        checks.push_back({{"check_name", c.name},
                          {"max_residual", c.max_residual},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass},
                          {"detail", c.detail}});
        pass = pass && c.pass;
    }
    json report = {{"manifold", to_json(manifold.config())}, {"checks", checks}, {"pass", pass}};
    if (!report_path.empty()) write_json_file(report_path, report);
    out << report.dump(2) << '\n';
    return pass ? 0 : 1;
}

// ---- hm-check -------------------------------------------------------------------------

int cmd_hm_check(const std::string& config_path, std::ostream& out) {
    const ManifoldConfig mc = load_manifold(config_path);
    const Manifold manifold(mc);
    const double E = ground_state_energy();
    const double E2 = profile_energy(degree_two_ansatz());
    double residual = 0.0;
    for (int i = 0; i <= 600; ++i) residual = std::max(residual, std::abs(hm_profile_residual(std::pow(10.0, -3.0 + i * 0.01))));
    const RadialGrid grid(50.0, 20000);
    json defects = json::array();
    bool signs_ok = true;
    for (double c : {-3.0, -2.0, -1.5, -0.1, 0.0, 0.1, 1.5, 2.0, 3.0}) {
        const double v = stationarity_defect(manifold, c, hm_profile_scaled(1.0), 1.0, grid);
        const bool plateau = manifold.f_on_gamma(c).value == mc.M;
        const bool pure = std::abs(c) >= 1.0;
        bool ok = true;
        if (plateau) ok = v == 0.0;
        else if (pure) ok = (c > 0 ? v < 0.0 : v > 0.0);
        signs_ok = signs_ok && ok;
        defects.push_back({{"c", c}, {"value", v}, {"plateau", plateau}, {"sign_ok", ok}});
    }
    const double eps0 = mc.eps0();
    const bool energy_ok = std::abs(E - 4.0 * pi) <= 1e-6;
    const bool residual_ok = residual <= 1e-12;
    const bool degree_two_ok = E2 >= 2.0 * E;
    const bool pass = energy_ok && residual_ok && degree_two_ok && signs_ok;
    json report = {{"ground_state_energy", E},
                   {"closed_form", 4.0 * pi},
                   {"eps0", eps0},
                   {"eps0_branches", {{"eps_bar", mc.eps_bar}, {"half_cot_7pi_16", 0.5 * plateau_half_width()}}},
                   {"degree_two_energy", E2},
                   {"profile_residual_max", residual},
                   {"defect_samples", defects},
                   {"energy_classes",
                    {{"ground_state", to_string(energy_gap_report(E, E, eps0))},
                     {"plus_eps0_over_4", to_string(energy_gap_report(E + 0.25 * eps0, E, eps0))},
                     {"twice", to_string(energy_gap_report(2.0 * E, E, eps0))}}},
                   {"checks",
                    {{"ground_state_energy", energy_ok},
                     {"profile_residual", residual_ok},
                     {"degree_two_bound", degree_two_ok},
                     {"defect_signs", signs_ok}}},
                   {"pass", pass}};
    out << report.dump(2) << '\n';
    return pass ? 0 : 1;
}

// ---- goat-tracks ----------------------------------------------------------------------

int cmd_goat(const std::string& mode, const std::vector<double>& x0, const std::vector<double>& v0, double t_end,
             double dt, double output_dt, const std::string& out_dir, std::ostream& out) {
    if (x0.size() != 2 || v0.size() != 2) throw ConfigError("--x0 and --v0 take two comma-separated numbers");
    const Vec2 x{x0[0], x0[1]}, v{v0[0], v0[1]};
    fs::create_directories(out_dir);
    json summary = {{"mode", mode}, {"x0", x0}, {"t_end", t_end}};
    std::vector<TrajectoryPoint> traj;
    if (mode == "gradient") {
        GradientFlowOptions opt;
        opt.output_dt = output_dt;
        traj = gradient_flow(x, t_end, opt);
        bool monotone = true;
        for (std::size_t i = 1; i < traj.size(); ++i) monotone = monotone && traj[i].energy <= traj[i - 1].energy + 1e-9;
        summary["r_final"] = traj.back().r;
        summary["theta_gain"] = traj.back().theta_lifted - traj.front().theta_lifted;
        summary["f_nonincreasing"] = monotone;
    } else {
        HamiltonianFlowOptions opt;
        opt.dt = dt;
        opt.output_dt = output_dt;
        HamiltonianSummary s;
        traj = hamiltonian_flow(x, v, t_end, opt, s);
        summary["v0"] = v0;
        summary["dt"] = dt;
        summary["energy0"] = s.energy0;
        summary["max_rel_energy_drift"] = s.max_rel_energy_drift;
        summary["literal_energy0"] = s.literal_energy0;
        summary["max_rel_literal_energy_drift"] = s.max_rel_literal_drift;
        summary["min_obstruction"] = s.min_obstruction;
        summary["min_speed_near_circle"] =
            std::isfinite(s.min_speed_near_circle) ? json(s.min_speed_near_circle) : json(nullptr);
        summary["relaxed_to_circle"] = s.relaxed;
    }
    write_trajectory_csv(fs::path(out_dir) / "trajectory.csv", traj);
    write_json_file(fs::path(out_dir) / "goat_summary.json", summary);
    out << summary.dump(2) << '\n';
    return 0;
}

// ---- sweep ----------------------------------------------------------------------------

std::size_t sweep_threads(std::size_t jobs) {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("WINDING_WAVEMAP_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v < 1) throw ConfigError("");
            n = static_cast<std::size_t>(v);
        } catch (const std::exception&) {
            throw ConfigError("WINDING_WAVEMAP_THREADS must be a positive integer");
        }
    }
    return std::max<std::size_t>(1, std::min(n, jobs));
}

int cmd_sweep(const std::string& grid_path, const std::string& out_root, std::ostream& out) {
    const json sweep_file = read_json_file(grid_path);
    if (!sweep_file.is_object() || !sweep_file.contains("parameters")) throw ConfigError("sweep file needs \"parameters\"");
    for (const auto& [k, _] : sweep_file.items())
        if (k != "base" && k != "parameters") throw ConfigError("unknown key \"" + k + "\" in sweep file");
    const json base = sweep_file.value("base", json::object());
    const RunConfig base_cfg = run_config_from_json(base);
    const json base_full = to_json(base_cfg);

    std::vector<std::pair<json::json_pointer, std::vector<json>>> axes;
    for (const auto& [key, values] : sweep_file.at("parameters").items()) {
        if (!values.is_array() || values.empty()) throw ConfigError("sweep parameter \"" + key + "\" needs a non-empty list");
        std::string ptr = "/" + key;
        std::replace(ptr.begin(), ptr.end(), '.', '/');
        axes.emplace_back(json::json_pointer(ptr), std::vector<json>(values.begin(), values.end()));
    }
    std::vector<json> point_params;
    std::vector<RunConfig> configs;
    std::vector<std::size_t> idx(axes.size(), 0);
    for (std::size_t n = 0;; ++n) {
        json cfg_json = base_full;
        json params = json::object();
        for (std::size_t a = 0; a < axes.size(); ++a) {
            if (!cfg_json.contains(axes[a].first)) throw ConfigError("unknown sweep parameter " + axes[a].first.to_string());
            cfg_json[axes[a].first] = axes[a].second[idx[a]];
            params[axes[a].first.to_string()] = axes[a].second[idx[a]];
        }
        char suffix[16];
        std::snprintf(suffix, sizeof suffix, "_%03zu", n);
        cfg_json["name"] = base_cfg.name + suffix;
        configs.push_back(run_config_from_json(cfg_json));
        point_params.push_back(params);
        std::size_t a = 0;
        while (a < axes.size() && ++idx[a] == axes[a].second.size()) idx[a++] = 0;
        if (a == axes.size()) break;
    }

    std::vector<json> results(configs.size());
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    const auto worker = [&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
            json r;
            try {
                r = simulate_one(configs[i], out_root);
            } catch (const std::exception& e) {
                r = {{"status", "error"}, {"message", e.what()}};
            }
            std::lock_guard<std::mutex> lock(err_mutex);
            results[i] = std::move(r);
        }
    };
    const std::size_t n_threads = sweep_threads(configs.size());
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    json runs = json::array();
    for (std::size_t i = 0; i < configs.size(); ++i) {
        json entry = {{"name", configs[i].name}, {"parameters", point_params[i]}};
        entry.update(results[i]);
        runs.push_back(entry);
    }
    json report = {{"base", base_full}, {"threads", n_threads}, {"runs", runs}};
    fs::create_directories(out_root);
    write_json_file(fs::path(out_root) / (base_cfg.name + "_sweep_report.json"), report);
    out << report.dump(2) << '\n';
    return 0;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quasi-equivariant wave maps into a warped product T^2 x_f S^2"};
    app.require_subcommand(1);
    std::function<int()> action;

    std::string config, out_root = "runs", name;
    auto* sim = app.add_subcommand("simulate", "integrate a RunConfig and write a run directory");
    sim->add_option("--config", config, "RunConfig JSON file")->required();
    sim->add_option("--out", out_root, "root directory for run directories");
    sim->add_option("--name", name, "override the run name");
    sim->callback([&] { action = [&] { return cmd_simulate(config, out_root, name, out); }; });

    std::string run_dir;
    double tol = 1e-9;
    auto* ana = app.add_subcommand("analyze", "recompute diagnostics from snapshots and write winding_report.json");
    ana->add_option("--run", run_dir, "run directory")->required();
    ana->add_option("--tol", tol, "relative tolerance of the cross-check");
    ana->callback([&] { action = [&] { return cmd_analyze(run_dir, tol, out); }; });

    std::string manifold_path, report_path;
    std::size_t samples = 1'000'000;
    auto* geo = app.add_subcommand("geometry-check", "run the target-manifold invariant suite");
    geo->add_option("--config", manifold_path, "ManifoldConfig JSON file");
    geo->add_option("--samples", samples, "quasi-random torus samples");
    geo->add_option("--report", report_path, "also write the JSON report to this file");
    geo->callback([&] { action = [&] { return cmd_geometry_check(manifold_path, samples, report_path, out); }; });

    auto* hm = app.add_subcommand("hm-check", "harmonic-map reference checks");
    hm->add_option("--config", manifold_path, "ManifoldConfig JSON file");
    hm->callback([&] { action = [&] { return cmd_hm_check(manifold_path, out); }; });

    std::string mode = "gradient", goat_out = "goat";
    std::vector<double> x0{1.2, 0.0}, v0{0.0, 0.0};
    double t_end = 1e4, dt = 1e-3, output_dt = 1.0;
    auto* goat = app.add_subcommand("goat-tracks", "gradient or Hamiltonian flow of the goat-tracks potential");
    goat->add_option("--mode", mode)->check(CLI::IsMember({"gradient", "hamiltonian"}));
    goat->add_option("--x0", x0, "initial position x,y")->delimiter(',')->expected(2);
    goat->add_option("--v0", v0, "initial velocity (hamiltonian mode)")->delimiter(',')->expected(2);
    goat->add_option("--t-end", t_end);
    goat->add_option("--dt", dt, "Verlet step (hamiltonian mode)");
    goat->add_option("--output-dt", output_dt);
    goat->add_option("--out", goat_out, "output directory for trajectory.csv");
    goat->callback([&] { action = [&] { return cmd_goat(mode, x0, v0, t_end, dt, output_dt, goat_out, out); }; });

    std::string grid_path;
    auto* sweep = app.add_subcommand("sweep", "run a parameter grid of simulations concurrently");
    sweep->add_option("--grid", grid_path, "sweep JSON {base, parameters}")->required();
    sweep->add_option("--out", out_root, "root directory for run directories");
    sweep->callback([&] { action = [&] { return cmd_sweep(grid_path, out_root, out); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }
    try {
        return action();
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const ChartDomainError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace wwm
