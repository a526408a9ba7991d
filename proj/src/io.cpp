#include "wwm/io.hpp"

#include <cerrno>

#include "wwm/errors.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

namespace wwm {

using nlohmann::json;
namespace fs = std::filesystem;

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    const std::size_t used = static_cast<std::size_t>(end - s.c_str());
    if (used == 0 || (errno == ERANGE && std::isinf(v))) throw ConfigError("not a number: \"" + s + "\"");
    if (used != s.size()) throw ConfigError("not a number: \"" + s + "\"");
    return v;
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

namespace {

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, _] : j.items())
        if (!ok.count(k)) throw ConfigError("unknown key \"" + k + "\" in " + where);
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + "." + key + " has the wrong type");
    }
}

void read_number(const json& j, const char* key, double& out, const std::string& where) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_number()) throw ConfigError(where + "." + key + " must be a number");
    out = j.at(key).get<double>();
}

void read_count(const json& j, const char* key, std::size_t& out, const std::string& where) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ConfigError(where + "." + key + " must be a non-negative integer");
    out = v.get<std::size_t>();
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw Error("cannot write " + p.string());
    return os;
}

std::ifstream open_in(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    if (!is) throw ConfigError("cannot read " + p.string());
    return is;
}

void expect_header(std::istream& is, const std::string& header, const fs::path& p) {
    std::string line;
    if (!std::getline(is, line) || line != header)
        throw ConfigError(p.string() + ": expected header \"" + header + "\"");
}

}  // namespace

json to_json(const ManifoldConfig& m) {
    return {{"M", m.M}, {"eps_bar", m.eps_bar}, {"chi", {{"delta0", m.chi.delta0}, {"sharpness", m.chi.sharpness}}}};
}

json to_json(const RunConfig& c) {
    return {{"name", c.name},
            {"grid", {{"R", c.grid.R}, {"J", c.grid.J}}},
            {"cfl", c.cfl},
            {"t_end", c.t_end},
            {"output_dt", c.output_dt},
            {"init",
             {{"c", c.init.c},
              {"lam0", c.init.lam0},
              {"y1_amp", c.init.y1_amp},
              {"alpha1_amp", c.init.alpha1_amp},
              {"bump_radius", c.init.bump_radius}}},
            {"manifold", to_json(c.manifold)},
            {"diagnostics", {{"A", c.diagnostics.A}, {"lambda_frac", c.diagnostics.lambda_frac}}},
            {"forcing", to_string(c.forcing)},
            {"snapshot_stride", c.snapshot_stride},
            {"stop_on_underresolved", c.stop_on_underresolved}};
}

ManifoldConfig manifold_config_from_json(const json& j) {
    ManifoldConfig m;
    check_keys(j, "manifold", {"M", "eps_bar", "chi"});
    read_number(j, "M", m.M, "manifold");
    read_number(j, "eps_bar", m.eps_bar, "manifold");
    if (j.contains("chi")) {
        const json& c = j.at("chi");
        check_keys(c, "manifold.chi", {"delta0", "sharpness"});
        read_number(c, "delta0", m.chi.delta0, "manifold.chi");
        read_number(c, "sharpness", m.chi.sharpness, "manifold.chi");
    }
    return m;
}

RunConfig run_config_from_json(const json& j) {
    RunConfig c;
    check_keys(j, "config", {"name", "grid", "cfl", "t_end", "output_dt", "init", "manifold", "diagnostics", "forcing",
                             "snapshot_stride", "stop_on_underresolved"});
    read(j, "name", c.name, "config");
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        check_keys(g, "grid", {"R", "J"});
        read_number(g, "R", c.grid.R, "grid");
        read_count(g, "J", c.grid.J, "grid");
    }
    read_number(j, "cfl", c.cfl, "config");
    read_number(j, "t_end", c.t_end, "config");
    read_number(j, "output_dt", c.output_dt, "config");
    if (j.contains("init")) {
        const json& i = j.at("init");
        check_keys(i, "init", {"c", "lam0", "y1_amp", "alpha1_amp", "bump_radius"});
        read_number(i, "c", c.init.c, "init");
        read_number(i, "lam0", c.init.lam0, "init");
        read_number(i, "y1_amp", c.init.y1_amp, "init");
        read_number(i, "alpha1_amp", c.init.alpha1_amp, "init");
        read_number(i, "bump_radius", c.init.bump_radius, "init");
    }
    if (j.contains("manifold")) c.manifold = manifold_config_from_json(j.at("manifold"));
    if (j.contains("diagnostics")) {
        const json& d = j.at("diagnostics");
        check_keys(d, "diagnostics", {"A", "lambda_frac"});
        read_number(d, "A", c.diagnostics.A, "diagnostics");
        read_number(d, "lambda_frac", c.diagnostics.lambda_frac, "diagnostics");
    }
    if (j.contains("forcing")) {
        std::string f;
        read(j, "forcing", f, "config");
        c.forcing = forcing_from_string(f);
    }
    read_count(j, "snapshot_stride", c.snapshot_stride, "config");
    read(j, "stop_on_underresolved", c.stop_on_underresolved, "config");
    c.validate();
    return c;
}

json read_json_file(const fs::path& p) {
    std::ifstream is = open_in(p);
    try {
        return json::parse(is);
    } catch (const json::parse_error& e) {
        throw ConfigError(p.string() + ": " + e.what());
    }
}

void write_json_file(const fs::path& p, const json& j) {
    std::ofstream os = open_out(p);
    os << j.dump(2) << '\n';
}

json series_column_docs() {
    return {
        {"t", "time"},
        {"energy", "discrete energy 2 pi int (|Y_r|^2 + |Y_t|^2)/2 + f(0,Y) e(alpha) r dr, including the exterior tail"},
        {"lambda", "concentration scale: 2 lambda encloses spherical energy 1.5 (nan if the total is below 1)"},
        {"Y_at_lambda", "torus coordinate Y at r = lambda, lifted to the real line"},
        {"z_wrap", "Y_at_lambda mod 1"},
        {"degree", "round(alpha(r_{J-1}) / pi)"},
        {"cone_energy_A", "energy in r < t - A"},
        {"annulus_energy", "energy in lambda_frac t < r < t - A"},
        {"flux_A", "instantaneous flux 2 pi rho (e + m) through rho = t - A"},
        {"kinetic_cone_avg", "(1/t) int_A^t int_0^{s-A} (Y_t^2 + f alpha_t^2) r dr ds"},
    };
}

void write_series_csv(const fs::path& p, const std::vector<DiagnosticsRecord>& series) {
    std::ofstream os = open_out(p);
    os << series_header << '\n';
    for (const auto& d : series) {
        os << format_double(d.t) << ',' << format_double(d.energy) << ',' << format_double(d.lambda) << ','
           << format_double(d.Y_at_lambda) << ',' << format_double(d.z_wrap) << ',' << d.degree << ','
           << format_double(d.cone_energy_A) << ',' << format_double(d.annulus_energy) << ','
           << format_double(d.flux_A) << ',' << format_double(d.kinetic_cone_avg) << '\n';
    }
}

std::vector<DiagnosticsRecord> read_series_csv(const fs::path& p) {
    std::ifstream is = open_in(p);
    expect_header(is, series_header, p);
    std::vector<DiagnosticsRecord> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto c = split_csv_line(line);
        if (c.size() != 10) throw ConfigError(p.string() + ": malformed row");
        DiagnosticsRecord d;
        d.t = parse_double(c[0]);
        d.energy = parse_double(c[1]);
        d.lambda = parse_double(c[2]);
        d.Y_at_lambda = parse_double(c[3]);
        d.z_wrap = parse_double(c[4]);
        d.degree = static_cast<int>(parse_double(c[5]));
        d.cone_energy_A = parse_double(c[6]);
        d.annulus_energy = parse_double(c[7]);
        d.flux_A = parse_double(c[8]);
        d.kinetic_cone_avg = parse_double(c[9]);
        out.push_back(d);
    }
    return out;
}

std::string snapshot_filename(double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "snap_%.6f.csv", t);
    return buf;
}

void write_snapshot_csv(const fs::path& p, const RadialGrid& grid, const FieldState& s) {
    s.check_shape(grid);
    std::ofstream os = open_out(p);
    os << snapshot_header << '\n';
    for (std::size_t j = 0; j < grid.size(); ++j) {
        os << format_double(grid.r(j)) << ',' << format_double(s.Y[j]) << ',' << format_double(s.Y_t[j]) << ','
           << format_double(s.alpha[j]) << ',' << format_double(s.alpha_t[j]) << '\n';
    }
}

FieldState read_snapshot_csv(const fs::path& p, const RadialGrid& grid, double t) {
    std::ifstream is = open_in(p);
    expect_header(is, snapshot_header, p);
    FieldState s;
    s.t = t;
    std::string line;
    std::size_t j = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto c = split_csv_line(line);
        if (c.size() != 5) throw ConfigError(p.string() + ": malformed row");
        if (j >= grid.size() || std::abs(parse_double(c[0]) - grid.r(j)) > 1e-12 * grid.R())
            throw ConfigError(p.string() + ": radii do not match the configured grid");
        s.Y.push_back(parse_double(c[1]));
        s.Y_t.push_back(parse_double(c[2]));
        s.alpha.push_back(parse_double(c[3]));
        s.alpha_t.push_back(parse_double(c[4]));
        ++j;
    }
    s.check_shape(grid);
    return s;
}

void write_trajectory_csv(const fs::path& p, const std::vector<TrajectoryPoint>& traj) {
    std::ofstream os = open_out(p);
    os << trajectory_header << '\n';
    for (const auto& q : traj)
        os << format_double(q.t) << ',' << format_double(q.r) << ',' << format_double(q.theta_lifted) << ','
           << format_double(q.energy) << '\n';
}

json to_json(const WindingReport& w) {
    const auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    return {{"wrap_count", num(w.wrap_count)},
            {"monotone_from_t", w.monotone_from_t ? json(*w.monotone_from_t) : json(nullptr)},
            {"eventually_monotone", w.eventually_monotone},
            {"z_cover_fraction", num(w.z_cover_fraction)},
            {"lambda_trend",
             {{"initial", num(w.lambda_trend.initial)},
              {"final", num(w.lambda_trend.final)},
              {"min", num(w.lambda_trend.min)},
              {"max", num(w.lambda_trend.max)},
              {"decrease_factor", num(w.lambda_trend.decrease_factor)}}},
            {"samples", w.samples}};
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json write_run_directory(const fs::path& dir, const RunConfig& cfg, const RunResult& result,
                         const std::string& start_time, const std::string& end_time) {
    fs::create_directories(dir);
    const RadialGrid grid(cfg.grid.R, cfg.grid.J);
    write_series_csv(dir / "series.csv", result.series);
    json snaps = json::array();
    json outputs = json::array({"series.csv"});
    for (const auto& s : result.snapshots) {
        const std::string name = snapshot_filename(s.t);
        write_snapshot_csv(dir / name, grid, s);
        snaps.push_back({{"file", name}, {"t", s.t}});
        outputs.push_back(name);
    }
    const WindingReport w = winding_series(result.series);
    write_json_file(dir / "winding_report.json", to_json(w));
    outputs.push_back("winding_report.json");

    const json config = to_json(cfg);
    json meta = {{"artifact_version", artifact_version},
                 {"subcommand", "simulate"},
                 {"config", config},
                 {"config_hash", fnv1a_hex(config.dump())},
                 {"start_time", start_time},
                 {"end_time", end_time},
                 {"status", to_string(result.status)},
                 {"message", result.message},
                 {"steps", result.steps},
                 {"dt_max", result.dt_max},
                 {"series_columns", series_column_docs()},
                 {"snapshot_columns",
                  {{"r", "cell centre (j + 1/2) R / J"},
                   {"Y", "torus coordinate along the geodesic (lifted)"},
                   {"Y_t", "time derivative of Y"},
                   {"alpha", "sphere polar angle"},
                   {"alpha_t", "time derivative of alpha"}}},
                 {"snapshots", snaps},
                 {"initial",
                  {{"energy", result.initial.energy},
                   {"ground_state_energy", result.initial.ground_state_energy},
                   {"eps0", result.initial.eps0},
                   {"energy_condition", result.initial.energy_condition},
                   {"warning", result.initial.warning}}},
                 {"checks", {{"energy_condition", result.initial.energy_condition}}}};
    outputs.push_back("run_meta.json");
    meta["outputs"] = outputs;
    write_json_file(dir / "run_meta.json", meta);
    return meta;
}

}  // namespace wwm
