#pragma once
// JSON configuration and CSV output formats.

#include "wwm/diagnostics.hpp"
#include "wwm/run.hpp"
#include "wwm/sandbox.hpp"
#include "wwm/solver.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace wwm {

inline constexpr const char* artifact_version = "0.1.0";

inline constexpr const char* series_header =
    "t,energy,lambda,Y_at_lambda,z_wrap,degree,cone_energy_A,annulus_energy,flux_A,kinetic_cone_avg";
inline constexpr const char* snapshot_header = "r,Y,Y_t,alpha,alpha_t";
inline constexpr const char* trajectory_header = "t,r,theta_lifted,energy";

/// Shortest round-trip decimal form ("%.17g"; "nan", "inf", "-inf" for non-finite values).
std::string format_double(double v);
double parse_double(const std::string& s);

/// 64-bit FNV-1a hash, printed as 16 hex digits.
std::string fnv1a_hex(const std::string& data);

nlohmann::json to_json(const ManifoldConfig& m);
nlohmann::json to_json(const RunConfig& cfg);
/// Strict parsers: unknown keys and wrong types raise ConfigError; missing keys keep defaults.
ManifoldConfig manifold_config_from_json(const nlohmann::json& j);
RunConfig run_config_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::filesystem::path& p);
void write_json_file(const std::filesystem::path& p, const nlohmann::json& j);

/// Description of every series.csv column, echoed in run_meta.json.
nlohmann::json series_column_docs();

void write_series_csv(const std::filesystem::path& p, const std::vector<DiagnosticsRecord>& series);
/// Reads the columns of series.csv back; fields not stored there stay zero.
std::vector<DiagnosticsRecord> read_series_csv(const std::filesystem::path& p);

std::string snapshot_filename(double t);
void write_snapshot_csv(const std::filesystem::path& p, const RadialGrid& grid, const FieldState& s);
/// Reads a snapshot into a state with the given time; checks the radii against the grid.
FieldState read_snapshot_csv(const std::filesystem::path& p, const RadialGrid& grid, double t);

void write_trajectory_csv(const std::filesystem::path& p, const std::vector<TrajectoryPoint>& traj);

nlohmann::json to_json(const WindingReport& w);

/// Writes run_meta.json, series.csv, snapshots and winding_report.json under dir.
/// Returns the run_meta document.
nlohmann::json write_run_directory(const std::filesystem::path& dir, const RunConfig& cfg, const RunResult& result,
                                   const std::string& start_time, const std::string& end_time);

/// Current UTC time in ISO 8601.
std::string utc_now();

}  // namespace wwm
