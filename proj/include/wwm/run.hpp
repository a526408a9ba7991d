#pragma once
// Time integration of a RunConfig with diagnostics at every output time.

#include "wwm/diagnostics.hpp"
#include "wwm/solver.hpp"

#include <string>
#include <vector>

namespace wwm {

enum class RunStatus { completed, blowup, underresolved };
std::string to_string(RunStatus s);

struct RunResult {
    RunStatus status = RunStatus::completed;
    std::string message;
    InitialData initial;
    std::vector<DiagnosticsRecord> series;
    std::vector<FieldState> snapshots;
    std::size_t steps = 0;
    double dt_max = 0.0;
};

/// Integrates cfg from t = 0 to t_end. Output times are k * output_dt (and t_end); on each
/// interval the step is the largest uniform dt not exceeding cfl * dr. The flux integral and
/// the kinetic cone average are accumulated with the trapezoid rule at every step.
/// A BlowupDetected during stepping ends the run with status blowup and keeps all
/// diagnostics gathered so far; a scale below 4 dr ends it with status underresolved when
/// cfg.stop_on_underresolved is set. Throws ConfigError for invalid configurations.
RunResult run(const RunConfig& cfg);

}  // namespace wwm
