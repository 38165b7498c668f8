#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "qnn/scenario.hpp"
#include "qnn/trace.hpp"

namespace qnn {

struct EmitOptions {
    bool csv = true;
    bool svg = false;
};

struct RunReport {
    std::string scenario;
    SteadyReport steady;
    std::map<std::string, double> final_fidelities;  // per named target
    double wall_seconds = 0.0;
    std::vector<std::filesystem::path> files;
};

/// Executes the configured engine, writes the trace CSV (and optionally one
/// SVG per tracked metric) plus a summary file into out_dir. On any I/O
/// failure every file written by this call is removed before the error is
/// rethrown. Non-convergence is reported in the summary, not an error.
RunReport run_scenario(const ScenarioConfig& config,
                       const std::filesystem::path& out_dir,
                       const EmitOptions& emit = {});

/// In-memory run (no files); returns the trace, steady report and final
/// fidelities.
struct MemoryRun {
    TraceRecord trace;
    SteadyReport steady;
    std::map<std::string, double> final_fidelities;
};
MemoryRun run_scenario_in_memory(const ScenarioConfig& config);

/// One-parameter sweep: numeric `parameter` paths
///   topology.omega | topology.couplings.<i> | reservoir.<k>.j_su |
///   reservoir.<k>.theta | reservoir.<k>.phi | schedule.tau | schedule.tau_su
struct SweepSpec {
    std::string parameter;
    std::vector<double> values;
    std::vector<std::string> reduce;  // steady metrics to collect (default: all tracked)
};

/// Runs the scenario once per sweep value (independent runs), writes an
/// aggregated CSV `value,<metric>,...` plus a summary with endpoint-chord
/// linearity diagnostics. Per-value failures are recorded per row (NaN);
/// the sweep fails only if every value fails.
RunReport run_sweep(const ScenarioConfig& config, const SweepSpec& sweep,
                    const std::filesystem::path& out_dir);

/// Applies a sweep parameter path to a copy of the config.
ScenarioConfig apply_parameter(const ScenarioConfig& config,
                               const std::string& parameter, double value);

}  // namespace qnn
