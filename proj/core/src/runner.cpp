#include "qnn/runner.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "qnn/csv.hpp"
#include "qnn/errors.hpp"
#include "qnn/svg.hpp"

namespace qnn {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::vector<double> closed_time_grid(double t_max, double dt) {
    std::vector<double> times;
    const int n = int(std::floor(t_max / dt + 1e-9));
    times.reserve(size_t(n) + 1);
    for (int k = 0; k <= n; ++k) times.push_back(k * dt);
    return times;
}

/// Writes `content` files transactionally: on failure, removes everything
/// written so far.
class OutputSet {
public:
    explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}

    void add(const std::string& filename, std::string content) {
        pending_.push_back({filename, std::move(content)});
    }

    std::vector<std::filesystem::path> commit() {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec)
            throw IoError("cannot create output directory '" + dir_.string() +
                          "': " + ec.message());
        std::vector<std::filesystem::path> written;
        try {
            for (const auto& [name, content] : pending_) {
                const auto path = dir_ / name;
                std::ofstream f(path, std::ios::binary);
                if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
                written.push_back(path);
                f << content;
                f.flush();
                if (!f) throw IoError("write failed for '" + path.string() + "'");
            }
        } catch (...) {
            for (const auto& p : written) {
                std::error_code rm;
                std::filesystem::remove(p, rm);
            }
            throw;
        }
        return written;
    }

private:
    std::filesystem::path dir_;
    std::vector<std::pair<std::string, std::string>> pending_;
};

std::string metric_filename(const std::string& metric) {
    std::string out;
    for (char c : metric) out += (std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
    return out;
}

std::string mode_name(ScenarioConfig::RunMode m) {
    switch (m) {
        case ScenarioConfig::RunMode::closed: return "closed";
        case ScenarioConfig::RunMode::markov: return "markov";
        case ScenarioConfig::RunMode::non_markov: return "non_markov";
    }
    return "?";
}

}  // namespace

MemoryRun run_scenario_in_memory(const ScenarioConfig& config) {
    config.validate();
    const auto targets = config.target_densities();
    const bool has_units =
        config.run_mode != ScenarioConfig::RunMode::closed && !config.reservoirs.empty();
    MetricPlan plan = MetricPlan::resolve(config.tracked, targets,
                                          config.topology.n_inputs, has_units);
    DensityMatrix rho0 = config.initial_state();

    TraceRecord trace({"placeholder"});
    SteadyReport steady;
    std::map<std::string, double> final_fids;

    if (config.run_mode == ScenarioConfig::RunMode::closed) {
        trace = evolve_closed(rho0, build_system_hamiltonian(config.topology),
                              closed_time_grid(config.t_max, config.dt),
                              config.topology, plan);
        steady = int(trace.size()) >= config.window
                     ? detect_steady_state(trace, config.window, config.tol)
                     : SteadyReport{false, std::nullopt, {}, config.window, config.tol};
        // Final output state from the last sample.
        const EigenDecomposition ed = herm_eig(build_system_hamiltonian(config.topology));
        const double t_end = trace.steps().back().time;
        Eigen::VectorXcd phases(ed.eigenvalues.size());
        for (Eigen::Index k = 0; k < ed.eigenvalues.size(); ++k)
            phases[k] = std::exp(Complex(0.0, -ed.eigenvalues[k] * t_end));
        ComplexMatrix u = ed.eigenvectors * phases.asDiagonal() * ed.eigenvectors.adjoint();
        ComplexMatrix m = u * rho0.matrix() * u.adjoint();
        DensityMatrix rho_end(rho0.n_sites(), (m + ComplexMatrix(m.adjoint())) / 2.0);
        DensityMatrix out = rho_end.reduce({config.topology.output_site()});
        for (const auto& [name, dm] : targets) final_fids[name] = fidelity(dm, out);
        return {std::move(trace), std::move(steady), std::move(final_fids)};
    }

    RunResult result =
        config.run_mode == ScenarioConfig::RunMode::markov
            ? run_markov(config.topology, config.reservoirs, config.schedule, rho0,
                         plan, config.window, config.tol)
            : run_non_markov(config.topology, config.reservoirs.front(), config.schedule,
                             rho0, plan, config.window, config.tol);
    for (const auto& [name, dm] : targets)
        final_fids[name] = fidelity(dm, result.final_output);
    return {std::move(result.trace), std::move(result.steady), std::move(final_fids)};
}

RunReport run_scenario(const ScenarioConfig& config,
                       const std::filesystem::path& out_dir,
                       const EmitOptions& emit) {
    const auto t0 = std::chrono::steady_clock::now();
    MemoryRun run = run_scenario_in_memory(config);

    OutputSet outputs(out_dir);
    RunReport report;
    report.scenario = config.name;
    report.steady = run.steady;
    report.final_fidelities = run.final_fidelities;

    if (emit.csv)
        outputs.add(config.name + "_trace.csv", format_csv(run.trace));
    if (emit.svg)
        for (const auto& metric : run.trace.labels())
            outputs.add(config.name + "_" + metric_filename(metric) + ".svg",
                        format_svg(run.trace, metric));

    std::ostringstream summary;
    summary << "scenario = " << config.name << "\n";
    summary << "mode = " << mode_name(config.run_mode) << "\n";
    summary << "steps = " << (run.trace.size() ? run.trace.size() - 1 : 0) << "\n";
    summary << "converged = " << (run.steady.converged ? "true" : "false") << "\n";
    if (run.steady.steady_step)
        summary << "steady_step = " << *run.steady.steady_step << "\n";
    for (const auto& [k, v] : run.steady.steady_values)
        summary << "steady." << k << " = " << fmt(v) << "\n";
    for (const auto& [k, v] : run.final_fidelities)
        summary << "final_fidelity." << k << " = " << fmt(v) << "\n";

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.wall_seconds = wall;
    summary << "wall_seconds = " << fmt(wall) << "\n";
    outputs.add(config.name + "_summary.txt", summary.str());

    report.files = outputs.commit();
    return report;
}

ScenarioConfig apply_parameter(const ScenarioConfig& config,
                               const std::string& parameter, double value) {
    ScenarioConfig out = config;
    auto fail = [&](const std::string& why) {
        throw ValidationError("sweep parameter '" + parameter + "': " + why);
    };
    auto index_after = [&](const std::string& prefix,
                           const std::string& suffix) -> int {
        const std::string middle = parameter.substr(
            prefix.size(), parameter.size() - prefix.size() - suffix.size());
        try {
            size_t used = 0;
            int k = std::stoi(middle, &used);
            if (used != middle.size() || k < 0) fail("bad index");
            return k;
        } catch (const std::exception&) {
            fail("bad index");
        }
        return -1;
    };

    if (parameter == "topology.omega") {
        out.topology.omega = value;
    } else if (parameter.rfind("topology.couplings.", 0) == 0) {
        int i = index_after("topology.couplings.", "");
        if (i >= int(out.topology.couplings.size())) fail("coupling index out of range");
        out.topology.couplings[size_t(i)] = value;
    } else if (parameter.rfind("reservoir.", 0) == 0) {
        auto dot = parameter.find('.', 10);
        if (dot == std::string::npos) fail("expected reservoir.<k>.<field>");
        int k = index_after("reservoir.", parameter.substr(dot));
        if (k >= int(out.reservoirs.size())) fail("reservoir index out of range");
        const std::string field = parameter.substr(dot + 1);
        if (field == "j_su") out.reservoirs[size_t(k)].j_su = value;
        else if (field == "theta") out.reservoirs[size_t(k)].unit_state.theta = value;
        else if (field == "phi") out.reservoirs[size_t(k)].unit_state.phi = value;
        else fail("unknown field '" + field + "'");
    } else if (parameter == "schedule.tau") {
        out.schedule.tau = value;
    } else if (parameter == "schedule.tau_su") {
        out.schedule.tau_su = value;
    } else {
        fail("unknown parameter path");
    }
    out.validate();
    return out;
}

RunReport run_sweep(const ScenarioConfig& config, const SweepSpec& sweep,
                    const std::filesystem::path& out_dir) {
    const auto t0 = std::chrono::steady_clock::now();
    config.validate();
    if (sweep.values.empty())
        throw ValidationError("sweep: values list is empty");
    for (double v : sweep.values)
        if (!std::isfinite(v)) throw ValidationError("sweep: non-finite value");

    std::vector<std::string> reduce = sweep.reduce.empty() ? config.tracked : sweep.reduce;
    for (const auto& r : reduce) {
        if (std::find(config.tracked.begin(), config.tracked.end(), r) ==
            config.tracked.end())
            throw ValidationError("sweep: reduce metric '" + r + "' is not tracked");
    }
    // Applying the path to the base config validates the path itself.
    apply_parameter(config, sweep.parameter, sweep.values.front());

    struct Row {
        double value;
        std::vector<double> metrics;
        std::string error;  // empty on success
        bool converged = false;
    };
    std::vector<Row> rows;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    int failures = 0;
    for (double v : sweep.values) {
        Row row{v, std::vector<double>(reduce.size(), nan), "", false};
        try {
            ScenarioConfig c = apply_parameter(config, sweep.parameter, v);
            MemoryRun run = run_scenario_in_memory(c);
            row.converged = run.steady.converged;
            if (run.steady.converged) {
                for (size_t i = 0; i < reduce.size(); ++i)
                    row.metrics[i] = run.steady.steady_values.at(reduce[i]);
            } else {
                // Not converged: report the final row of the trace.
                const auto& last = run.trace.steps().back();
                for (size_t i = 0; i < reduce.size(); ++i)
                    row.metrics[i] = last.values[size_t(run.trace.label_index(reduce[i]))];
            }
        } catch (const std::exception& e) {
            row.error = e.what();
            ++failures;
        }
        rows.push_back(std::move(row));
    }
    if (failures == int(rows.size()))
        throw NumericError("sweep: every value failed; first error: " + rows.front().error);

    std::ostringstream csv;
    csv << "value";
    for (const auto& r : reduce) csv << "," << r;
    csv << "\n";
    for (const auto& row : rows) {
        csv << fmt(row.value);
        for (double m : row.metrics) csv << "," << fmt(m);
        csv << "\n";
    }

    std::ostringstream summary;
    summary << "scenario = " << config.name << "\n";
    summary << "parameter = " << sweep.parameter << "\n";
    summary << "values = " << rows.size() << "\n";
    summary << "failures = " << failures << "\n";
    for (const auto& row : rows)
        if (!row.error.empty())
            summary << "error." << fmt(row.value) << " = " << row.error << "\n";

    // Endpoint-chord linearity diagnostics per collected metric.
    const Row& first = rows.front();
    const Row& last = rows.back();
    for (size_t i = 0; i < reduce.size(); ++i) {
        double max_dev = 0.0;
        bool valid = first.error.empty() && last.error.empty() &&
                     last.value != first.value;
        if (valid) {
            for (const auto& row : rows) {
                if (!row.error.empty()) continue;
                const double chord =
                    first.metrics[i] + (last.metrics[i] - first.metrics[i]) *
                                           (row.value - first.value) /
                                           (last.value - first.value);
                max_dev = std::max(max_dev, std::abs(row.metrics[i] - chord));
            }
            summary << "chord_deviation." << reduce[i] << " = " << fmt(max_dev) << "\n";
        }
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    summary << "wall_seconds = " << fmt(wall) << "\n";

    OutputSet outputs(out_dir);
    outputs.add(config.name + "_sweep.csv", csv.str());
    outputs.add(config.name + "_sweep_summary.txt", summary.str());

    RunReport report;
    report.scenario = config.name;
    report.wall_seconds = wall;
    report.files = outputs.commit();
    return report;
}

}  // namespace qnn
