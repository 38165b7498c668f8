// qnnsim: collision-model simulator for a star-topology qubit network
// driven by pure-state information reservoirs.
//
// Exit codes: 0 success, 1 validation error, 2 engine/numeric error,
// 3 I/O error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qnn/errors.hpp"
#include "qnn/runner.hpp"
#include "qnn/scenario.hpp"

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw qnn::IoError("cannot read scenario file '" + path.string() + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    if (f.bad()) throw qnn::IoError("read failed for '" + path.string() + "'");
    return buf.str();
}

qnn::EmitOptions parse_emit(const std::string& emit) {
    qnn::EmitOptions opts{false, false};
    std::istringstream in(emit);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (tok == "csv") opts.csv = true;
        else if (tok == "svg") opts.svg = true;
        else if (!tok.empty())
            throw qnn::ValidationError("--emit: unknown format '" + tok +
                                       "' (expected csv and/or svg)");
    }
    if (!opts.csv && !opts.svg)
        throw qnn::ValidationError("--emit: at least one of csv,svg required");
    return opts;
}

std::vector<double> parse_values(const std::string& list) {
    std::vector<double> values;
    std::istringstream in(list);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (tok.empty()) continue;
        try {
            size_t used = 0;
            values.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw qnn::ValidationError("--values: '" + tok + "' is not a number");
        }
    }
    if (values.empty()) throw qnn::ValidationError("--values: empty list");
    return values;
}

void print_report(const qnn::RunReport& report) {
    std::cout << "scenario: " << report.scenario << "\n";
    if (report.steady.converged)
        std::cout << "steady at step " << *report.steady.steady_step << "\n";
    for (const auto& [k, v] : report.steady.steady_values)
        std::cout << "  steady " << k << " = " << v << "\n";
    for (const auto& [k, v] : report.final_fidelities)
        std::cout << "  final fidelity[" << k << "] = " << v << "\n";
    for (const auto& f : report.files) std::cout << "wrote " << f.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Star-topology qubit network simulator with collision-model reservoirs"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir = ".", emit = "csv";
    std::string preset_name, param, values_list, reduce_list;

    auto* run_cmd = app.add_subcommand("run", "Run a scenario file");
    run_cmd->add_option("--scenario", scenario_path, "Scenario file (.qnn)")->required();
    run_cmd->add_option("--out", out_dir, "Output directory")->required();
    run_cmd->add_option("--emit", emit, "Outputs to write: csv,svg (default csv)");

    auto* preset_cmd = app.add_subcommand("preset", "Run a built-in paper-figure preset");
    preset_cmd->add_option("--name", preset_name, "Preset name (see list-presets)")->required();
    preset_cmd->add_option("--out", out_dir, "Output directory")->required();
    preset_cmd->add_option("--emit", emit, "Outputs to write: csv,svg (default csv)");

    auto* sweep_cmd = app.add_subcommand("sweep", "Sweep one scenario parameter");
    sweep_cmd->add_option("--scenario", scenario_path, "Scenario file (.qnn)")->required();
    sweep_cmd->add_option("--param", param, "Parameter path, e.g. reservoir.1.j_su")->required();
    sweep_cmd->add_option("--values", values_list, "Comma-separated values")->required();
    sweep_cmd->add_option("--out", out_dir, "Output directory")->required();
    sweep_cmd->add_option("--reduce", reduce_list,
                          "Comma-separated steady metrics to collect (default: all tracked)");

    auto* list_cmd = app.add_subcommand("list-presets", "List preset names");

    auto* validate_cmd = app.add_subcommand("validate", "Parse and validate a scenario file");
    validate_cmd->add_option("--scenario", scenario_path, "Scenario file (.qnn)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 1;
    }

    try {
        if (run_cmd->parsed()) {
            const auto text = read_file(scenario_path);
            const auto name = std::filesystem::path(scenario_path).stem().string();
            qnn::ScenarioConfig config = qnn::parse_scenario(text, name);
            print_report(qnn::run_scenario(config, out_dir, parse_emit(emit)));
        } else if (preset_cmd->parsed()) {
            qnn::ScenarioConfig config = qnn::preset(preset_name);
            print_report(qnn::run_scenario(config, out_dir, parse_emit(emit)));
        } else if (sweep_cmd->parsed()) {
            const auto text = read_file(scenario_path);
            const auto name = std::filesystem::path(scenario_path).stem().string();
            qnn::ScenarioConfig config = qnn::parse_scenario(text, name);
            qnn::SweepSpec spec;
            spec.parameter = param;
            spec.values = parse_values(values_list);
            if (!reduce_list.empty()) {
                std::istringstream in(reduce_list);
                std::string tok;
                while (std::getline(in, tok, ','))
                    if (!tok.empty()) spec.reduce.push_back(tok);
            }
            print_report(qnn::run_sweep(config, spec, out_dir));
        } else if (list_cmd->parsed()) {
            for (const auto& n : qnn::preset_names()) std::cout << n << "\n";
        } else if (validate_cmd->parsed()) {
            const auto text = read_file(scenario_path);
            const auto name = std::filesystem::path(scenario_path).stem().string();
            qnn::parse_scenario(text, name);
            std::cout << "ok\n";
        }
    } catch (const qnn::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const qnn::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const qnn::NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
