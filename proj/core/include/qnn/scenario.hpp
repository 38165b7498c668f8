#pragma once

#include <map>
#include <string>
#include <vector>

#include "qnn/dynamics.hpp"
#include "qnn/network.hpp"

namespace qnn {

/// A fully-specified run: topology, initial Bloch states, attached
/// reservoirs, schedule (collision or closed time grid), named fidelity
/// targets, tracked metrics and steady-detection parameters.
struct ScenarioConfig {
    enum class RunMode { closed, markov, non_markov };

    std::string name = "scenario";
    QnnTopology topology;
    std::vector<PureBlochState> initial_inputs;  // one per input node
    PureBlochState initial_output;
    std::vector<ReservoirSpec> reservoirs;

    RunMode run_mode = RunMode::markov;
    CollisionSchedule schedule;  // collision modes
    double t_max = 0.0;          // closed mode
    double dt = 0.0;

    std::map<std::string, TargetState> targets;
    std::vector<std::string> tracked;
    int window = 50;
    double tol = 1e-6;

    void validate() const;

    /// Initial product state (inputs in order, then the output node).
    DensityMatrix initial_state() const;
    /// Targets resolved to density matrices.
    std::map<std::string, DensityMatrix> target_densities() const;

    /// Content equality; the `name` identifier is not part of the content.
    bool operator==(const ScenarioConfig& other) const;
};

bool operator==(const PureBlochState&, const PureBlochState&);
bool operator==(const QnnTopology&, const QnnTopology&);
bool operator==(const ReservoirSpec&, const ReservoirSpec&);
bool operator==(const TargetState&, const TargetState&);
bool operator==(const CollisionSchedule&, const CollisionSchedule&);

/// Parses the line-oriented scenario format:
///   sections [topology] [state] [reservoir.<k>] [schedule] [target.<name>]
///   [observe]; `key = value` entries; `#` comments; whitespace around `=`
///   is ignored. States are written `bloch <theta> <phi>` (radians).
/// Syntax errors carry the line number, semantic errors the key path.
ScenarioConfig parse_scenario(const std::string& text,
                              const std::string& source = "scenario");

/// Canonical text form; parse_scenario(serialize_scenario(c)) == c.
std::string serialize_scenario(const ScenarioConfig& config);

/// Paper-figure presets. Valid names: fig1a, fig1c, fig2b, fig2e, fig2fg,
/// fig3b, fig3d, fig3e, fig4.
ScenarioConfig preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace qnn
