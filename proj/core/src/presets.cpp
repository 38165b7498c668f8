#include <cmath>
#include <sstream>

#include "qnn/errors.hpp"
#include "qnn/scenario.hpp"

namespace qnn {

namespace {

const PureBlochState kUp{0.0, 0.0};
const PureBlochState kDown{M_PI, 0.0};
const PureBlochState kPlus{M_PI / 2.0, 0.0};
const PureBlochState kTilted{M_PI / 6.0, 0.0};

TargetState pure_target(const PureBlochState& s) {
    TargetState t;
    t.kind = TargetState::Kind::mixture;
    t.components = {{s, 1.0}};
    return t;
}

TargetState equal_mixture(const std::vector<PureBlochState>& states) {
    TargetState t;
    t.kind = TargetState::Kind::mixture;
    const double w = 1.0 / double(states.size());
    double acc = 0.0;
    for (size_t i = 0; i < states.size(); ++i) {
        // Make the weights sum to exactly 1.0 in double arithmetic.
        double wi = (i + 1 == states.size()) ? 1.0 - acc : w;
        acc += wi;
        t.components.push_back({states[i], wi});
    }
    return t;
}

ScenarioConfig closed_base(const std::string& name, const PureBlochState& in0,
                           const PureBlochState& in1) {
    ScenarioConfig c;
    c.name = name;
    c.topology = {2, 1.0, {0.05, 0.05}};
    c.initial_inputs = {in0, in1};
    c.initial_output = kPlus;
    c.run_mode = ScenarioConfig::RunMode::closed;
    c.t_max = 300.0;
    c.dt = 0.5;
    return c;
}

/// Exchange-calibrated schedule: full node-unit state exchange per collision
/// (tau_su = pi / (2 j_su)), then a system drift of tau = 2.
CollisionSchedule exchange_schedule(double j_su, int n_collisions) {
    CollisionSchedule s;
    s.mode = CollisionSchedule::Mode::markov;
    s.style = CollisionSchedule::Style::split;
    s.tau = 2.0;
    s.tau_su = M_PI / (2.0 * j_su);
    s.n_collisions = n_collisions;
    return s;
}

/// Control-sweep schedule: partial exchange of angle 0.7 rad at the reference
/// coupling, drift tau = 6; reproduces the near-linear coupling-ratio control.
CollisionSchedule control_schedule(double j_ref, int n_collisions) {
    CollisionSchedule s;
    s.mode = CollisionSchedule::Mode::markov;
    s.style = CollisionSchedule::Style::split;
    s.tau = 6.0;
    s.tau_su = 0.7 / j_ref;
    s.n_collisions = n_collisions;
    return s;
}

ScenarioConfig make_preset(const std::string& name) {
    if (name == "fig1a") {
        ScenarioConfig c = closed_base(name, kUp, kUp);
        c.targets = {{"up", pure_target(kUp)}};
        c.tracked = {"sigma_x_out", "sigma_y_out", "sigma_z_out",
                     "fidelity:up", "fidelity_node0:up", "fidelity_node1:up"};
        return c;
    }
    if (name == "fig1c") {
        ScenarioConfig c = closed_base(name, kUp, kDown);
        c.targets = {{"up", pure_target(kUp)},
                     {"down", pure_target(kDown)},
                     {"plus", pure_target(kPlus)}};
        c.tracked = {"sigma_x_out", "sigma_y_out", "sigma_z_out",
                     "fidelity:plus", "fidelity_node0:up", "fidelity_node1:down"};
        return c;
    }
    if (name == "fig2b") {
        ScenarioConfig c;
        c.name = name;
        c.topology = {1, 1.0, {0.05}};
        c.initial_inputs = {kPlus};
        c.initial_output = kPlus;
        c.reservoirs = {{0, kUp, 0.05}};
        c.run_mode = ScenarioConfig::RunMode::markov;
        c.schedule = exchange_schedule(0.05, 3500);
        c.targets = {{"up", pure_target(kUp)}};
        c.tracked = {"sigma_x_out", "sigma_y_out", "sigma_z_out", "p_up_out",
                     "coherence_out", "fidelity:up", "mutual_info_out_unit",
                     "entropy_unit", "energy_unit"};
        return c;
    }
    if (name == "fig2e" || name == "fig2fg") {
        ScenarioConfig c;
        c.name = name;
        c.topology = {2, 1.0, {0.06, 0.06}};
        c.initial_inputs = {kPlus, kPlus};
        c.initial_output = kPlus;
        c.reservoirs = {{0, kUp, 0.06}, {1, kDown, 0.06}};
        c.run_mode = ScenarioConfig::RunMode::markov;
        c.schedule = control_schedule(0.06, 2000);
        c.targets = {{"m", equal_mixture({kUp, kDown})}};
        c.tracked = {"p_up_out", "sigma_z_out", "coherence_out", "fidelity:m"};
        return c;
    }
    if (name == "fig3b" || name == "fig3d" || name == "fig3e") {
        ScenarioConfig c;
        c.name = name;
        c.topology = {3, 1.0, {0.05, 0.05, 0.05}};
        c.initial_inputs = {kPlus, kPlus, kPlus};
        c.initial_output = kPlus;
        std::vector<PureBlochState> units;
        if (name == "fig3b") units = {kUp, kUp, kDown};
        else if (name == "fig3d") units = {kDown, kDown, kUp};
        else units = {kUp, kTilted, kDown};
        if (name == "fig3e") {
            // Coherent-reservoir runs start from |up> so coherence starts at 0.
            c.initial_inputs = {kUp, kUp, kUp};
            c.initial_output = kUp;
        }
        for (int i = 0; i < 3; ++i) c.reservoirs.push_back({i, units[size_t(i)], 0.05});
        c.run_mode = ScenarioConfig::RunMode::markov;
        c.schedule = exchange_schedule(0.05, name == "fig3e" ? 2500 : 2000);
        c.targets = {{"m", equal_mixture(units)}};
        c.tracked = {"p_up_out", "sigma_z_out", "coherence_out", "fidelity:m"};
        return c;
    }
    if (name == "fig4") {
        ScenarioConfig c;
        c.name = name;
        c.topology = {1, 1.0, {0.5}};
        c.initial_inputs = {kPlus};
        c.initial_output = kPlus;
        c.reservoirs = {{0, kUp, 0.5}};
        c.run_mode = ScenarioConfig::RunMode::non_markov;
        c.schedule.mode = CollisionSchedule::Mode::non_markov;
        c.schedule.tau = 0.16;
        c.schedule.n_collisions = 1500;
        c.schedule.j_uu = 0.25;
        c.schedule.tau_uu = (M_PI / 4.0) / 0.25;
        c.targets = {{"up", pure_target(kUp)}};
        c.tracked = {"fidelity:up", "coherence_out", "mutual_info_out_unit",
                     "sigma_z_out"};
        return c;
    }
    std::ostringstream msg;
    msg << "unknown preset '" << name << "'; valid presets:";
    for (const auto& n : preset_names()) msg << " " << n;
    throw ValidationError(msg.str());
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"fig1a", "fig1c", "fig2b", "fig2e", "fig2fg",
            "fig3b", "fig3d", "fig3e", "fig4"};
}

ScenarioConfig preset(const std::string& name) {
    ScenarioConfig c = make_preset(name);
    c.validate();
    return c;
}

}  // namespace qnn
