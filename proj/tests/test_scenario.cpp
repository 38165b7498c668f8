#include <doctest.h>

#include <cmath>

#include "qnn/errors.hpp"
#include "qnn/scenario.hpp"

using namespace qnn;

namespace {

const char* kMinimal = R"(
# one node, one reservoir
[topology]
n_inputs = 1
couplings = 0.05

[reservoir.0]
node = 0
state = bloch 0 0
j_su = 0.05

[schedule]
mode = markov
tau = 2
n_collisions = 100
)";

}  // namespace

TEST_CASE("minimal scenario gets the documented defaults") {
    ScenarioConfig c = parse_scenario(kMinimal, "minimal");
    CHECK(c.topology.omega == 1.0);
    CHECK(c.window == 50);
    CHECK(c.tol == 1e-6);
    CHECK(c.schedule.style == CollisionSchedule::Style::simultaneous);
    // All states default to |+>.
    CHECK(c.initial_inputs.size() == 1);
    CHECK(c.initial_inputs[0].theta == doctest::Approx(M_PI / 2));
    CHECK(c.initial_output.theta == doctest::Approx(M_PI / 2));
    CHECK(c.tracked == std::vector<std::string>{"sigma_x_out", "sigma_y_out",
                                                "sigma_z_out", "p_up_out",
                                                "coherence_out"});
}

TEST_CASE("duplicate reservoir node is rejected") {
    std::string text = R"(
[topology]
n_inputs = 2
couplings = 0.05 0.05

[reservoir.0]
node = 0
state = bloch 0 0
j_su = 0.05

[reservoir.1]
node = 0
state = bloch 3.141592653589793 0
j_su = 0.05

[schedule]
mode = markov
tau = 2
n_collisions = 10
)";
    CHECK_THROWS_WITH_AS(parse_scenario(text, "dup"),
                         doctest::Contains("duplicate node"), ValidationError);
}

TEST_CASE("syntax errors carry the line number") {
    try {
        parse_scenario("[topology]\nn_inputs = 1\ncouplings 0.05\n", "bad.qnn");
        FAIL("expected a parse error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("bad.qnn:3") != std::string::npos);
    }
}

TEST_CASE("semantic errors carry the key path") {
    std::string text = R"(
[topology]
n_inputs = 1
couplings = 0.05
frobnicate = 7

[schedule]
mode = markov
tau = 2
n_collisions = 10
)";
    CHECK_THROWS_WITH_AS(parse_scenario(text, "x"),
                         doctest::Contains("topology.frobnicate"), ValidationError);

    std::string bad_value = R"(
[topology]
n_inputs = 1
couplings = fast

[schedule]
mode = markov
tau = 2
n_collisions = 10
)";
    CHECK_THROWS_WITH_AS(parse_scenario(bad_value, "x"),
                         doctest::Contains("topology.couplings"), ValidationError);
}

TEST_CASE("closed and collision fields are mutually exclusive") {
    std::string closed_extra = R"(
[topology]
n_inputs = 1
couplings = 0.05

[schedule]
mode = closed
t_max = 10
dt = 0.5
tau = 2
)";
    CHECK_THROWS_AS(parse_scenario(closed_extra, "x"), ValidationError);

    std::string markov_tmax = R"(
[topology]
n_inputs = 1
couplings = 0.05

[schedule]
mode = markov
tau = 2
n_collisions = 10
t_max = 5
)";
    CHECK_THROWS_AS(parse_scenario(markov_tmax, "x"), ValidationError);
}

TEST_CASE("unit metrics are rejected for closed runs") {
    std::string text = R"(
[topology]
n_inputs = 1
couplings = 0.05

[schedule]
mode = closed
t_max = 10
dt = 0.5

[observe]
tracked = entropy_unit
)";
    CHECK_THROWS_WITH_AS(parse_scenario(text, "x"),
                         doctest::Contains("entropy_unit"), ValidationError);
}

TEST_CASE("every preset round-trips through the text format") {
    for (const auto& name : preset_names()) {
        CAPTURE(name);
        ScenarioConfig original = preset(name);
        ScenarioConfig reparsed = parse_scenario(serialize_scenario(original), name);
        CHECK(reparsed == original);
    }
}

TEST_CASE("preset parameters match their figures") {
    ScenarioConfig f3b = preset("fig3b");
    REQUIRE(f3b.reservoirs.size() == 3);
    CHECK(f3b.reservoirs[0].unit_state.theta == 0.0);
    CHECK(f3b.reservoirs[1].unit_state.theta == 0.0);
    CHECK(f3b.reservoirs[2].unit_state.theta == doctest::Approx(M_PI));
    for (const auto& r : f3b.reservoirs) CHECK(r.j_su == doctest::Approx(0.05));

    ScenarioConfig f3e = preset("fig3e");
    bool has_tilted = false;
    for (const auto& r : f3e.reservoirs)
        if (std::abs(r.unit_state.theta - M_PI / 6) < 1e-12) has_tilted = true;
    CHECK(has_tilted);
    // begins with zero coherence
    CHECK(f3e.initial_output.theta == 0.0);

    ScenarioConfig f1a = preset("fig1a");
    CHECK(f1a.run_mode == ScenarioConfig::RunMode::closed);
    CHECK(f1a.topology.couplings == std::vector<double>{0.05, 0.05});
    CHECK(f1a.t_max == 300.0);

    ScenarioConfig f4 = preset("fig4");
    CHECK(f4.run_mode == ScenarioConfig::RunMode::non_markov);
    CHECK(*f4.schedule.j_uu == doctest::Approx(0.25));
    CHECK(*f4.schedule.tau_uu == doctest::Approx(M_PI));
}

TEST_CASE("unknown preset lists the valid names") {
    try {
        preset("nope");
        FAIL("expected an error");
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        for (const auto& name : preset_names())
            CHECK(msg.find(name) != std::string::npos);
        CHECK(preset_names().size() == 9);
    }
}

TEST_CASE("target sections parse mixtures and superpositions") {
    std::string text = R"(
[topology]
n_inputs = 1
couplings = 0.05

[reservoir.0]
node = 0
state = bloch 0 0
j_su = 0.05

[schedule]
mode = markov
tau = 2
n_collisions = 10

[target.plus]
kind = superposition
component = 0.70710678118654746 bloch 0 0
component = 0.70710678118654746 bloch 3.14159265358979312 0

[observe]
tracked = fidelity:plus
)";
    ScenarioConfig c = parse_scenario(text, "targets");
    REQUIRE(c.targets.count("plus") == 1);
    DensityMatrix plus = c.target_densities().at("plus");
    CHECK(std::abs(plus.matrix()(0, 1).real() - 0.5) < 1e-9);

    // Unknown target reference fails.
    std::string bad = text;
    bad.replace(bad.find("fidelity:plus"), 13, "fidelity:nope");
    CHECK_THROWS_WITH_AS(parse_scenario(bad, "x"), doctest::Contains("nope"),
                         ValidationError);
}
