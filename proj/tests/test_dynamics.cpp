#include <doctest.h>

#include <cmath>

#include "qnn/dynamics.hpp"
#include "qnn/errors.hpp"
#include "test_util.hpp"

using namespace qnn;

namespace {

const PureBlochState kUp{0.0, 0.0};
const PureBlochState kDown{M_PI, 0.0};
const PureBlochState kPlus{M_PI / 2.0, 0.0};

CollisionSchedule markov_schedule(double tau, int nc) {
    CollisionSchedule s;
    s.mode = CollisionSchedule::Mode::markov;
    s.tau = tau;
    s.n_collisions = nc;
    return s;
}

CollisionSchedule split_schedule(double tau_su, double tau, int nc) {
    CollisionSchedule s = markov_schedule(tau, nc);
    s.style = CollisionSchedule::Style::split;
    s.tau_su = tau_su;
    return s;
}

/// Literal contract path for one joint collision: compose with fresh units,
/// conjugate by the register propagator, trace the units out.
ComplexMatrix dense_joint_step(const DensityMatrix& rho, const QnnTopology& t,
                               const std::vector<ReservoirSpec>& specs, double tau) {
    ComplexMatrix full = rho.matrix();
    for (const auto& s : specs) full = kron(full, bloch_pure(s.unit_state).matrix());
    ComplexMatrix u = expm_unitary(build_collision_hamiltonian(t, specs), tau);
    full = u * full * u.adjoint();
    std::vector<int> keep;
    for (int k = 0; k < t.n_sites(); ++k) keep.push_back(k);
    return partial_trace(full, t.n_sites() + int(specs.size()), keep);
}

}  // namespace

TEST_CASE("schedule validation") {
    CollisionSchedule s = markov_schedule(1.0, 10);
    CHECK_NOTHROW(s.validate());

    s.tau = 0.0;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s.tau = 1.0;
    s.n_collisions = 0;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s.n_collisions = 5;

    s.j_uu = 0.1;  // markov forbids unit-unit parameters
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s.j_uu.reset();

    s.mode = CollisionSchedule::Mode::non_markov;
    CHECK_THROWS_AS(s.validate(), ValidationError);  // missing j_uu/tau_uu
    s.j_uu = 0.1;
    s.tau_uu = 1.0;
    CHECK_NOTHROW(s.validate());
    s.style = CollisionSchedule::Style::split;
    CHECK_THROWS_AS(s.validate(), ValidationError);

    CollisionSchedule sp = split_schedule(2.0, 1.0, 5);
    CHECK_NOTHROW(sp.validate());
    sp.tau_su.reset();
    CHECK_THROWS_AS(sp.validate(), ValidationError);
}

TEST_CASE("evolve_closed: t=0 row and basic invariants") {
    QnnTopology t{2, 1.0, {0.05, 0.05}};
    DensityMatrix rho0 =
        product_state({bloch_pure(kUp), bloch_pure(kUp), bloch_pure(kPlus)});
    ComplexMatrix h = build_system_hamiltonian(t);
    MetricPlan plan = MetricPlan::resolve(
        {"sigma_x_out", "sigma_y_out", "sigma_z_out"}, {}, 2, false);

    TraceRecord trace = evolve_closed(rho0, h, {0.0, 1.0, 2.5}, t, plan);
    REQUIRE(trace.size() == 3);
    // t = 0: the output starts in |+>.
    CHECK(trace.steps()[0].values[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(trace.steps()[0].values[2]) < 1e-12);

    CHECK_THROWS_AS(evolve_closed(rho0, h, {1.0, 2.0}, t, plan), ValidationError);
    CHECK_THROWS_AS(evolve_closed(rho0, h, {0.0, 2.0, 1.0}, t, plan), ValidationError);
}

TEST_CASE("closed evolution preserves spectrum and total excitation") {
    QnnTopology t{2, 1.0, {0.05, 0.03}};
    DensityMatrix rho0 = test::random_density(3);
    ComplexMatrix h = build_system_hamiltonian(t);
    auto spec0 = herm_eig(rho0.matrix()).eigenvalues;
    ComplexMatrix sz_tot = ComplexMatrix::Zero(8, 8);
    for (int k = 0; k < 3; ++k) sz_tot += embed(pauli_z(), k, 3);
    const double sz0 = (rho0.matrix() * sz_tot).trace().real();

    for (double time : {3.7, 42.0}) {
        ComplexMatrix u = expm_unitary(h, time);
        ComplexMatrix m = u * rho0.matrix() * u.adjoint();
        DensityMatrix rho(3, (m + ComplexMatrix(m.adjoint())) / 2.0);
        auto spec = herm_eig(rho.matrix()).eigenvalues;
        CHECK((spec - spec0).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(std::abs((rho.matrix() * sz_tot).trace().real() - sz0) < 1e-9);
    }
}

TEST_CASE("closed symmetric case: opposite inputs keep the output unpolarized") {
    QnnTopology t{2, 1.0, {0.05, 0.05}};
    DensityMatrix rho0 =
        product_state({bloch_pure(kUp), bloch_pure(kDown), bloch_pure(kPlus)});
    MetricPlan plan = MetricPlan::resolve({"sigma_z_out"}, {}, 2, false);
    std::vector<double> times;
    for (int k = 0; k <= 100; ++k) times.push_back(k * 0.5);
    TraceRecord trace = evolve_closed(rho0, build_system_hamiltonian(t), times, t, plan);
    for (const auto& s : trace.steps()) CHECK(std::abs(s.values[0]) < 1e-8);
}

TEST_CASE("markov step: eigenstate fixed point and trace preservation") {
    QnnTopology t{2, 1.0, {0.05, 0.05}};
    std::vector<ReservoirSpec> specs{{0, kUp, 0.05}, {1, kUp, 0.05}};
    DensityMatrix all_up =
        product_state({bloch_pure(kUp), bloch_pure(kUp), bloch_pure(kUp)});
    DensityMatrix next = markov_collision_step(all_up, t, specs, 6.0);
    CHECK(max_abs(next.matrix() - all_up.matrix()) < 1e-12);

    DensityMatrix rnd = test::random_density(3);
    DensityMatrix stepped = markov_collision_step(rnd, t, specs, 2.5);
    CHECK(std::abs(stepped.matrix().trace().real() - 1.0) < 1e-12);
}

TEST_CASE("markov step equals the literal dense contract path") {
    QnnTopology t{2, 1.0, {0.04, 0.07}};
    std::vector<ReservoirSpec> specs{{0, kUp, 0.06}, {1, {M_PI / 3, 1.1}, 0.03}};
    DensityMatrix rho = test::random_density(3);
    const double tau = 1.7;
    DensityMatrix kraus_path = markov_collision_step(rho, t, specs, tau);
    ComplexMatrix dense = dense_joint_step(rho, t, specs, tau);
    CHECK(max_abs(kraus_path.matrix() - dense) < 1e-12);
}

TEST_CASE("split step equals exchange-then-drift dense path") {
    QnnTopology t{1, 1.0, {0.05}};
    std::vector<ReservoirSpec> specs{{0, kDown, 0.05}};
    DensityMatrix rho = test::random_density(2);
    const double tau_su = M_PI / (2 * 0.05), tau = 2.0;

    DensityMatrix got = split_collision_step(rho, t, specs, tau_su, tau);

    ComplexMatrix full = kron(rho.matrix(), bloch_pure(kDown).matrix());
    ComplexMatrix ux = expm_unitary(build_exchange_hamiltonian(t, specs), tau_su);
    full = ux * full * ux.adjoint();
    ComplexMatrix reduced = partial_trace(full, 3, {0, 1});
    ComplexMatrix ud = expm_unitary(build_system_hamiltonian(t), tau);
    reduced = ud * reduced * ud.adjoint();
    CHECK(max_abs(got.matrix() - reduced) < 1e-12);
}

TEST_CASE("collision map is linear") {
    QnnTopology t{1, 1.0, {0.05}};
    std::vector<ReservoirSpec> specs{{0, kUp, 0.05}};
    DensityMatrix a = test::random_density(2);
    DensityMatrix b = test::random_density(2);
    const double alpha = 0.3, tau = 4.0;
    DensityMatrix mix(2, alpha * a.matrix() + (1 - alpha) * b.matrix());
    ComplexMatrix lhs = markov_collision_step(mix, t, specs, tau).matrix();
    ComplexMatrix rhs = alpha * markov_collision_step(a, t, specs, tau).matrix() +
                        (1 - alpha) * markov_collision_step(b, t, specs, tau).matrix();
    CHECK(max_abs(lhs - rhs) < 1e-10);
}

TEST_CASE("iterated joint step drives the output to the reservoir state") {
    // Single input, |up> reservoir, J = J_su = 0.05, tau = 0.1*pi/J.
    QnnTopology t{1, 1.0, {0.05}};
    std::vector<ReservoirSpec> specs{{0, kUp, 0.05}};
    const double tau = 0.1 * M_PI / 0.05;
    CollisionSchedule s = markov_schedule(tau, 1);
    CollisionKernel kernel(t, specs, s);

    DensityMatrix rho = product_state({bloch_pure(kPlus), bloch_pure(kPlus)});
    DensityMatrix up = bloch_pure(kUp);
    double prev = 0.0;
    int first_reaching = -1;
    for (int k = 1; k <= 5000; ++k) {
        rho = kernel.apply(rho);
        double f = fidelity(up, rho.reduce({1}));
        CHECK(f >= prev - 1e-9);  // monotone toward 1
        prev = f;
        if (first_reaching < 0 && f >= 0.999) {
            first_reaching = k;
            break;
        }
    }
    CHECK(first_reaching > 0);
    CHECK(first_reaching <= 5000);
}

TEST_CASE("unit_post_state: fixed point and bounds") {
    QnnTopology t{1, 1.0, {0.05}};
    ReservoirSpec spec{0, kUp, 0.05};
    DensityMatrix all_up = product_state({bloch_pure(kUp), bloch_pure(kUp)});
    auto [unit, joint] = unit_post_state(all_up, t, spec, 3.0);
    CHECK(max_abs(unit.matrix() - bloch_pure(kUp).matrix()) < 1e-12);

    DensityMatrix rnd = test::random_density(2);
    auto [unit2, joint2] = unit_post_state(rnd, t, spec, 3.0);
    double s = von_neumann_entropy(unit2);
    CHECK(s >= 0.0);
    CHECK(s <= std::log(2.0) + 1e-12);
    CHECK(joint2.n_sites() == 2);
}

TEST_CASE("unit energy saturates while entropy stays small") {
    // Joint-step scenario; |up> reservoir writes a full quantum of energy
    // into each unit while the late-time units stay nearly pure.
    QnnTopology t{1, 1.0, {0.05}};
    ReservoirSpec spec{0, kUp, 0.05};
    const double tau = 0.1 * M_PI / 0.05;
    CollisionKernel kernel(t, {spec}, markov_schedule(tau, 1));

    DensityMatrix rho = product_state({bloch_pure(kPlus), bloch_pure(kPlus)});
    std::vector<double> energy, entropy;
    for (int k = 1; k <= 400; ++k) {
        auto [unit, joint] = unit_post_state(rho, t, spec, tau);
        energy.push_back(internal_energy(unit, 0.5 * pauli_z()));
        entropy.push_back(von_neumann_entropy(unit));
        rho = kernel.apply(rho);
    }
    // E_u saturates: relative change < 1% over the final window.
    const double e_end = energy.back();
    for (size_t k = energy.size() - 50; k < energy.size(); ++k)
        CHECK(std::abs(energy[k] - e_end) < 0.01 * std::abs(e_end));
    // S_u is small and nonzero; per-collision |dE|/|dS| trends below 0.1.
    CHECK(entropy.back() > 0.0);
    CHECK(entropy.back() < 0.05);
    for (size_t k = 200; k < energy.size(); ++k) {
        const double de = std::abs(energy[k] - energy[k - 1]);
        const double ds = std::abs(entropy[k] - entropy[k - 1]);
        if (ds > 1e-300) CHECK(de / ds < 0.1);
    }
}

TEST_CASE("run_markov records step 0 and times step*tau") {
    QnnTopology t{1, 1.0, {0.05}};
    std::vector<ReservoirSpec> specs{{0, kUp, 0.05}};
    MetricPlan plan = MetricPlan::resolve({"sigma_z_out", "p_up_out"}, {}, 1, true);
    DensityMatrix rho0 = product_state({bloch_pure(kPlus), bloch_pure(kPlus)});
    RunResult r = run_markov(t, specs, split_schedule(10 * M_PI, 2.0, 120), rho0,
                             plan, 50, 1e-6);
    REQUIRE(r.trace.size() == 121);
    CHECK(r.trace.steps()[0].index == 0);
    CHECK(r.trace.steps()[0].time == 0.0);
    CHECK(r.trace.steps()[0].values[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.trace.steps()[5].time == doctest::Approx(5 * 2.0));
}

TEST_CASE("einselection: pole reservoirs leave no steady coherence") {
    QnnTopology t{2, 1.0, {0.05, 0.05}};
    std::vector<ReservoirSpec> specs{{0, kUp, 0.05}, {1, kDown, 0.05}};
    MetricPlan plan =
        MetricPlan::resolve({"coherence_out", "p_up_out"}, {}, 2, true);
    DensityMatrix rho0 =
        product_state({bloch_pure(kPlus), bloch_pure(kPlus), bloch_pure(kPlus)});
    RunResult r = run_markov(t, specs, split_schedule(M_PI / (2 * 0.05), 2.0, 1200),
                             rho0, plan, 50, 1e-9);
    REQUIRE(r.steady.converged);
    CHECK(r.steady.steady_values.at("coherence_out") < 1e-6);
    CHECK(r.steady.steady_values.at("p_up_out") == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("non-markov with j_uu = 0 reproduces the markov trace") {
    QnnTopology t{1, 1.0, {0.5}};
    ReservoirSpec spec{0, kUp, 0.5};
    MetricPlan plan = MetricPlan::resolve(
        {"sigma_z_out", "coherence_out", "mutual_info_out_unit"}, {}, 1, true);
    DensityMatrix rho0 = product_state({bloch_pure(kPlus), bloch_pure(kPlus)});

    CollisionSchedule nm;
    nm.mode = CollisionSchedule::Mode::non_markov;
    nm.tau = 0.16;
    nm.n_collisions = 150;
    nm.j_uu = 0.0;
    nm.tau_uu = M_PI;
    RunResult a = run_non_markov(t, spec, nm, rho0, plan, 50, 1e-6);

    RunResult b = run_markov(t, {spec}, markov_schedule(0.16, 150), rho0, plan, 50, 1e-6);

    REQUIRE(a.trace.size() == b.trace.size());
    for (size_t i = 0; i < a.trace.size(); ++i)
        for (size_t j = 0; j < plan.labels().size(); ++j)
            CHECK(std::abs(a.trace.steps()[i].values[j] -
                           b.trace.steps()[i].values[j]) < 1e-10);
}

TEST_CASE("run_non_markov validates its preconditions") {
    QnnTopology t2{2, 1.0, {0.5, 0.5}};
    ReservoirSpec spec{0, kUp, 0.5};
    MetricPlan plan = MetricPlan::resolve({"sigma_z_out"}, {}, 2, true);
    DensityMatrix rho0 = product_state(
        {bloch_pure(kPlus), bloch_pure(kPlus), bloch_pure(kPlus)});
    CollisionSchedule nm;
    nm.mode = CollisionSchedule::Mode::non_markov;
    nm.tau = 0.16;
    nm.n_collisions = 5;
    nm.j_uu = 0.25;
    nm.tau_uu = M_PI;
    CHECK_THROWS_AS(run_non_markov(t2, spec, nm, rho0, plan, 50, 1e-6),
                    ValidationError);

    QnnTopology t1{1, 1.0, {0.5}};
    DensityMatrix rho1 = product_state({bloch_pure(kPlus), bloch_pure(kPlus)});
    MetricPlan plan1 = MetricPlan::resolve({"sigma_z_out"}, {}, 1, true);
    CHECK_THROWS_AS(
        run_non_markov(t1, spec, markov_schedule(0.16, 5), rho1, plan1, 50, 1e-6),
        ValidationError);
}

TEST_CASE("detect_steady_state: constant, oscillation, decay oracle") {
    TraceRecord constant({"v"});
    for (int k = 0; k < 30; ++k) constant.append(k, k * 1.0, {0.42});
    SteadyReport r = detect_steady_state(constant, 10, 1e-6);
    CHECK(r.converged);
    CHECK(*r.steady_step == 9);  // first eligible window end
    CHECK(r.steady_values.at("v") == doctest::Approx(0.42));

    TraceRecord wobble({"v"});
    for (int k = 0; k < 60; ++k) wobble.append(k, k * 1.0, {(k % 2) ? 0.1 : -0.1});
    CHECK_FALSE(detect_steady_state(wobble, 10, 1e-3).converged);

    TraceRecord decay({"v"});
    const int n = 2000, window = 50;
    const double tol = 1e-6;
    std::vector<double> values;
    for (int k = 0; k < n; ++k) {
        values.push_back(std::exp(-k / 100.0));
        decay.append(k, k * 1.0, {values.back()});
    }
    SteadyReport got = detect_steady_state(decay, window, tol);
    // Brute-force scan of the definition.
    int expect = -1;
    for (int end = window - 1; end < n && expect < 0; ++end) {
        double lo = values[size_t(end)], hi = lo;
        for (int k = end - window + 1; k <= end; ++k) {
            lo = std::min(lo, values[size_t(k)]);
            hi = std::max(hi, values[size_t(k)]);
        }
        if (hi - lo <= tol) expect = end;
    }
    REQUIRE(got.converged);
    CHECK(*got.steady_step == expect);

    TraceRecord tiny({"v"});
    tiny.append(0, 0.0, {1.0});
    CHECK_THROWS_AS(detect_steady_state(tiny, 10, 1e-6), ValidationError);
    CHECK_THROWS_AS(detect_steady_state(constant, 1, 1e-6), ValidationError);
}

TEST_CASE("choi: identity channel at tau = 0") {
    QnnTopology t{1, 1.0, {0.05}};
    std::vector<ReservoirSpec> specs{{0, kUp, 0.05}};
    ComplexMatrix choi = collision_channel_choi(t, specs, 0.0);
    const Eigen::Index d = 4;
    REQUIRE(choi.rows() == d * d);
    auto ed = herm_eig(choi);
    CHECK(ed.eigenvalues[d * d - 1] == doctest::Approx(double(d)).epsilon(1e-10));
    for (Eigen::Index k = 0; k < d * d - 1; ++k)
        CHECK(std::abs(ed.eigenvalues[k]) < 1e-10);
}

TEST_CASE("choi: CPTP for joint and split styles") {
    QnnTopology t{2, 1.0, {0.05, 0.06}};
    std::vector<ReservoirSpec> specs{{0, kUp, 0.05}, {1, kDown, 0.03}};
    const Eigen::Index d = 8;

    auto check_cptp = [&](const ComplexMatrix& choi) {
        REQUIRE(choi.rows() == d * d);
        CHECK(is_hermitian(choi, 1e-9));
        auto ed = herm_eig(choi);
        CHECK(ed.eigenvalues.minCoeff() > -1e-9);
        // Partial trace over the output (second) factor: sum of diagonal blocks.
        ComplexMatrix tp = ComplexMatrix::Zero(d, d);
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j)
                tp(i, j) = choi.block(i * d, j * d, d, d).trace();
        CHECK(max_abs(tp - identity(d)) < 1e-9);
    };

    check_cptp(collision_channel_choi(t, specs, 3.3));
    CollisionSchedule split = split_schedule(M_PI / (2 * 0.05), 2.0, 1);
    check_cptp(collision_channel_choi(t, specs, split));
}

TEST_CASE("choi contraction reproduces the step") {
    QnnTopology t{1, 1.0, {0.05}};
    std::vector<ReservoirSpec> specs{{0, {M_PI / 5, 0.3}, 0.07}};
    const double tau = 2.1;
    ComplexMatrix choi = collision_channel_choi(t, specs, tau);
    DensityMatrix rho = test::random_density(2);
    const Eigen::Index d = 4;
    ComplexMatrix via_choi = ComplexMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            via_choi += rho.matrix()(i, j) * choi.block(i * d, j * d, d, d);
    ComplexMatrix direct = markov_collision_step(rho, t, specs, tau).matrix();
    CHECK(max_abs(via_choi - direct) < 1e-9);
}

TEST_CASE("single-node mutual information decays monotonically after its peak") {
    QnnTopology t{1, 1.0, {0.05}};
    ReservoirSpec spec{0, kUp, 0.05};
    MetricPlan plan = MetricPlan::resolve({"mutual_info_out_unit"}, {}, 1, true);
    DensityMatrix rho0 = product_state({bloch_pure(kPlus), bloch_pure(kPlus)});
    RunResult r = run_markov(t, {spec}, split_schedule(M_PI / (2 * 0.05), 2.0, 400),
                             rho0, plan, 50, 1e-6);
    auto mi = r.trace.series("mutual_info_out_unit");
    size_t peak = 0;
    for (size_t k = 0; k < mi.size(); ++k)
        if (mi[k] > mi[peak]) peak = k;
    for (size_t k = peak; k + 1 < mi.size(); ++k)
        CHECK(mi[k + 1] <= mi[k] + 1e-6);
}
