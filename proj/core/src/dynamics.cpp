#include "qnn/dynamics.hpp"

#include <cmath>
#include <string>

#include "qnn/errors.hpp"

namespace qnn {

void CollisionSchedule::validate() const {
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw ValidationError("schedule: tau must be positive");
    if (n_collisions < 1)
        throw ValidationError("schedule: n_collisions must be >= 1");
    if (mode == Mode::non_markov) {
        if (!j_uu || !tau_uu)
            throw ValidationError("schedule: non_markov requires j_uu and tau_uu");
        if (!(*tau_uu > 0.0))
            throw ValidationError("schedule: tau_uu must be positive");
        if (style == Style::split)
            throw ValidationError("schedule: non_markov collisions use the joint propagator; split style not supported");
    } else {
        if (j_uu || tau_uu)
            throw ValidationError("schedule: markov mode forbids j_uu/tau_uu");
    }
    if (style == Style::split) {
        if (!tau_su || !(*tau_su > 0.0))
            throw ValidationError("schedule: split style requires tau_su > 0");
    } else if (tau_su) {
        throw ValidationError("schedule: tau_su only applies to the split style");
    }
}

namespace {

/// Joint state vector of the fresh units, in spec order.
Eigen::VectorXcd fresh_units_vector(const std::vector<ReservoirSpec>& specs) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(1);
    for (const auto& s : specs) {
        Eigen::Vector2cd u = bloch_vector(s.unit_state);
        Eigen::VectorXcd next(v.size() * 2);
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            next[2 * i] = v[i] * u[0];
            next[2 * i + 1] = v[i] * u[1];
        }
        v = std::move(next);
    }
    return v;
}

ComplexMatrix fresh_units_density(const std::vector<ReservoirSpec>& specs) {
    Eigen::VectorXcd v = fresh_units_vector(specs);
    return v * v.adjoint();
}

}  // namespace

CollisionKernel::CollisionKernel(const QnnTopology& t,
                                 const std::vector<ReservoirSpec>& specs,
                                 const CollisionSchedule& schedule) {
    t.validate();
    n_sys_sites_ = t.n_sites();
    output_site_ = t.output_site();
    d_sys_ = Eigen::Index(1) << n_sys_sites_;
    d_units_ = Eigen::Index(1) << specs.size();
    has_units_ = !specs.empty();

    ComplexMatrix collision_u;
    ComplexMatrix drift;  // empty for the simultaneous style
    if (schedule.style == CollisionSchedule::Style::simultaneous) {
        collision_u = expm_unitary(build_collision_hamiltonian(t, specs), schedule.tau);
    } else {
        collision_u = expm_unitary(build_exchange_hamiltonian(t, specs),
                                   schedule.tau_su.value());
        drift = expm_unitary(build_system_hamiltonian(t), schedule.tau);
    }

    // W = U_coll (I_sys ⊗ |units>): columns indexed by the system basis,
    // rows by (system', unit'). Kraus operators are its unit-index slices.
    Eigen::VectorXcd uvec = fresh_units_vector(specs);
    ComplexMatrix w(d_sys_ * d_units_, d_sys_);
    for (Eigen::Index col = 0; col < d_sys_; ++col) {
        Eigen::VectorXcd in = Eigen::VectorXcd::Zero(d_sys_ * d_units_);
        in.segment(col * d_units_, d_units_) = uvec;
        w.col(col) = collision_u * in;
    }
    collision_embed_ = w;

    kraus_.reserve(size_t(d_units_));
    for (Eigen::Index j = 0; j < d_units_; ++j) {
        ComplexMatrix k(d_sys_, d_sys_);
        for (Eigen::Index r = 0; r < d_sys_; ++r) k.row(r) = w.row(r * d_units_ + j);
        if (drift.size() > 0) k = drift * k;
        kraus_.push_back(std::move(k));
    }
}

ComplexMatrix CollisionKernel::apply_raw(const ComplexMatrix& rho_sys) const {
    if (rho_sys.rows() != d_sys_ || rho_sys.cols() != d_sys_)
        throw ValidationError("collision step: state dimension mismatch");
    ComplexMatrix out = ComplexMatrix::Zero(d_sys_, d_sys_);
    for (const auto& k : kraus_) out += k * rho_sys * k.adjoint();
    return out;
}

DensityMatrix CollisionKernel::apply(const DensityMatrix& rho_sys) const {
    ComplexMatrix out = apply_raw(rho_sys.matrix());
    // Symmetrize round-off before validation; drift beyond tolerance still throws.
    out = (out + ComplexMatrix(out.adjoint())) / 2.0;
    return DensityMatrix(n_sys_sites_, std::move(out));
}

CollisionKernel::Views CollisionKernel::views_after_collision(
    const DensityMatrix& rho_sys) const {
    if (!has_units_)
        throw ValidationError("collision views: no reservoir attached");
    // Full register state after the collision phase: W rho W^dag.
    ComplexMatrix full = collision_embed_ * rho_sys.matrix() * collision_embed_.adjoint();
    full = (full + ComplexMatrix(full.adjoint())) / 2.0;
    const int n_total = n_sys_sites_ + int(std::log2(double(d_units_)) + 0.5);
    const int first_unit = n_sys_sites_;
    ComplexMatrix unit = partial_trace(full, n_total, {first_unit});
    ComplexMatrix joint = partial_trace(full, n_total, {output_site_, first_unit});
    return {DensityMatrix(1, std::move(unit)), DensityMatrix(2, std::move(joint))};
}

TraceRecord evolve_closed(const DensityMatrix& rho0, const ComplexMatrix& h,
                          const std::vector<double>& times, const QnnTopology& t,
                          const MetricPlan& plan) {
    if (h.rows() != rho0.dim())
        throw ValidationError("evolve_closed: Hamiltonian/state dimension mismatch");
    if (rho0.n_sites() != t.n_sites())
        throw ValidationError("evolve_closed: state does not span the topology register");
    if (times.empty() || times.front() != 0.0)
        throw ValidationError("evolve_closed: time grid must start at 0");
    for (size_t i = 1; i < times.size(); ++i)
        if (times[i] <= times[i - 1])
            throw ValidationError("evolve_closed: time grid must ascend");
    if (plan.needs_unit())
        throw ValidationError("evolve_closed: unit metrics not available in closed runs");

    const EigenDecomposition ed = herm_eig(h);
    TraceRecord trace(plan.labels());
    int index = 0;
    for (double time : times) {
        Eigen::VectorXcd phases(ed.eigenvalues.size());
        for (Eigen::Index k = 0; k < ed.eigenvalues.size(); ++k)
            phases[k] = std::exp(Complex(0.0, -ed.eigenvalues[k] * time));
        ComplexMatrix u = ed.eigenvectors * phases.asDiagonal() * ed.eigenvectors.adjoint();
        ComplexMatrix m = u * rho0.matrix() * u.adjoint();
        m = (m + ComplexMatrix(m.adjoint())) / 2.0;
        DensityMatrix rho(rho0.n_sites(), std::move(m));

        StepView view{rho.reduce({t.output_site()}), {}, std::nullopt, std::nullopt,
                      t.omega};
        if (plan.needs_nodes())
            for (int i = 0; i < t.n_inputs; ++i) view.nodes.push_back(rho.reduce({i}));
        trace.append(index++, time, plan.evaluate(view));
    }
    return trace;
}

DensityMatrix markov_collision_step(const DensityMatrix& rho_sys,
                                    const QnnTopology& t,
                                    const std::vector<ReservoirSpec>& specs,
                                    double tau) {
    CollisionSchedule s;
    s.mode = CollisionSchedule::Mode::markov;
    s.style = CollisionSchedule::Style::simultaneous;
    s.tau = tau;
    s.validate();
    return CollisionKernel(t, specs, s).apply(rho_sys);
}

DensityMatrix split_collision_step(const DensityMatrix& rho_sys,
                                   const QnnTopology& t,
                                   const std::vector<ReservoirSpec>& specs,
                                   double tau_su, double tau) {
    CollisionSchedule s;
    s.mode = CollisionSchedule::Mode::markov;
    s.style = CollisionSchedule::Style::split;
    s.tau = tau;
    s.tau_su = tau_su;
    s.validate();
    return CollisionKernel(t, specs, s).apply(rho_sys);
}

namespace {

StepView make_markov_view(const DensityMatrix& rho, const QnnTopology& t,
                          const MetricPlan& plan, const CollisionKernel* kernel,
                          const DensityMatrix* pre_collision_state) {
    StepView view{rho.reduce({t.output_site()}), {}, std::nullopt, std::nullopt,
                  t.omega};
    if (plan.needs_nodes())
        for (int i = 0; i < t.n_inputs; ++i) view.nodes.push_back(rho.reduce({i}));
    if (plan.needs_unit()) {
        // Unit views are taken right after the collision phase acting on the
        // pre-collision system state.
        CollisionKernel::Views v = kernel->views_after_collision(*pre_collision_state);
        view.unit = std::move(v.unit);
        view.out_unit = std::move(v.out_unit);
    }
    return view;
}

}  // namespace

RunResult run_markov(const QnnTopology& t, const std::vector<ReservoirSpec>& specs,
                     const CollisionSchedule& schedule, const DensityMatrix& rho0,
                     const MetricPlan& plan, int window, double tol) {
    schedule.validate();
    if (schedule.mode != CollisionSchedule::Mode::markov)
        throw ValidationError("run_markov: schedule mode is not markov");
    if (rho0.n_sites() != t.n_sites())
        throw ValidationError("run_markov: state does not span the topology register");
    if (plan.needs_unit() && specs.empty())
        throw ValidationError("run_markov: unit metrics tracked but no reservoir attached");

    CollisionKernel kernel(t, specs, schedule);
    TraceRecord trace(plan.labels());
    DensityMatrix rho = rho0;

    // Step 0: initial state; unit views describe a fresh, un-collided unit.
    if (plan.needs_unit()) {
        ComplexMatrix fresh = fresh_units_density(specs);
        StepView view{rho.reduce({t.output_site()}), {}, std::nullopt, std::nullopt, t.omega};
        if (plan.needs_nodes())
            for (int i = 0; i < t.n_inputs; ++i) view.nodes.push_back(rho.reduce({i}));
        DensityMatrix unit(1, partial_trace(fresh, int(specs.size()),
                                            std::vector<int>{0}));
        view.unit = unit;
        view.out_unit = product_state({view.output, unit});
        trace.append(0, 0.0, plan.evaluate(view));
    } else {
        trace.append(0, 0.0, plan.evaluate(make_markov_view(rho, t, plan, &kernel, &rho)));
    }

    for (int step = 1; step <= schedule.n_collisions; ++step) {
        DensityMatrix pre = rho;
        rho = kernel.apply(rho);
        trace.append(step, step * schedule.tau,
                     plan.evaluate(make_markov_view(rho, t, plan, &kernel, &pre)));
    }

    SteadyReport steady = detect_steady_state(trace, window, tol);
    return {std::move(trace), std::move(steady), rho.reduce({t.output_site()})};
}

RunResult run_non_markov(const QnnTopology& t, const ReservoirSpec& spec,
                         const CollisionSchedule& schedule, const DensityMatrix& rho0,
                         const MetricPlan& plan, int window, double tol) {
    schedule.validate();
    if (schedule.mode != CollisionSchedule::Mode::non_markov)
        throw ValidationError("run_non_markov: schedule mode is not non_markov");
    if (t.n_inputs != 1)
        throw ValidationError("run_non_markov: exactly one input node is supported");
    if (rho0.n_sites() != t.n_sites())
        throw ValidationError("run_non_markov: state does not span the topology register");

    // Register: input(0), output(1), current unit(2), forthcoming unit(3).
    const int n_sys = t.n_sites();
    const int site_u_cur = n_sys;
    const int site_u_next = n_sys + 1;
    const int n_total = n_sys + 2;

    const ComplexMatrix u_su =
        expm_unitary(build_collision_hamiltonian(t, {spec}), schedule.tau);
    const ComplexMatrix u_coll = kron(u_su, identity(2));
    const ComplexMatrix u_uu = kron(
        identity(Eigen::Index(1) << n_sys),
        expm_unitary(build_unit_unit_hamiltonian(schedule.j_uu.value(), t.omega),
                     schedule.tau_uu.value()));

    const ComplexMatrix unit_dm = bloch_pure(spec.unit_state).matrix();

    ComplexMatrix reg = kron(kron(rho0.matrix(), unit_dm), unit_dm);
    TraceRecord trace(plan.labels());

    auto record = [&](int step, const ComplexMatrix& m) {
        DensityMatrix full(n_total, (m + ComplexMatrix(m.adjoint())) / 2.0);
        StepView view{full.reduce({t.output_site()}), {}, std::nullopt, std::nullopt,
                      t.omega};
        if (plan.needs_nodes())
            for (int i = 0; i < t.n_inputs; ++i) view.nodes.push_back(full.reduce({i}));
        if (plan.needs_unit()) {
            view.unit = full.reduce({site_u_cur});
            view.out_unit = full.reduce({t.output_site(), site_u_cur});
        }
        trace.append(step, step * schedule.tau, plan.evaluate(view));
    };

    record(0, reg);
    DensityMatrix final_sys = rho0;
    for (int step = 1; step <= schedule.n_collisions; ++step) {
        reg = u_coll * reg * u_coll.adjoint();
        record(step, reg);
        reg = u_uu * reg * u_uu.adjoint();
        ComplexMatrix kept = partial_trace(reg, n_total, {0, 1, site_u_next});
        // Validate the carried state before appending the fresh unit.
        DensityMatrix carried(n_sys + 1, (kept + ComplexMatrix(kept.adjoint())) / 2.0);
        if (step == schedule.n_collisions)
            final_sys = carried.reduce({0, 1});
        reg = kron(carried.matrix(), unit_dm);
    }

    SteadyReport steady = detect_steady_state(trace, window, tol);
    return {std::move(trace), std::move(steady),
            final_sys.reduce({t.output_site()})};
}

std::pair<DensityMatrix, DensityMatrix> unit_post_state(
    const DensityMatrix& rho_sys, const QnnTopology& t, const ReservoirSpec& spec,
    double tau) {
    CollisionSchedule s;
    s.mode = CollisionSchedule::Mode::markov;
    s.tau = tau;
    s.validate();
    CollisionKernel kernel(t, {spec}, s);
    CollisionKernel::Views v = kernel.views_after_collision(rho_sys);
    return {std::move(v.unit), std::move(v.out_unit)};
}

namespace {

ComplexMatrix choi_from_kernel(const CollisionKernel& kernel) {
    const Eigen::Index d = kernel.system_dim();
    ComplexMatrix choi = ComplexMatrix::Zero(d * d, d * d);
    ComplexMatrix unit = ComplexMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            unit(i, j) = 1.0;
            ComplexMatrix mapped = kernel.apply_raw(unit);
            unit(i, j) = 0.0;
            choi.block(i * d, j * d, d, d) = mapped;
        }
    }
    return choi;
}

}  // namespace

ComplexMatrix collision_channel_choi(const QnnTopology& t,
                                     const std::vector<ReservoirSpec>& specs,
                                     double tau) {
    CollisionSchedule s;
    s.mode = CollisionSchedule::Mode::markov;
    s.tau = tau;
    return collision_channel_choi(t, specs, s);
}

ComplexMatrix collision_channel_choi(const QnnTopology& t,
                                     const std::vector<ReservoirSpec>& specs,
                                     const CollisionSchedule& schedule) {
    CollisionSchedule s = schedule;
    s.mode = CollisionSchedule::Mode::markov;
    s.j_uu.reset();
    s.tau_uu.reset();
    // tau = 0 (identity channel) is allowed here even though runs forbid it.
    if (s.tau < 0.0 || !std::isfinite(s.tau))
        throw ValidationError("choi: tau must be >= 0");
    if (s.style == CollisionSchedule::Style::split &&
        (!s.tau_su || *s.tau_su < 0.0))
        throw ValidationError("choi: split style requires tau_su >= 0");
    return choi_from_kernel(CollisionKernel(t, specs, s));
}

}  // namespace qnn
