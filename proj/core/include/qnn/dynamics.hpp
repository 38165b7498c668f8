#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qnn/metrics.hpp"
#include "qnn/network.hpp"
#include "qnn/trace.hpp"

namespace qnn {

/// Collision timing. Two Markov step styles:
///   simultaneous — one joint propagator exp(-i H_coll tau) with the system
///                  Hamiltonian active during the collision (the default);
///   split        — pair exchange exp(-i H_su tau_su) (interaction terms
///                  only), then a system drift exp(-i H_sys tau).
/// The recorded time column is step * tau in either style. Non-Markov runs
/// always use the joint collision propagator.
struct CollisionSchedule {
    enum class Mode { markov, non_markov };
    enum class Style { simultaneous, split };

    Mode mode = Mode::markov;
    Style style = Style::simultaneous;
    double tau = 1.0;
    int n_collisions = 1;
    std::optional<double> tau_su;           // split style only
    std::optional<double> j_uu, tau_uu;     // non_markov only

    void validate() const;
};

/// One Markov collision step on the extended register, precomputed as Kraus
/// operators on the system. Construction cost is one eigendecomposition of
/// the register Hamiltonian; apply() is a Kraus contraction.
class CollisionKernel {
public:
    CollisionKernel(const QnnTopology& t, const std::vector<ReservoirSpec>& specs,
                    const CollisionSchedule& schedule);

    /// Linear action of the map, no state validation (used for Choi columns).
    ComplexMatrix apply_raw(const ComplexMatrix& rho_sys) const;

    /// One collision step; output validated as a DensityMatrix.
    DensityMatrix apply(const DensityMatrix& rho_sys) const;

    /// Post-collision-phase reduced views for unit metrics: the first
    /// reservoir's unit and the joint (output node, unit) state. For the
    /// split style this is after the exchange, before the drift.
    struct Views {
        DensityMatrix unit;
        DensityMatrix out_unit;
    };
    Views views_after_collision(const DensityMatrix& rho_sys) const;

    Eigen::Index system_dim() const { return d_sys_; }

private:
    int n_sys_sites_;
    int output_site_;
    Eigen::Index d_sys_;
    Eigen::Index d_units_;
    std::vector<ComplexMatrix> kraus_;   // full-step Kraus operators
    ComplexMatrix collision_embed_;      // collision-phase U applied to fresh units, (ds*du) x ds
    bool has_units_;
};

struct RunResult {
    TraceRecord trace;
    SteadyReport steady;
    DensityMatrix final_output;  // reduced output-node state after the last step
};

/// Closed unitary evolution rho(t) = U_t rho0 U_t^dag sampled on `times`
/// (ascending, starting at 0). Metrics are evaluated on the reduced states.
TraceRecord evolve_closed(const DensityMatrix& rho0, const ComplexMatrix& h,
                          const std::vector<double>& times, const QnnTopology& t,
                          const MetricPlan& plan);

/// One joint-propagator collision step (the `simultaneous` style):
/// compose with fresh units, evolve under build_collision_hamiltonian for
/// tau, trace the units out.
DensityMatrix markov_collision_step(const DensityMatrix& rho_sys,
                                    const QnnTopology& t,
                                    const std::vector<ReservoirSpec>& specs,
                                    double tau);

/// One split-style step: pair exchange for tau_su, then system drift for tau.
DensityMatrix split_collision_step(const DensityMatrix& rho_sys,
                                   const QnnTopology& t,
                                   const std::vector<ReservoirSpec>& specs,
                                   double tau_su, double tau);

/// Iterated Markov collisions (back-to-back; no idle evolution between
/// steps). Records metrics at step 0 (initial state, fresh units) and after
/// every collision; runs steady detection at the end.
RunResult run_markov(const QnnTopology& t, const std::vector<ReservoirSpec>& specs,
                     const CollisionSchedule& schedule, const DensityMatrix& rho0,
                     const MetricPlan& plan, int window, double tol);

/// Non-Markov collision cycle with a one-unit memory window. Each cycle:
/// (1) system-unit collision for tau under the joint collision Hamiltonian,
/// (2) unit-unit partial swap between the just-used and forthcoming units
///     under build_unit_unit_hamiltonian(j_uu) for tau_uu,
/// (3) trace out the older unit, append a fresh one.
/// Metrics are recorded after phase (1) of each cycle.
RunResult run_non_markov(const QnnTopology& t, const ReservoirSpec& spec,
                         const CollisionSchedule& schedule, const DensityMatrix& rho0,
                         const MetricPlan& plan, int window, double tol);

/// Post-collision unit state and reduced joint (output, unit) state for the
/// joint-propagator step (single reservoir).
std::pair<DensityMatrix, DensityMatrix> unit_post_state(
    const DensityMatrix& rho_sys, const QnnTopology& t, const ReservoirSpec& spec,
    double tau);

/// Choi matrix J(Phi) = sum_ij E_ij ⊗ Phi(E_ij) of the one-step collision
/// map (d^2 x d^2, trace d). CPTP iff J is PSD and the partial trace over
/// the output (second) factor is the identity.
ComplexMatrix collision_channel_choi(const QnnTopology& t,
                                     const std::vector<ReservoirSpec>& specs,
                                     double tau);
ComplexMatrix collision_channel_choi(const QnnTopology& t,
                                     const std::vector<ReservoirSpec>& specs,
                                     const CollisionSchedule& schedule);

}  // namespace qnn
