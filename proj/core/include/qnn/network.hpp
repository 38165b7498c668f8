#pragma once

#include <complex>
#include <vector>

#include "qnn/matrix.hpp"
#include "qnn/state.hpp"

namespace qnn {

/// Star network: n_inputs qubit nodes flip-flop-coupled to one output qubit.
/// Site layout everywhere: inputs 0 .. n_inputs-1, output at site n_inputs;
/// environment units, when present, are appended after the output.
struct QnnTopology {
    int n_inputs = 1;
    double omega = 1.0;
    std::vector<double> couplings;  // J_i, one per input node

    int n_sites() const { return n_inputs + 1; }
    int output_site() const { return n_inputs; }
    void validate() const;
};

/// One information-reservoir attachment: identically prepared pure units in
/// `unit_state` colliding with input node `node` at coupling j_su.
struct ReservoirSpec {
    int node = 0;
    PureBlochState unit_state;
    double j_su = 0.0;
};

/// Target state for fidelity tracking: statistical mixture
/// rho_m = sum_i p_i |psi_i><psi_i| or coherent superposition
/// |psi_C> = sum_i c_i |psi_i> (normalized if components overlap).
struct TargetState {
    enum class Kind { mixture, superposition };
    Kind kind = Kind::mixture;
    std::vector<std::pair<PureBlochState, Complex>> components;
};

/// Eq.-style star Hamiltonian: (omega/2) sigma_z on every site (output
/// included) plus J_i (sigma_i^+ sigma_out^- + h.c.) for each input.
ComplexMatrix build_system_hamiltonian(const QnnTopology& t);

/// System Hamiltonian embedded on the extended register plus, per spec k,
/// the unit free term (omega/2) sigma_z and the node-unit flip-flop
/// J_su (sigma_node^+ sigma_unit^- + h.c.). Units appended in spec order.
ComplexMatrix build_collision_hamiltonian(const QnnTopology& t,
                                          const std::vector<ReservoirSpec>& specs);

/// Interaction terms of the collision register only: the node-unit
/// flip-flops, each scaled by its own j_su, with no free or system terms.
/// Generates the exchange phase of the split collision style.
ComplexMatrix build_exchange_hamiltonian(const QnnTopology& t,
                                         const std::vector<ReservoirSpec>& specs);

/// Two-qubit unit-unit Hamiltonian: J_uu (sigma^+ sigma^- + h.c.) plus
/// (omega/2) sigma_z free terms on both units.
ComplexMatrix build_unit_unit_hamiltonian(double j_uu, double omega = 1.0);

/// Pointer-state steady output for n_up / n_down orthogonal reservoirs:
/// diag(n_up/N, n_down/N).
DensityMatrix predict_pointer_steady_state(int n_up, int n_down);

/// Density matrix of a TargetState (1 qubit).
DensityMatrix target_density(const TargetState& t);

}  // namespace qnn
