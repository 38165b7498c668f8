#include "qnn/network.hpp"

#include <cmath>
#include <string>

#include "qnn/errors.hpp"

namespace qnn {

void QnnTopology::validate() const {
    if (n_inputs < 1)
        throw ValidationError("topology: n_inputs must be >= 1");
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw ValidationError("topology: omega must be positive and finite");
    if (int(couplings.size()) != n_inputs)
        throw ValidationError("topology: couplings length " +
                              std::to_string(couplings.size()) +
                              " != n_inputs " + std::to_string(n_inputs));
    for (double j : couplings) {
        if (!std::isfinite(j))
            throw ValidationError("topology: non-finite coupling");
        if (std::abs(j) > omega)
            throw ValidationError("topology: |J| > omega leaves the weak-coupling regime");
    }
}

namespace {

ComplexMatrix flip_flop(int site_a, int site_b, int n_sites) {
    return embed(sigma_plus(), site_a, n_sites) * embed(sigma_minus(), site_b, n_sites) +
           embed(sigma_minus(), site_a, n_sites) * embed(sigma_plus(), site_b, n_sites);
}

void check_specs(const QnnTopology& t, const std::vector<ReservoirSpec>& specs) {
    std::vector<bool> used(t.n_inputs, false);
    for (const auto& s : specs) {
        if (s.node < 0 || s.node >= t.n_inputs)
            throw ValidationError("reservoir: node " + std::to_string(s.node) +
                                  " out of range");
        if (used[s.node])
            throw ValidationError("reservoir: node " + std::to_string(s.node) +
                                  " has more than one reservoir");
        used[s.node] = true;
        if (!std::isfinite(s.j_su))
            throw ValidationError("reservoir: non-finite j_su");
    }
}

}  // namespace

ComplexMatrix build_system_hamiltonian(const QnnTopology& t) {
    t.validate();
    const int n = t.n_sites();
    const Eigen::Index dim = Eigen::Index(1) << n;
    ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
    for (int s = 0; s < n; ++s)
        h += 0.5 * t.omega * embed(pauli_z(), s, n);
    for (int i = 0; i < t.n_inputs; ++i)
        h += t.couplings[i] * flip_flop(i, t.output_site(), n);
    return h;
}

ComplexMatrix build_collision_hamiltonian(const QnnTopology& t,
                                          const std::vector<ReservoirSpec>& specs) {
    check_specs(t, specs);
    const int n = t.n_sites() + int(specs.size());
    ComplexMatrix h = kron(build_system_hamiltonian(t),
                           identity(Eigen::Index(1) << specs.size()));
    for (size_t k = 0; k < specs.size(); ++k) {
        const int unit_site = t.n_sites() + int(k);
        h += 0.5 * t.omega * embed(pauli_z(), unit_site, n);
        h += specs[k].j_su * flip_flop(specs[k].node, unit_site, n);
    }
    return h;
}

ComplexMatrix build_exchange_hamiltonian(const QnnTopology& t,
                                         const std::vector<ReservoirSpec>& specs) {
    check_specs(t, specs);
    const int n = t.n_sites() + int(specs.size());
    const Eigen::Index dim = Eigen::Index(1) << n;
    ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
    for (size_t k = 0; k < specs.size(); ++k)
        h += specs[k].j_su * flip_flop(specs[k].node, t.n_sites() + int(k), n);
    return h;
}

ComplexMatrix build_unit_unit_hamiltonian(double j_uu, double omega) {
    if (!std::isfinite(j_uu))
        throw ValidationError("unit-unit Hamiltonian: non-finite j_uu");
    ComplexMatrix h = j_uu * flip_flop(0, 1, 2);
    h += 0.5 * omega * (embed(pauli_z(), 0, 2) + embed(pauli_z(), 1, 2));
    return h;
}

DensityMatrix predict_pointer_steady_state(int n_up, int n_down) {
    if (n_up < 0 || n_down < 0 || n_up + n_down < 1)
        throw ValidationError("pointer prediction: need at least one reservoir");
    const double total = n_up + n_down;
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = n_up / total;
    m(1, 1) = n_down / total;
    return DensityMatrix(1, m);
}

DensityMatrix target_density(const TargetState& t) {
    if (t.components.empty())
        throw ValidationError("target: no components");
    if (t.kind == TargetState::Kind::mixture) {
        double sum = 0.0;
        ComplexMatrix m = ComplexMatrix::Zero(2, 2);
        for (const auto& [state, weight] : t.components) {
            if (std::abs(weight.imag()) > 1e-12 || weight.real() < 0.0)
                throw ValidationError("target mixture: weights must be real and >= 0");
            sum += weight.real();
            m += weight.real() * bloch_pure(state).matrix();
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw ValidationError("target mixture: weights sum to " +
                                  std::to_string(sum) + ", expected 1");
        return DensityMatrix(1, m);
    }
    double norm2 = 0.0;
    Eigen::Vector2cd psi = Eigen::Vector2cd::Zero();
    for (const auto& [state, amp] : t.components) {
        norm2 += std::norm(amp);
        psi += amp * bloch_vector(state);
    }
    if (std::abs(norm2 - 1.0) > 1e-12)
        throw ValidationError("target superposition: |c_i|^2 sum differs from 1");
    // Components need not be orthogonal; renormalize the summed vector.
    const double n = psi.norm();
    if (n < 1e-12)
        throw ValidationError("target superposition: components cancel (norm ~ 0)");
    psi /= n;
    return DensityMatrix(1, psi * psi.adjoint());
}

}  // namespace qnn
