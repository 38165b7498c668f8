#pragma once

#include <string>
#include <vector>

#include "qnn/matrix.hpp"

namespace qnn {

/// Pure qubit state on the Bloch sphere:
/// |psi(theta,phi)> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>,
/// with |0> = |up> (sigma_z eigenvalue +1).
struct PureBlochState {
    double theta = 0.0;  // [0, pi]
    double phi = 0.0;    // [0, 2*pi)
};

/// State vector of a PureBlochState.
Eigen::Vector2cd bloch_vector(const PureBlochState& s);

/// Hermitian, unit-trace, PSD matrix on an n-qubit register. Validated on
/// construction: Hermiticity and trace within 1e-10, eigenvalues >= -1e-9.
class DensityMatrix {
public:
    DensityMatrix(int n_sites, ComplexMatrix matrix);

    int n_sites() const { return n_sites_; }
    Eigen::Index dim() const { return matrix_.rows(); }
    const ComplexMatrix& matrix() const { return matrix_; }

    /// Reduced state on the given sites (in their original relative order).
    DensityMatrix reduce(const std::vector<int>& keep) const;

private:
    int n_sites_;
    ComplexMatrix matrix_;
};

/// Named Hermitian operator; units are energy quanta of omega (hbar = 1).
struct Observable {
    std::string name;
    ComplexMatrix matrix;

    Observable(std::string name_, ComplexMatrix matrix_);
};

/// Rank-1 projector |psi(theta,phi)><psi(theta,phi)| as a 1-qubit state.
DensityMatrix bloch_pure(const PureBlochState& s);

/// Kronecker product of the factors, in sequence order.
DensityMatrix product_state(const std::vector<DensityMatrix>& factors);

/// Tr[rho O]; the imaginary part must vanish within 1e-8.
double expectation(const DensityMatrix& rho, const Observable& obs);

/// Uhlmann fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)), clamped to [0,1]
/// when numerically within 1e-9 outside.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// l1 norm of coherence: sum of |rho_ij| over i != j (computational basis).
double l1_coherence(const DensityMatrix& rho);

/// Von Neumann entropy -Tr[rho ln rho] in nats; eigenvalues below 1e-14
/// are treated as exact zeros.
double von_neumann_entropy(const DensityMatrix& rho);

/// Internal energy Tr[rho h] for Hermitian h.
double internal_energy(const DensityMatrix& rho, const ComplexMatrix& h);

/// I(A:B) = S(rho_A) + S(rho_B) - S(rho_AB); sites_a and sites_b must be
/// disjoint and together cover every site of rho_joint. Clamped at 0 when
/// within -1e-9.
double mutual_information(const DensityMatrix& rho_joint,
                          const std::vector<int>& sites_a,
                          const std::vector<int>& sites_b);

}  // namespace qnn
