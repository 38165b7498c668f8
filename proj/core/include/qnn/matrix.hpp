#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace qnn {

using Complex = std::complex<double>;

/// Dense square complex matrix; carrier for states, Hamiltonians and
/// propagators. Qubit registers use dim = 2^n with site 0 as the leftmost
/// Kronecker factor (most significant bit of the basis index).
using ComplexMatrix = Eigen::MatrixXcd;

/// Result of a Hermitian eigendecomposition: ascending real eigenvalues and
/// the unitary whose columns are the matching orthonormal eigenvectors.
struct EigenDecomposition {
    Eigen::VectorXd eigenvalues;
    ComplexMatrix eigenvectors;
};

// 2x2 building blocks. Index 0 is |up> (sigma_z eigenvalue +1).
ComplexMatrix identity(Eigen::Index dim);
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
ComplexMatrix sigma_plus();
ComplexMatrix sigma_minus();
ComplexMatrix projector_up();
ComplexMatrix projector_down();

/// Kronecker product, a ⊗ b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Embed a single-qubit operator at `site` of an n-site register:
/// I ⊗ ... ⊗ op ⊗ ... ⊗ I with op at position `site`.
ComplexMatrix embed(const ComplexMatrix& op, int site, int n_sites);

/// Eigendecomposition of a Hermitian matrix. Throws ValidationError if the
/// input deviates from Hermiticity by more than 1e-10 (max-abs).
EigenDecomposition herm_eig(const ComplexMatrix& a);

/// exp(-i h t) for Hermitian h, via spectral decomposition.
ComplexMatrix expm_unitary(const ComplexMatrix& h, double t);

/// Hermitian PSD square root. Eigenvalues in [-1e-12, 0) are clamped to 0;
/// anything below -1e-9 is rejected as genuinely non-PSD.
ComplexMatrix psd_sqrt(const ComplexMatrix& a);

/// Partial trace over the sites *not* in `keep`; `rho` spans n_sites qubits.
/// Retained sites keep their original relative order.
ComplexMatrix partial_trace(const ComplexMatrix& rho, int n_sites,
                            const std::vector<int>& keep);

double max_abs(const ComplexMatrix& a);
bool is_hermitian(const ComplexMatrix& a, double tol = 1e-10);

}  // namespace qnn
