#include "qnn/state.hpp"

#include <algorithm>
#include <cmath>

#include "qnn/errors.hpp"

namespace qnn {

Eigen::Vector2cd bloch_vector(const PureBlochState& s) {
    if (s.theta < 0.0 || s.theta > M_PI + 1e-12)
        throw ValidationError("bloch state: theta must lie in [0, pi]");
    Eigen::Vector2cd v;
    v << std::cos(s.theta / 2.0),
         std::exp(Complex(0.0, s.phi)) * std::sin(s.theta / 2.0);
    return v;
}

DensityMatrix::DensityMatrix(int n_sites, ComplexMatrix matrix)
    : n_sites_(n_sites), matrix_(std::move(matrix)) {
    const Eigen::Index dim = Eigen::Index(1) << n_sites_;
    if (n_sites_ < 1 || matrix_.rows() != dim || matrix_.cols() != dim)
        throw ValidationError("DensityMatrix: matrix dim != 2^n_sites");
    if (!is_hermitian(matrix_))
        throw ValidationError("DensityMatrix: not Hermitian within 1e-10");
    if (std::abs(matrix_.trace().real() - 1.0) > 1e-10 ||
        std::abs(matrix_.trace().imag()) > 1e-10)
        throw ValidationError("DensityMatrix: trace differs from 1 beyond 1e-10");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(matrix_,
                                                        Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -1e-9)
        throw ValidationError("DensityMatrix: negative eigenvalue beyond -1e-9");
}

DensityMatrix DensityMatrix::reduce(const std::vector<int>& keep) const {
    return DensityMatrix(int(keep.size()),
                         partial_trace(matrix_, n_sites_, keep));
}

Observable::Observable(std::string name_, ComplexMatrix matrix_)
    : name(std::move(name_)), matrix(std::move(matrix_)) {
    if (!is_hermitian(matrix))
        throw ValidationError("Observable '" + name + "': not Hermitian");
}

DensityMatrix bloch_pure(const PureBlochState& s) {
    Eigen::Vector2cd v = bloch_vector(s);
    return DensityMatrix(1, v * v.adjoint());
}

DensityMatrix product_state(const std::vector<DensityMatrix>& factors) {
    if (factors.empty())
        throw ValidationError("product_state: empty factor sequence");
    ComplexMatrix m = factors.front().matrix();
    int n = factors.front().n_sites();
    for (size_t k = 1; k < factors.size(); ++k) {
        m = kron(m, factors[k].matrix());
        n += factors[k].n_sites();
    }
    return DensityMatrix(n, std::move(m));
}

double expectation(const DensityMatrix& rho, const Observable& obs) {
    if (obs.matrix.rows() != rho.dim())
        throw ValidationError("expectation: dimension mismatch for '" +
                              obs.name + "'");
    Complex tr = (rho.matrix() * obs.matrix).trace();
    if (std::abs(tr.imag()) > 1e-8)
        throw NumericError("expectation: imaginary part " +
                           std::to_string(tr.imag()) + " for '" + obs.name + "'");
    return tr.real();
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim())
        throw ValidationError("fidelity: dimension mismatch");
    ComplexMatrix s = psd_sqrt(rho.matrix());
    ComplexMatrix inner = s * sigma.matrix() * s;
    // inner is PSD up to round-off; its root's trace is the fidelity.
    double f = psd_sqrt((inner + inner.adjoint()) / 2.0).trace().real();
    if (f < -1e-9 || f > 1.0 + 1e-9)
        throw NumericError("fidelity: value " + std::to_string(f) +
                           " outside [0,1] beyond tolerance");
    return std::clamp(f, 0.0, 1.0);
}

double l1_coherence(const DensityMatrix& rho) {
    return rho.matrix().cwiseAbs().sum() -
           rho.matrix().diagonal().cwiseAbs().sum();
}

double von_neumann_entropy(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho.matrix(),
                                                        Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
        double lambda = solver.eigenvalues()[k];
        if (lambda > 1e-14) s -= lambda * std::log(lambda);
    }
    return std::max(s, 0.0);
}

double internal_energy(const DensityMatrix& rho, const ComplexMatrix& h) {
    if (h.rows() != rho.dim())
        throw ValidationError("internal_energy: dimension mismatch");
    return expectation(rho, Observable("hamiltonian", h));
}

double mutual_information(const DensityMatrix& rho_joint,
                          const std::vector<int>& sites_a,
                          const std::vector<int>& sites_b) {
    std::vector<bool> seen(rho_joint.n_sites(), false);
    for (const auto* part : {&sites_a, &sites_b}) {
        for (int s : *part) {
            if (s < 0 || s >= rho_joint.n_sites())
                throw ValidationError("mutual_information: site out of range");
            if (seen[s])
                throw ValidationError("mutual_information: partitions overlap");
            seen[s] = true;
        }
    }
    if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
        throw ValidationError("mutual_information: partitions must cover all sites");

    double mi = von_neumann_entropy(rho_joint.reduce(sites_a)) +
                von_neumann_entropy(rho_joint.reduce(sites_b)) -
                von_neumann_entropy(rho_joint);
    if (mi < -1e-9)
        throw NumericError("mutual_information: negative beyond tolerance");
    return std::max(mi, 0.0);
}

}  // namespace qnn
