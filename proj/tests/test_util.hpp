#pragma once

#include <random>

#include "qnn/matrix.hpp"
#include "qnn/state.hpp"

namespace qnn::test {

inline std::mt19937& rng() {
    static std::mt19937 gen(20240817u);
    return gen;
}

inline ComplexMatrix random_matrix(Eigen::Index dim) {
    std::normal_distribution<double> dist(0.0, 1.0);
    ComplexMatrix m(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j)
            m(i, j) = Complex(dist(rng()), dist(rng()));
    return m;
}

inline ComplexMatrix random_hermitian(Eigen::Index dim) {
    ComplexMatrix m = random_matrix(dim);
    return (m + ComplexMatrix(m.adjoint())) / 2.0;
}

inline DensityMatrix random_density(int n_sites) {
    const Eigen::Index dim = Eigen::Index(1) << n_sites;
    ComplexMatrix g = random_matrix(dim);
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    rho = (rho + ComplexMatrix(rho.adjoint())) / 2.0;
    return DensityMatrix(n_sites, std::move(rho));
}

inline PureBlochState random_bloch() {
    std::uniform_real_distribution<double> th(0.0, M_PI), ph(0.0, 2.0 * M_PI);
    return {th(rng()), ph(rng())};
}

}  // namespace qnn::test
