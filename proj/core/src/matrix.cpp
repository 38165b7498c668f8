#include "qnn/matrix.hpp"

#include <cmath>
#include <string>

#include "qnn/errors.hpp"

namespace qnn {

namespace {
constexpr Complex kI{0.0, 1.0};
}

ComplexMatrix identity(Eigen::Index dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

ComplexMatrix pauli_y() {
    ComplexMatrix m(2, 2);
    m << 0, -kI, kI, 0;
    return m;
}

ComplexMatrix pauli_z() {
    ComplexMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

ComplexMatrix sigma_plus() {
    // Raising operator |up><down| in the index-0-is-up convention.
    ComplexMatrix m(2, 2);
    m << 0, 1, 0, 0;
    return m;
}

ComplexMatrix sigma_minus() {
    ComplexMatrix m(2, 2);
    m << 0, 0, 1, 0;
    return m;
}

ComplexMatrix projector_up() {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = 1.0;
    return m;
}

ComplexMatrix projector_down() {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(1, 1) = 1.0;
    return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const Eigen::Index ra = a.rows(), ca = a.cols();
    const Eigen::Index rb = b.rows(), cb = b.cols();
    ComplexMatrix out(ra * rb, ca * cb);
    for (Eigen::Index i = 0; i < ra; ++i)
        for (Eigen::Index j = 0; j < ca; ++j)
            out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
    return out;
}

ComplexMatrix embed(const ComplexMatrix& op, int site, int n_sites) {
    if (op.rows() != 2 || op.cols() != 2)
        throw ValidationError("embed: operator must be 2x2");
    if (site < 0 || site >= n_sites)
        throw ValidationError("embed: site " + std::to_string(site) +
                              " out of range for " + std::to_string(n_sites) + " sites");
    const Eigen::Index d_left = Eigen::Index(1) << site;
    const Eigen::Index d_right = Eigen::Index(1) << (n_sites - site - 1);
    return kron(kron(identity(d_left), op), identity(d_right));
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
    return max_abs(a - a.adjoint()) <= tol;
}

double max_abs(const ComplexMatrix& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

EigenDecomposition herm_eig(const ComplexMatrix& a) {
    if (a.rows() != a.cols())
        throw ValidationError("herm_eig: matrix not square");
    if (!is_hermitian(a))
        throw ValidationError("herm_eig: matrix not Hermitian within 1e-10");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a);
    if (solver.info() != Eigen::Success)
        throw NumericError("herm_eig: eigensolver failed to converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix expm_unitary(const ComplexMatrix& h, double t) {
    EigenDecomposition ed = herm_eig(h);
    Eigen::VectorXcd phases(ed.eigenvalues.size());
    for (Eigen::Index k = 0; k < ed.eigenvalues.size(); ++k)
        phases[k] = std::exp(-kI * ed.eigenvalues[k] * t);
    return ed.eigenvectors * phases.asDiagonal() * ed.eigenvectors.adjoint();
}

ComplexMatrix psd_sqrt(const ComplexMatrix& a) {
    EigenDecomposition ed = herm_eig(a);
    Eigen::VectorXd roots(ed.eigenvalues.size());
    for (Eigen::Index k = 0; k < ed.eigenvalues.size(); ++k) {
        double lambda = ed.eigenvalues[k];
        if (lambda < -1e-9)
            throw NumericError("psd_sqrt: eigenvalue " + std::to_string(lambda) +
                               " below -1e-9; input not PSD");
        roots[k] = std::sqrt(std::max(lambda, 0.0));
    }
    return ed.eigenvectors * roots.cast<Complex>().asDiagonal() *
           ed.eigenvectors.adjoint();
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, int n_sites,
                            const std::vector<int>& keep) {
    const Eigen::Index dim = Eigen::Index(1) << n_sites;
    if (rho.rows() != dim || rho.cols() != dim)
        throw ValidationError("partial_trace: dimension mismatch with n_sites");
    if (keep.empty())
        throw ValidationError("partial_trace: keep set must be nonempty");

    std::vector<bool> kept(n_sites, false);
    for (int s : keep) {
        if (s < 0 || s >= n_sites)
            throw ValidationError("partial_trace: site " + std::to_string(s) +
                                  " out of range");
        if (kept[s])
            throw ValidationError("partial_trace: duplicate site in keep set");
        kept[s] = true;
    }

    std::vector<int> keep_sorted, traced;
    for (int s = 0; s < n_sites; ++s)
        (kept[s] ? keep_sorted : traced).push_back(s);

    const int nk = int(keep_sorted.size());
    const int nt = int(traced.size());
    const Eigen::Index dk = Eigen::Index(1) << nk;
    const Eigen::Index dt = Eigen::Index(1) << nt;

    // Basis index bit for site s is (n_sites - 1 - s); site 0 is the MSB.
    auto scatter = [&](Eigen::Index bits, const std::vector<int>& sites) {
        Eigen::Index full = 0;
        for (size_t b = 0; b < sites.size(); ++b) {
            Eigen::Index bit = (bits >> (sites.size() - 1 - b)) & 1;
            full |= bit << (n_sites - 1 - sites[b]);
        }
        return full;
    };

    ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
    for (Eigen::Index r = 0; r < dk; ++r) {
        const Eigen::Index r_full = scatter(r, keep_sorted);
        for (Eigen::Index c = 0; c < dk; ++c) {
            const Eigen::Index c_full = scatter(c, keep_sorted);
            Complex sum = 0.0;
            for (Eigen::Index t = 0; t < dt; ++t) {
                const Eigen::Index t_full = scatter(t, traced);
                sum += rho(r_full | t_full, c_full | t_full);
            }
            out(r, c) = sum;
        }
    }
    return out;
}

}  // namespace qnn
