#include "cohcert/random.hpp"

#include <cmath>

namespace cohcert {

Matrix random_unitary(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix g(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            g(i, j) = std::complex<double>(gauss(rng), gauss(rng));
        }
    }
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phase ambiguity so the distribution is Haar.
    for (int j = 0; j < n; ++j) {
        const std::complex<double> d = r(j, j);
        q.col(j) *= d / std::abs(d);
    }
    return q;
}

ProbVec random_prob_vec(int n, std::mt19937_64& rng) {
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> p(static_cast<std::size_t>(n));
    double total = 0.0;
    for (double& x : p) {
        x = expo(rng);
        total += x;
    }
    for (double& x : p) x /= total;
    return ProbVec(std::move(p));
}

DensityMatrix random_state(int dim, int rank, std::mt19937_64& rng) {
    if (rank < 1 || rank > dim) throw ValidationError("random_state: rank out of range");
    const ProbVec p = random_prob_vec(rank, rng);
    const Matrix u = random_unitary(dim, rng);
    Matrix rho = Matrix::Zero(dim, dim);
    for (int i = 0; i < rank; ++i) {
        rho += p[static_cast<std::size_t>(i)] * u.col(i) * u.col(i).adjoint();
    }
    // Symmetrize away the numerical skew before validation.
    rho = 0.5 * (rho + rho.adjoint().eval());
    return DensityMatrix(rho);
}

}  // namespace cohcert
