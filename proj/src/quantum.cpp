#include "cohcert/quantum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace cohcert {

namespace {

constexpr double kHermTol = 1e-10;
constexpr double kTraceTol = 1e-9;
constexpr double kEigTol = 1e-9;

void check_square(const Matrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() < 1) {
        throw ValidationError(std::string(what) + ": matrix must be square and nonempty");
    }
}

int qubit_count(int dim) {
    int n = 0;
    while ((1 << n) < dim) ++n;
    if ((1 << n) != dim) throw ValidationError("dimension is not a power of two");
    return n;
}

void check_qubits(int n_qubits) {
    if (n_qubits < 2 || n_qubits > 12) {
        throw ValidationError("qubit count out of range [2, 12]");
    }
}

int parity(unsigned x) { return std::popcount(x) & 1; }

}  // namespace

DensityMatrix::DensityMatrix(Matrix entries) : m_(std::move(entries)) {
    check_square(m_, "DensityMatrix");
    if (m_.rows() > max_dim) {
        throw ValidationError("DensityMatrix: dimension exceeds desk-scale cap");
    }
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > kHermTol) {
        throw ValidationError("DensityMatrix: not Hermitian within tolerance");
    }
    const std::complex<double> tr = m_.trace();
    if (std::abs(tr.real() - 1.0) > kTraceTol || std::abs(tr.imag()) > kTraceTol) {
        throw ValidationError("DensityMatrix: trace differs from one");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw NumericError("DensityMatrix: eigensolver failed");
    }
    if (es.eigenvalues().minCoeff() < -kEigTol) {
        throw ValidationError("DensityMatrix: negative eigenvalue beyond tolerance");
    }
}

OrthonormalBasis::OrthonormalBasis(Matrix columns) : m_(std::move(columns)) {
    check_square(m_, "OrthonormalBasis");
    const Matrix gram = m_.adjoint() * m_;
    if ((gram - Matrix::Identity(m_.rows(), m_.cols())).cwiseAbs().maxCoeff() > 1e-9) {
        throw ValidationError("OrthonormalBasis: Gram matrix is not the identity");
    }
}

OrthonormalBasis OrthonormalBasis::computational(int n) {
    return OrthonormalBasis(Matrix::Identity(n, n));
}

Observable::Observable(Matrix entries, std::string label)
    : m_(std::move(entries)), label_(std::move(label)) {
    check_square(m_, "Observable");
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > kHermTol) {
        throw ValidationError("Observable: not Hermitian within tolerance");
    }
}

double Observable::expectation(const DensityMatrix& rho) const {
    if (m_.rows() != rho.dim()) throw DimensionError("Observable: dimension mismatch");
    return (m_ * rho.entries()).trace().real();
}

ProbVec diagonal_part(const DensityMatrix& rho) {
    std::vector<double> d(rho.dim());
    for (int i = 0; i < rho.dim(); ++i) {
        const auto v = rho(i, i);
        if (std::abs(v.imag()) > 1e-10) {
            throw NumericError("diagonal_part: complex diagonal entry");
        }
        d[i] = v.real();
    }
    return ProbVec(std::move(d));
}

ProbVec spectrum(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.entries(), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw NumericError("spectrum: eigensolver failed");
    }
    std::vector<double> ev(rho.dim());
    for (int i = 0; i < rho.dim(); ++i) {
        // Eigen returns ascending order; reverse and clamp to [0, 1].
        ev[i] = std::clamp(es.eigenvalues()[rho.dim() - 1 - i], 0.0, 1.0);
    }
    return ProbVec(std::move(ev));
}

ProbVec measure(const DensityMatrix& rho, const OrthonormalBasis& basis) {
    if (basis.dim() != rho.dim()) throw DimensionError("measure: dimension mismatch");
    std::vector<double> p(rho.dim());
    const Matrix m = basis.columns().adjoint() * rho.entries() * basis.columns();
    for (int i = 0; i < rho.dim(); ++i) {
        p[i] = std::max(0.0, m(i, i).real());
    }
    return ProbVec(std::move(p));
}

DensityMatrix schur_horn_construct(const ProbVec& lambda, const ProbVec& d) {
    if (lambda.size() != d.size()) {
        throw DimensionError("schur_horn_construct: length mismatch");
    }
    if (!majorizes(lambda, d)) {
        throw MajorizationError("schur_horn_construct: diagonal is not majorized by spectrum");
    }
    const int n = static_cast<int>(d.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    std::vector<double> a = lambda.sorted_desc();
    const std::vector<double>& target = d.sorted_desc();
    for (int i = 0; i < n; ++i) m(i, i) = a[i];

    auto diag_at = [&](int i) { return m(i, i); };

    // Each rotation pins at least one diagonal entry to its target, so at
    // most n-1 passes are needed.
    for (int pass = 0; pass < 2 * n; ++pass) {
        int j = -1;
        for (int i = n - 1; i >= 0; --i) {
            if (diag_at(i) > target[i] + 1e-13) { j = i; break; }
        }
        if (j < 0) break;
        int k = -1;
        for (int i = j + 1; i < n; ++i) {
            if (diag_at(i) < target[i] - 1e-13) { k = i; break; }
        }
        if (k < 0) {
            throw NumericError("schur_horn_construct: no transfer partner (majorization drift)");
        }
        const double delta = std::min(diag_at(j) - target[j], target[k] - diag_at(k));
        const double tau = diag_at(j) - delta;
        // Solve f(theta) = cos^2 p + sin^2 q + sin(2 theta) x = tau on
        // [0, pi/2] by bisection; f(0) = p >= tau >= q = f(pi/2).
        const double p = m(j, j), q = m(k, k), x = m(j, k);
        double lo = 0.0, hi = M_PI / 2.0;
        for (int it = 0; it < 80; ++it) {
            const double th = 0.5 * (lo + hi);
            const double f = p * std::cos(th) * std::cos(th) + q * std::sin(th) * std::sin(th) +
                             x * std::sin(2.0 * th);
            if (f >= tau) lo = th; else hi = th;
        }
        const double th = 0.5 * (lo + hi);
        const double c = std::cos(th), s = std::sin(th);
        const Eigen::VectorXd rj = m.row(j), rk = m.row(k);
        m.row(j) = c * rj + s * rk;
        m.row(k) = -s * rj + c * rk;
        const Eigen::VectorXd cj = m.col(j), ck = m.col(k);
        m.col(j) = c * cj + s * ck;
        m.col(k) = -s * cj + c * ck;
    }

    // Permute so the diagonal follows the raw order of d.
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int i, int j2) { return d.raw()[i] > d.raw()[j2]; });
    Matrix out(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c2 = 0; c2 < n; ++c2) {
            out(idx[r], idx[c2]) = m(r, c2);
        }
    }
    return DensityMatrix(std::move(out));
}

OrthonormalBasis ghz_basis(int n_qubits) {
    check_qubits(n_qubits);
    const int n = 1 << n_qubits;
    const int half = n / 2;
    Matrix cols = Matrix::Zero(n, n);
    const double inv = 1.0 / std::sqrt(2.0);
    for (int j = 0; j < half; ++j) {
        cols(j, j) = inv;
        cols(n - 1 - j, j) = inv;
        cols(j, half + j) = inv;
        cols(n - 1 - j, half + j) = -inv;
    }
    return OrthonormalBasis(std::move(cols));
}

DensityMatrix ghz_state(int n_qubits) {
    check_qubits(n_qubits);
    const int n = 1 << n_qubits;
    Matrix m = Matrix::Zero(n, n);
    m(0, 0) = m(0, n - 1) = m(n - 1, 0) = m(n - 1, n - 1) = 0.5;
    return DensityMatrix(std::move(m));
}

std::vector<std::string> stabilizer_labels(int n_qubits) {
    check_qubits(n_qubits);
    const int half = 1 << (n_qubits - 1);
    std::vector<std::string> labels;
    labels.reserve(half + 1);
    for (int mask = 0; mask < half; ++mask) {
        std::string w(n_qubits, 'I');
        if (parity(mask)) w[0] = 'Z';  // qubit 1 completes E to even size
        for (int i = 2; i <= n_qubits; ++i) {
            if ((mask >> (n_qubits - i)) & 1) w[i - 1] = 'Z';
        }
        labels.push_back(std::move(w));
    }
    labels.emplace_back(n_qubits, 'X');
    return labels;
}

std::vector<Observable> stabilizer_observables(int n_qubits) {
    check_qubits(n_qubits);
    const int n = 1 << n_qubits;
    const auto labels = stabilizer_labels(n_qubits);
    std::vector<Observable> obs;
    obs.reserve(labels.size());
    for (const std::string& w : labels) {
        Matrix m = Matrix::Zero(n, n);
        if (w[0] == 'X') {
            for (int i = 0; i < n; ++i) m(i, n - 1 - i) = 1.0;
        } else {
            unsigned zmask = 0;
            for (int i = 0; i < n_qubits; ++i) {
                if (w[i] == 'Z') zmask |= 1u << (n_qubits - 1 - i);
            }
            for (int i = 0; i < n; ++i) {
                m(i, i) = parity(static_cast<unsigned>(i) & zmask) ? -1.0 : 1.0;
            }
        }
        obs.emplace_back(std::move(m), w);
    }
    return obs;
}

Eigen::MatrixXd ghz_eigenvalue_matrix(int n_qubits) {
    check_qubits(n_qubits);
    const int half = 1 << (n_qubits - 1);
    Eigen::MatrixXd b(half + 1, 2 * half);
    for (int mask = 0; mask < half; ++mask) {
        for (int j = 0; j < half; ++j) {
            const double v = parity(static_cast<unsigned>(j & mask)) ? -1.0 : 1.0;
            b(mask, j) = v;
            b(mask, half + j) = v;
        }
    }
    for (int j = 0; j < half; ++j) {
        b(half, j) = 1.0;
        b(half, half + j) = -1.0;
    }
    return b;
}

ProbVec ghz_probabilities(const DensityMatrix& rho) {
    const int n = rho.dim();
    qubit_count(n);
    const int half = n / 2;
    std::vector<double> p(n);
    for (int j = 0; j < half; ++j) {
        const double diag = rho(j, j).real() + rho(n - 1 - j, n - 1 - j).real();
        const double cross = rho(j, n - 1 - j).real();
        p[j] = std::max(0.0, 0.5 * diag + cross);
        p[half + j] = std::max(0.0, 0.5 * diag - cross);
    }
    return ProbVec(std::move(p));
}

namespace {

// rho -> sum_k w_k P_k rho P_k with P_k a single-qubit Pauli on `qubit`
// (0-based from the most significant bit).
Matrix pauli_mix(const Matrix& rho, int qubit, int n_qubits, double w_x, double w_y,
                 double w_z, double w_id) {
    const int n = static_cast<int>(rho.rows());
    const unsigned bit = 1u << (n_qubits - 1 - qubit);
    Matrix out(n, n);
    for (int i = 0; i < n; ++i) {
        const int fi = static_cast<int>(static_cast<unsigned>(i) ^ bit);
        const double zi = (static_cast<unsigned>(i) & bit) ? -1.0 : 1.0;
        for (int j = 0; j < n; ++j) {
            const int fj = static_cast<int>(static_cast<unsigned>(j) ^ bit);
            const double zj = (static_cast<unsigned>(j) & bit) ? -1.0 : 1.0;
            out(i, j) = w_id * rho(i, j) + w_z * zi * zj * rho(i, j) +
                        w_x * rho(fi, fj) + w_y * zi * zj * rho(fi, fj);
        }
    }
    return out;
}

}  // namespace

DensityMatrix bitflip_channel(const DensityMatrix& rho, double gamma_t) {
    if (gamma_t < 0.0) throw ValidationError("bitflip_channel: gamma_t must be >= 0");
    const int nq = qubit_count(rho.dim());
    const double a = 0.5 * (1.0 + std::exp(-gamma_t));
    Matrix m = rho.entries();
    for (int q = 0; q < nq; ++q) {
        m = pauli_mix(m, q, nq, 1.0 - a, 0.0, 0.0, a);
    }
    return DensityMatrix(std::move(m));
}

DensityMatrix dephase_prep(const DensityMatrix& rho, double eps) {
    if (eps < 0.0 || eps > 1.0) throw ValidationError("dephase_prep: eps out of [0, 1]");
    const int nq = qubit_count(rho.dim());
    Matrix m = rho.entries();
    for (int q = 0; q < nq; ++q) {
        m = pauli_mix(m, q, nq, 0.0, 0.0, 0.5 * eps, 1.0 - 0.5 * eps);
    }
    return DensityMatrix(std::move(m));
}

DensityMatrix depolarize_prep(const DensityMatrix& rho, double eps) {
    if (eps < 0.0 || eps > 1.0) throw ValidationError("depolarize_prep: eps out of [0, 1]");
    const int nq = qubit_count(rho.dim());
    Matrix m = rho.entries();
    for (int q = 0; q < nq; ++q) {
        m = pauli_mix(m, q, nq, 0.25 * eps, 0.25 * eps, 0.25 * eps, 1.0 - 0.75 * eps);
    }
    return DensityMatrix(std::move(m));
}

DensityMatrix dephase_global(const DensityMatrix& rho, double eps) {
    if (eps < 0.0 || eps > 1.0) throw ValidationError("dephase_global: eps out of [0, 1]");
    Matrix m = (1.0 - eps) * rho.entries();
    for (int i = 0; i < rho.dim(); ++i) m(i, i) += eps * rho(i, i);
    return DensityMatrix(std::move(m));
}

double ghz_fidelity(double eps, int n_qubits, NoiseKind kind) {
    check_qubits(n_qubits);
    if (eps < 0.0 || eps > 1.0) throw ValidationError("ghz_fidelity: eps out of [0, 1]");
    const double n = static_cast<double>(n_qubits);
    if (kind == NoiseKind::dephasing) {
        return 0.5 * (1.0 + std::pow(1.0 - eps, n));
    }
    return 0.5 * (std::pow(1.0 - 0.5 * eps, n) + std::pow(0.5 * eps, n) +
                  std::pow(1.0 - eps, n));
}

}  // namespace cohcert
