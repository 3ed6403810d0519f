#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "cohcert/errors.hpp"
#include "cohcert/prob_vec.hpp"

namespace cohcert {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Hermitian, positive-semidefinite, trace-one matrix. Validated at
/// construction: Hermiticity within 1e-10, eigenvalues >= -1e-9, trace
/// within 1e-9 of one. Immutable.
class DensityMatrix {
  public:
    static constexpr int max_dim = 4096;  // 12 qubits, desk scale

    explicit DensityMatrix(Matrix entries);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& entries() const { return m_; }
    std::complex<double> operator()(int i, int j) const { return m_(i, j); }

  private:
    Matrix m_;
};

/// n orthonormal column vectors (Gram matrix = identity within 1e-9).
class OrthonormalBasis {
  public:
    explicit OrthonormalBasis(Matrix columns);

    static OrthonormalBasis computational(int n);

    int dim() const { return static_cast<int>(m_.rows()); }
    Vector vec(int i) const { return m_.col(i); }
    const Matrix& columns() const { return m_; }

  private:
    Matrix m_;
};

/// Hermitian observable with an optional label.
class Observable {
  public:
    explicit Observable(Matrix entries, std::string label = "");

    const Matrix& entries() const { return m_; }
    const std::string& label() const { return label_; }
    double expectation(const DensityMatrix& rho) const;

  private:
    Matrix m_;
    std::string label_;
};

/// Diagonal entries of rho in the incoherent basis (imaginary parts must
/// vanish within 1e-10).
ProbVec diagonal_part(const DensityMatrix& rho);

/// Eigenvalues in descending order, clamped to [0, 1] after validation.
ProbVec spectrum(const DensityMatrix& rho);

/// Outcome distribution p_i = <phi_i|rho|phi_i> of a von Neumann
/// measurement, raw order preserved.
ProbVec measure(const DensityMatrix& rho, const OrthonormalBasis& basis);

/// Builds a state with the prescribed spectrum and diagonal via a chain of
/// two-dimensional rotations. Requires d majorized by lambda; both are
/// reproduced within 1e-8. The diagonal follows the raw storage order of d.
DensityMatrix schur_horn_construct(const ProbVec& lambda, const ProbVec& d);

/// The 2^N vectors (|l> + |l~>)/sqrt(2), l_1 = 0, binary l ascending,
/// followed by the corresponding "-" vectors. Qubit 1 is the most
/// significant bit of the computational index.
OrthonormalBasis ghz_basis(int n_qubits);

/// The pure N-qubit GHZ state (|0...0> + |1...1>)/sqrt(2).
DensityMatrix ghz_state(int n_qubits);

/// The observables obtainable from the two local settings X^(x)N and
/// Z^(x)N that are diagonal in the GHZ basis: the identity (normalization),
/// all Z_E for nonempty even-sized subsets E, and X^(x)N. 2^{N-1}+1 in
/// total, ordered to match ghz_eigenvalue_matrix.
std::vector<Observable> stabilizer_observables(int n_qubits);

/// Labels of stabilizer_observables(N) in the same order, without
/// materializing the matrices (e.g. "III", "ZIZ", "ZZI", "IZZ", "XXX").
std::vector<std::string> stabilizer_labels(int n_qubits);

/// The (2^{N-1}+1) x 2^N matrix of GHZ-basis eigenvalues of the stabilizer
/// observables: row i lists the eigenvalue of observable i on each GHZ
/// basis vector. Row 0 is the normalization row (all ones).
Eigen::MatrixXd ghz_eigenvalue_matrix(int n_qubits);

/// GHZ-basis outcome probabilities of rho, computed from the two nonzero
/// amplitudes of each GHZ vector (cheaper than a dense measure()).
ProbVec ghz_probabilities(const DensityMatrix& rho);

/// Local bit-flip channel Lambda^(x)N with
/// Lambda(rho) = (1+e^{-gt})/2 rho + (1-e^{-gt})/2 X rho X per qubit.
DensityMatrix bitflip_channel(const DensityMatrix& rho, double gamma_t);

/// Per-qubit dephasing: rho -> (1-eps) rho + eps Delta(rho) on each qubit.
DensityMatrix dephase_prep(const DensityMatrix& rho, double eps);

/// Per-qubit depolarizing: rho -> (1-eps) rho + eps 1/2 on each qubit.
DensityMatrix depolarize_prep(const DensityMatrix& rho, double eps);

/// Basis-global dephasing toward the incoherent basis:
/// rho -> (1-eps) rho + eps Delta(rho). Works in any dimension.
DensityMatrix dephase_global(const DensityMatrix& rho, double eps);

enum class NoiseKind { dephasing, depolarizing };

/// Closed-form GHZ fidelity after per-qubit preparation noise of strength
/// eps.
double ghz_fidelity(double eps, int n_qubits, NoiseKind kind);

}  // namespace cohcert
