#pragma once

#include <iosfwd>
#include <random>
#include <vector>

#include "cohcert/prob_vec.hpp"
#include "cohcert/quantum.hpp"

namespace cohcert {

/// The measurement history of an adaptive run. The first basis must be the
/// computational (incoherent) basis; outcomes align with bases.
struct MeasurementRecord {
    std::vector<OrthonormalBasis> bases;
    std::vector<ProbVec> outcomes;

    void validate() const;
};

/// Maximize tr(objective * rho) over density matrices whose diagonal in
/// each recorded basis matches the recorded outcome, rho PSD. With
/// relax_band > 0 the equalities are loosened to an l-infinity band
/// (useful for noisy data).
struct SdpProblem {
    Matrix objective;
    std::vector<OrthonormalBasis> bases;
    std::vector<ProbVec> diagonals;
    double relax_band = 0.0;
};

/// Generic rank-one-constrained SDP: maximize tr(objective * X) subject to
/// v_a^dagger X v_a = rhs_a for each constraint vector and X PSD. Solved by
/// a first-order splitting scheme (ADMM between the affine set and the PSD
/// cone) to objective tolerance ~1e-6, followed by an alternating-projection
/// feasibility polish.
struct RankOneSdp {
    Matrix objective;
    std::vector<Vector> constraint_vecs;
    Eigen::VectorXd rhs;
    double relax_band = 0.0;
    double tol = 1e-6;
    int max_iters = 50000;
};

Matrix solve_rank_one_sdp(const RankOneSdp& problem);

DensityMatrix solve_constrained_state(const SdpProblem& problem);

struct SeesawResult {
    DensityMatrix rho_hat;
    OrthonormalBasis u_next;  // eigenbasis of rho_hat, eigenvalues descending
    double objective = 0.0;
};

/// See-saw alternation: solve for the best feasible state under the current
/// weight matrix, then re-align the weight matrix with its eigenbasis
/// (the closed-form optimum diag(n..1) in that basis). Stops when the
/// objective improves by < 1e-7 or after 50 alternations.
SeesawResult seesaw_step(const MeasurementRecord& record, const Matrix& h_init);

struct AdaptiveRound {
    int round = 0;             // 0 = incoherent-basis measurement only
    int num_measurements = 1;  // round + 1
    double bound = 0.0;        // certified coherence lower bound, bits
    double exact = 0.0;        // cr_exact of the true state
    double ratio = 0.0;        // bound / exact (1 when both vanish)
};

/// Simulated adaptive run: measure the incoherent basis, then repeatedly
/// pick the next basis by see-saw, measure it on the true state, and
/// re-certify from the accumulated outcomes. Stops early once the bound
/// reaches the exact value. Randomness (the initial weight matrices) comes
/// from the supplied generator.
std::vector<AdaptiveRound> adaptive_loop(const DensityMatrix& true_state, int max_rounds,
                                         std::mt19937_64& rng);

/// CSV with header round,num_measurements,bound,exact,ratio.
void write_adaptive_csv(const std::vector<AdaptiveRound>& rounds, std::ostream& os);

/// Random Hermitian matrix with i.i.d. standard-normal entries,
/// symmetrized; the see-saw initializer.
Matrix random_hermitian(int n, std::mt19937_64& rng);

}  // namespace cohcert
