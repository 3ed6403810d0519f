#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "cohcert/coherence.hpp"
#include "cohcert/linear_program.hpp"
#include "cohcert/quantum.hpp"

namespace cohcert {

/// Constraint polytope for the GHZ-basis outcome distribution, from the
/// expectation values of the two local settings: equality rows are the
/// GHZ-basis eigenvalue matrix (normalization, all even Z correlations,
/// X^(x)N), inequality rows are p >= 0. Keys of `expectations` are the
/// stabilizer labels ("III", "ZIZ", ..., "XXX").
LinearConstraintSet build_ghz_constraints(int n_qubits,
                                          const std::map<std::string, double>& expectations);

/// Permutation-symmetrized LP data: variables are the class sums s_i^+/-
/// for i = 0..floor(N/2); `mult` holds the class cardinalities.
struct SymmetrizedLp {
    Eigen::MatrixXd ineq;   // tilde(A) tilde(C): identity on the class sums
    Eigen::VectorXd alpha;  // zeros
    Eigen::MatrixXd eq;     // tilde(B) tilde(C)
    Eigen::VectorXd beta;
    Eigen::VectorXd mult;   // class cardinalities c_i^+/-
    int total_dim = 0;      // 2^N
};

/// Reduces GHZ constraints built by build_ghz_constraints to their
/// permutation-symmetric form: ceil((N+1)/2)+1 equality rows and
/// 2 floor(N/2)+2 variables.
SymmetrizedLp symmetrize(const LinearConstraintSet& x, int n_qubits);

/// s_k through the symmetrized dual LP (cardinality constraint weighted by
/// the class multiplicities).
double sum_k_largest_min_symmetrized(const SymmetrizedLp& lp, int k);

/// Majorization meet over the symmetrized polytope; agrees with the full
/// meet for permutation-symmetric states.
ProbVec meet_over_constraints_symmetrized(const SymmetrizedLp& lp);

struct FreezingConfig {
    int n_qubits = 3;
    NoiseKind noise = NoiseKind::dephasing;
    std::vector<double> eps_list = {0.0, 0.05, 0.1, 0.2};
    std::vector<double> gamma_t_grid;  // defaults to 0, 0.1, ..., 3.0
    bool symmetrized = false;
    int shots = 0;         // 0 = exact expectation values
    std::uint64_t seed = 0;

    static std::vector<double> default_grid();
    void validate() const;
};

struct FreezingPoint {
    double eps = 0.0;
    double fidelity = 1.0;
    double gamma_t = 0.0;
    double actual_cr = 0.0;
    double bound_cr = 0.0;
};

struct FreezingRun {
    FreezingConfig config;
    std::vector<FreezingPoint> points;
};

/// Full reproduction of the coherence-freezing study: noisy GHZ
/// preparation, bit-flip evolution over the gamma-t grid, exact coherence
/// vs the certified bound from the two local settings.
FreezingRun run_freezing(const FreezingConfig& config);

/// CSV with header noise,N,eps,fidelity,gamma_t,actual_cr,bound_cr and one
/// row per grid point, floats with 12 significant digits.
void write_freezing_csv(const FreezingRun& run, std::ostream& os);

/// JSON summary echoing the configuration and per-point results.
void write_freezing_summary(const FreezingRun& run, std::ostream& os);

}  // namespace cohcert
