#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cohcert/linear_program.hpp"
#include "cohcert/prob_vec.hpp"
#include "cohcert/quantum.hpp"

namespace cohcert {

/// All certified lower bounds produced from one set of inputs. Entropic
/// bounds are in bits, the rest dimensionless. Every bound is clamped at 0;
/// the max-entropy bounds are tied to the robustness bounds by
/// cmax = log2(1 + robustness).
struct CoherenceReport {
    double cr_bound = 0.0;
    double cl2_bound = 0.0;
    double cl1_bound = 0.0;
    double robustness_bound = 0.0;
    double cmax_bound = 0.0;
    double crdelta_bound = 0.0;
    double cmaxdelta_bound = 0.0;
    std::string inputs_digest;
    std::vector<std::string> positive;  // names of strictly positive bounds
};

/// Exact relative entropy of coherence S(rho_d) - S(rho), in bits.
double cr_exact(const DensityMatrix& rho);

/// Exact l2 (Tsallis-2) coherence: sum of |rho_ij|^2 over i != j.
double cl2_exact(const DensityMatrix& rho);

/// Exact l1 coherence: sum of |rho_ij| over i != j.
double cl1_exact(const DensityMatrix& rho);

/// max{0, S(d) - S(p)}: the rough entropy-difference bound.
double cr_bound_rough(const ProbVec& d, const ProbVec& p);

/// S(d) - S(d v p_1 v ... v p_k), clamped at 0. Strictly positive whenever
/// some p_i is not majorized by d.
double cr_bound_join(const ProbVec& d, const std::vector<ProbVec>& ps);

/// Multipartite version: the measurement knowledge enters as the
/// majorization meet over the constraint polytope.
double cr_bound_constraints(const ProbVec& d, const LinearConstraintSet& x);

/// l2 bound S_L(d) - S_L(d v p_hat) for a given spectrum estimate p_hat
/// (a single outcome distribution, a join of several, or a constraint
/// meet).
double cl2_bound(const ProbVec& d, const ProbVec& p_hat);

/// The truncated-weight vector v_hat: v_k = u_k while the running sum stays
/// within 1, the remainder at the boundary, zero afterwards. Requires u
/// sorted descending with total at least 1.
std::vector<double> vhat(const std::vector<double>& u);

/// l1 bound f(C_l2, d) = sqrt(2 C_l2) * sum_k sqrt(v_hat_k), with
/// u = (2 d_i d_j / C_l2)_{i<j} sorted descending. Zero pairs of d are
/// dropped (the PSD constraint forces those off-diagonals to vanish).
double cl1_bound(const ProbVec& d, double cl2_lower);

/// Robustness bound g(C_l2, d): the pairwise objective
/// sum_k v_hat_k / sqrt(d_i d_j), scaled by C_l2.
double robustness_bound(const ProbVec& d, double cl2_lower);

/// log2(1 + robustness_bound).
double cmax_bound(const ProbVec& d, double cl2_lower);

struct CrDeltaBounds {
    double h_based = 0.0;
    double spectrum_based = 0.0;
    double best = 0.0;
};

/// Two lower bounds on C_{R,Delta}: the pairwise h-objective at v_hat, and
/// the prefix-ratio bound max_k (sum c_i / sum d_i) - 1 with
/// c = spectrum_estimate (= d v p_hat) and d sorted descending.
CrDeltaBounds crdelta_bounds(const ProbVec& d, double cl2_lower,
                             const ProbVec& spectrum_estimate);

/// log2(1 + best C_{R,Delta} bound).
double cmaxdelta_bound(const ProbVec& d, double cl2_lower,
                       const ProbVec& spectrum_estimate);

/// Assembles the full report from a diagonal plus measurement outcomes
/// and/or a constraint polytope (both optional, at least one informative
/// input recommended).
CoherenceReport make_report(const ProbVec& d, const std::vector<ProbVec>& measurements,
                            const LinearConstraintSet* constraints);

}  // namespace cohcert
