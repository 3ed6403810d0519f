#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cohcert/errors.hpp"
#include "cohcert/prob_vec.hpp"

namespace cohcert {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    double optimal_value = 0.0;
    Eigen::VectorXd primal_point;  // empty unless status == optimal
};

/// A general dense LP:
///   optimize c^T x   subject to  A_ub x <= b_ub,  A_eq x = b_eq,
/// where x_j >= 0 unless free[j] is set. Matrices may have zero rows.
struct LpProblem {
    Eigen::VectorXd c;
    bool maximize = false;
    Eigen::MatrixXd a_ub;
    Eigen::VectorXd b_ub;
    Eigen::MatrixXd a_eq;
    Eigen::VectorXd b_eq;
    std::vector<bool> free_vars;  // empty means all variables nonnegative
};

/// Two-phase dense tableau simplex. Dantzig pricing with a Bland's-rule
/// fallback once the iteration count suggests cycling. Optimal solutions
/// satisfy primal feasibility residuals <= 1e-8.
LpSolution solve_lp(const LpProblem& problem);

/// The polytope X = {p | A p >= alpha, B p = beta} of distributions
/// consistent with linear measurement constraints. The simplex rows
/// (p >= 0 componentwise, 1^T p = 1) must be present; missing rows are
/// injected with a warning on stderr. Feasibility is checked at
/// construction.
class LinearConstraintSet {
  public:
    LinearConstraintSet(Eigen::MatrixXd a, Eigen::VectorXd alpha,
                        Eigen::MatrixXd b, Eigen::VectorXd beta);

    /// Convenience: the polytope containing exactly one point q.
    static LinearConstraintSet singleton(const ProbVec& q);

    /// Only the simplex itself: p >= 0, 1^T p = 1.
    static LinearConstraintSet simplex(int n);

    int dim() const { return static_cast<int>(a_.cols()); }
    const Eigen::MatrixXd& a() const { return a_; }
    const Eigen::VectorXd& alpha() const { return alpha_; }
    const Eigen::MatrixXd& b() const { return b_; }
    const Eigen::VectorXd& beta() const { return beta_; }

    /// Largest componentwise violation of the constraints at p.
    double residual(const Eigen::VectorXd& p) const;

  private:
    Eigen::MatrixXd a_;
    Eigen::VectorXd alpha_;
    Eigen::MatrixXd b_;
    Eigen::VectorXd beta_;
};

/// s_k = min_{p in X} (sum of the k largest components of p), computed via
/// the dual LP: max alpha^T mu + beta^T nu s.t. 0 <= A^T mu + B^T nu <= 1,
/// 1^T (A^T mu + B^T nu) = k, mu >= 0.
double sum_k_largest_min(const LinearConstraintSet& x, int k);

/// Same value via the primal epigraph LP
///   min k t + 1^T z  s.t.  z >= p - t 1, z >= 0, p in X.
/// Kept as an independent oracle for the dual path.
double sum_k_largest_min_primal(const LinearConstraintSet& x, int k);

/// Majorization meet over all distributions in X: components are the
/// differences of consecutive s_k. The result is in descending order.
ProbVec meet_over_constraints(const LinearConstraintSet& x);

/// All vertices (basic feasible solutions) of X, deduplicated at 1e-9
/// resolution. Desk scale only: dim <= 12 and at most 64 constraint rows.
std::vector<Eigen::VectorXd> enumerate_vertices(const LinearConstraintSet& x);

/// Majorization join over X, via vertex enumeration: the k-largest sums are
/// maximized at extreme points, so this reduces to join_finite over the
/// vertex list.
ProbVec join_over_constraints(const LinearConstraintSet& x);

}  // namespace cohcert
