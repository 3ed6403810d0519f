#include "cohcert/linear_program.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cohcert {

namespace {

constexpr double kPivotEps = 1e-9;
constexpr double kCostEps = 1e-9;
constexpr double kPhase1Tol = 1e-7;

/// Dense two-phase tableau simplex on the canonical form
///   min c^T x,  Ax = b,  x >= 0,  b >= 0.
class SimplexTableau {
  public:
    SimplexTableau(int m, int ncols) : m_(m), t_(m + 2, ncols + 1), basis_(m, -1) {
        t_.setZero();
    }

    Eigen::MatrixXd& t() { return t_; }
    std::vector<int>& basis() { return basis_; }

    // Runs the simplex on objective row `obj_row` over columns [0, ncol_limit).
    // Returns false on unboundedness.
    bool optimize(int obj_row, int ncol_limit, const std::vector<bool>& allowed) {
        const int rhs = static_cast<int>(t_.cols()) - 1;
        long iter = 0;
        const long bland_after = 40L * (m_ + ncol_limit);
        const long max_iter = 4000L * (m_ + ncol_limit) + 100000L;
        while (true) {
            if (++iter > max_iter) {
                throw NumericError("simplex: iteration limit exceeded");
            }
            const bool bland = iter > bland_after;
            int q = -1;
            double best = -kCostEps;
            for (int j = 0; j < ncol_limit; ++j) {
                if (!allowed[j]) continue;
                const double rc = t_(obj_row, j);
                if (bland) {
                    if (rc < -kCostEps) { q = j; break; }
                } else if (rc < best) {
                    best = rc;
                    q = j;
                }
            }
            if (q < 0) return true;  // optimal

            int r = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m_; ++i) {
                const double a = t_(i, q);
                if (a > kPivotEps) {
                    const double ratio = t_(i, rhs) / a;
                    if (ratio < best_ratio - 1e-12 ||
                        (ratio < best_ratio + 1e-12 && (r < 0 || basis_[i] < basis_[r]))) {
                        best_ratio = ratio;
                        r = i;
                    }
                }
            }
            if (r < 0) return false;  // unbounded
            pivot(r, q);
        }
    }

    void pivot(int r, int q) {
        t_.row(r) /= t_(r, q);
        for (int i = 0; i < t_.rows(); ++i) {
            if (i == r) continue;
            const double f = t_(i, q);
            if (f != 0.0) {
                t_.row(i) -= f * t_.row(r);
            }
        }
        basis_[r] = q;
    }

    int m() const { return m_; }

  private:
    int m_;
    Eigen::MatrixXd t_;
    std::vector<int> basis_;
};

}  // namespace

LpSolution solve_lp(const LpProblem& problem) {
    const int nv = static_cast<int>(problem.c.size());
    const int m1 = static_cast<int>(problem.a_ub.rows());
    const int m2 = static_cast<int>(problem.a_eq.rows());
    const int m = m1 + m2;
    if ((m1 > 0 && problem.a_ub.cols() != nv) || (m2 > 0 && problem.a_eq.cols() != nv)) {
        throw DimensionError("solve_lp: constraint matrix width mismatch");
    }
    for (int j = 0; j < nv; ++j) {
        if (!std::isfinite(problem.c[j])) throw ValidationError("solve_lp: non-finite objective");
    }

    std::vector<bool> is_free(nv, false);
    if (!problem.free_vars.empty()) {
        if (static_cast<int>(problem.free_vars.size()) != nv) {
            throw DimensionError("solve_lp: free_vars size mismatch");
        }
        is_free.assign(problem.free_vars.begin(), problem.free_vars.end());
    }
    // Split free variables into positive and negative parts.
    std::vector<int> neg_col(nv, -1);
    int n_struct = nv;
    for (int j = 0; j < nv; ++j) {
        if (is_free[j]) neg_col[j] = n_struct++;
    }

    // Count slack and artificial columns. Inequality rows with nonnegative
    // rhs start with their slack basic; everything else gets an artificial.
    int n_slack = m1;
    int n_art = 0;
    for (int i = 0; i < m1; ++i) {
        if (problem.b_ub[i] < 0.0) ++n_art;
    }
    n_art += m2;
    const int ncols = n_struct + n_slack + n_art;
    const int rhs = ncols;

    SimplexTableau tab(m, ncols);
    Eigen::MatrixXd& t = tab.t();
    std::vector<int>& basis = tab.basis();

    auto fill_struct = [&](int row, const Eigen::VectorXd& coeffs, double sign) {
        for (int j = 0; j < nv; ++j) {
            const double a = sign * coeffs[j];
            t(row, j) = a;
            if (neg_col[j] >= 0) t(row, neg_col[j]) = -a;
        }
    };

    int art = n_struct + n_slack;
    std::vector<int> art_cols;
    for (int i = 0; i < m1; ++i) {
        const double sign = (problem.b_ub[i] < 0.0) ? -1.0 : 1.0;
        fill_struct(i, problem.a_ub.row(i).transpose(), sign);
        t(i, n_struct + i) = sign;  // slack (surplus when the row was negated)
        t(i, rhs) = sign * problem.b_ub[i];
        if (sign < 0.0) {
            t(i, art) = 1.0;
            basis[i] = art;
            art_cols.push_back(art++);
        } else {
            basis[i] = n_struct + i;
        }
    }
    for (int i = 0; i < m2; ++i) {
        const int row = m1 + i;
        const double sign = (problem.b_eq[i] < 0.0) ? -1.0 : 1.0;
        fill_struct(row, problem.a_eq.row(i).transpose(), sign);
        t(row, rhs) = sign * problem.b_eq[i];
        t(row, art) = 1.0;
        basis[row] = art;
        art_cols.push_back(art++);
    }

    // Phase-2 objective (row m): minimize; maximization negates the cost.
    const double obj_sign = problem.maximize ? -1.0 : 1.0;
    for (int j = 0; j < nv; ++j) {
        t(m, j) = obj_sign * problem.c[j];
        if (neg_col[j] >= 0) t(m, neg_col[j]) = -obj_sign * problem.c[j];
    }
    // Phase-1 objective (row m+1): sum of artificials, expressed in reduced
    // costs with respect to the initial basis.
    for (int i = 0; i < m; ++i) {
        if (basis[i] >= n_struct + n_slack) {
            t.row(m + 1) -= t.row(i);
        }
    }
    for (int c : art_cols) t(m + 1, c) = 0.0;

    std::vector<bool> allowed(ncols, true);
    if (!art_cols.empty()) {
        if (!tab.optimize(m + 1, ncols, allowed)) {
            throw NumericError("simplex: phase 1 unbounded");
        }
        if (-t(m + 1, rhs) > kPhase1Tol) {
            return {LpStatus::infeasible, 0.0, {}};
        }
        // Drive any artificial still basic (at zero) out of the basis.
        for (int i = 0; i < m; ++i) {
            if (basis[i] >= n_struct + n_slack) {
                int q = -1;
                for (int j = 0; j < n_struct + n_slack; ++j) {
                    if (std::abs(t(i, j)) > kPivotEps) { q = j; break; }
                }
                if (q >= 0) tab.pivot(i, q);
                // else: redundant row, harmless to leave.
            }
        }
        for (int c : art_cols) allowed[c] = false;
    }

    if (!tab.optimize(m, n_struct + n_slack, allowed)) {
        return {LpStatus::unbounded, 0.0, {}};
    }

    Eigen::VectorXd x = Eigen::VectorXd::Zero(nv);
    for (int i = 0; i < m; ++i) {
        const int j = basis[i];
        if (j < 0 || j >= n_struct) continue;
        const double v = t(i, rhs);
        if (j < nv) {
            x[j] += v;
        } else {
            for (int orig = 0; orig < nv; ++orig) {
                if (neg_col[orig] == j) { x[orig] -= v; break; }
            }
        }
    }
    return {LpStatus::optimal, problem.c.dot(x), std::move(x)};
}

LinearConstraintSet::LinearConstraintSet(Eigen::MatrixXd a, Eigen::VectorXd alpha,
                                         Eigen::MatrixXd b, Eigen::VectorXd beta)
    : a_(std::move(a)), alpha_(std::move(alpha)), b_(std::move(b)), beta_(std::move(beta)) {
    const int n = static_cast<int>(std::max(a_.cols(), b_.cols()));
    if (n == 0) throw ValidationError("LinearConstraintSet: no variables");
    if (a_.rows() != alpha_.size() || b_.rows() != beta_.size()) {
        throw DimensionError("LinearConstraintSet: rhs length mismatch");
    }
    if (a_.rows() > 0 && b_.rows() > 0 && a_.cols() != b_.cols()) {
        throw DimensionError("LinearConstraintSet: matrix width mismatch");
    }
    if (a_.rows() == 0) a_.resize(0, n);
    if (b_.rows() == 0) b_.resize(0, n);

    // The simplex rows must be present; inject them if the caller omitted
    // them, with a warning.
    std::vector<bool> has_nonneg(n, false);
    for (int i = 0; i < a_.rows(); ++i) {
        if (alpha_[i] < -1e-12) continue;
        int unit_col = -1;
        bool is_unit_row = true;
        for (int j = 0; j < n && is_unit_row; ++j) {
            const double v = a_(i, j);
            if (std::abs(v - 1.0) < 1e-12) {
                if (unit_col >= 0) is_unit_row = false;
                unit_col = j;
            } else if (std::abs(v) > 1e-12) {
                is_unit_row = false;
            }
        }
        if (is_unit_row && unit_col >= 0) has_nonneg[unit_col] = true;
    }
    std::vector<int> missing;
    for (int j = 0; j < n; ++j) {
        if (!has_nonneg[j]) missing.push_back(j);
    }
    if (!missing.empty()) {
        const int m0 = static_cast<int>(a_.rows());
        a_.conservativeResize(m0 + missing.size(), n);
        alpha_.conservativeResize(m0 + missing.size());
        for (std::size_t idx = 0; idx < missing.size(); ++idx) {
            a_.row(m0 + idx).setZero();
            a_(m0 + idx, missing[idx]) = 1.0;
            alpha_[m0 + idx] = 0.0;
        }
    }
    bool has_norm = false;
    for (int i = 0; i < b_.rows(); ++i) {
        if ((b_.row(i).array() - 1.0).abs().maxCoeff() < 1e-9 && std::abs(beta_[i] - 1.0) < 1e-9) {
            has_norm = true;
        }
    }
    if (!has_norm) {
        const int m0 = static_cast<int>(b_.rows());
        b_.conservativeResize(m0 + 1, n);
        beta_.conservativeResize(m0 + 1);
        b_.row(m0).setOnes();
        beta_[m0] = 1.0;
    }

    // Feasibility check.
    LpProblem feas;
    feas.c = Eigen::VectorXd::Zero(n);
    feas.a_ub = -a_;
    feas.b_ub = -alpha_;
    feas.a_eq = b_;
    feas.b_eq = beta_;
    feas.free_vars.assign(n, true);
    if (solve_lp(feas).status == LpStatus::infeasible) {
        throw InfeasibleError("LinearConstraintSet: constraint set is empty");
    }
}

LinearConstraintSet LinearConstraintSet::singleton(const ProbVec& q) {
    const int n = static_cast<int>(q.size());
    Eigen::MatrixXd b = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd beta(n);
    for (int i = 0; i < n; ++i) beta[i] = q[i];
    return {Eigen::MatrixXd::Identity(n, n), Eigen::VectorXd::Zero(n), std::move(b),
            std::move(beta)};
}

LinearConstraintSet LinearConstraintSet::simplex(int n) {
    if (n < 1) throw ValidationError("simplex: dimension must be positive");
    return {Eigen::MatrixXd::Identity(n, n), Eigen::VectorXd::Zero(n),
            Eigen::MatrixXd::Ones(1, n), Eigen::VectorXd::Ones(1)};
}

double LinearConstraintSet::residual(const Eigen::VectorXd& p) const {
    double r = 0.0;
    if (a_.rows() > 0) {
        r = std::max(r, (alpha_ - a_ * p).maxCoeff());
    }
    if (b_.rows() > 0) {
        r = std::max(r, (b_ * p - beta_).lpNorm<Eigen::Infinity>());
    }
    return r;
}

double sum_k_largest_min(const LinearConstraintSet& x, int k) {
    const int n = x.dim();
    if (k < 1 || k > n) throw ValidationError("sum_k_largest_min: k out of range");
    const int m1 = static_cast<int>(x.a().rows());
    const int m2 = static_cast<int>(x.b().rows());

    LpProblem lp;
    lp.maximize = true;
    lp.c.resize(m1 + m2);
    lp.c << x.alpha(), x.beta();
    // w = A^T mu + B^T nu, constrained to the box [0, 1]^n.
    Eigen::MatrixXd w(n, m1 + m2);
    w << x.a().transpose(), x.b().transpose();
    lp.a_ub.resize(2 * n, m1 + m2);
    lp.a_ub << w, -w;
    lp.b_ub.resize(2 * n);
    lp.b_ub << Eigen::VectorXd::Ones(n), Eigen::VectorXd::Zero(n);
    lp.a_eq = w.colwise().sum();
    lp.b_eq = Eigen::VectorXd::Constant(1, static_cast<double>(k));
    lp.free_vars.assign(m1 + m2, false);
    for (int i = 0; i < m2; ++i) lp.free_vars[m1 + i] = true;

    const LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::optimal) {
        throw NumericError("sum_k_largest_min: dual LP not optimal for k=" + std::to_string(k));
    }
    return sol.optimal_value;
}

double sum_k_largest_min_primal(const LinearConstraintSet& x, int k) {
    const int n = x.dim();
    if (k < 1 || k > n) throw ValidationError("sum_k_largest_min_primal: k out of range");
    const int m1 = static_cast<int>(x.a().rows());
    const int m2 = static_cast<int>(x.b().rows());

    // Variables: p (n, free -- sign handled by X's rows), t (free), z (n, >= 0).
    const int nv = 2 * n + 1;
    LpProblem lp;
    lp.maximize = false;
    lp.c = Eigen::VectorXd::Zero(nv);
    lp.c[n] = static_cast<double>(k);
    lp.c.tail(n).setOnes();
    lp.a_ub.resize(n + m1, nv);
    lp.a_ub.setZero();
    lp.b_ub.resize(n + m1);
    // p - t 1 - z <= 0
    lp.a_ub.block(0, 0, n, n) = Eigen::MatrixXd::Identity(n, n);
    lp.a_ub.col(n).head(n).setConstant(-1.0);
    lp.a_ub.block(0, n + 1, n, n) = -Eigen::MatrixXd::Identity(n, n);
    lp.b_ub.head(n).setZero();
    // -A p <= -alpha
    lp.a_ub.block(n, 0, m1, n) = -x.a();
    lp.b_ub.tail(m1) = -x.alpha();
    lp.a_eq.resize(m2, nv);
    lp.a_eq.setZero();
    lp.a_eq.block(0, 0, m2, n) = x.b();
    lp.b_eq = x.beta();
    lp.free_vars.assign(nv, false);
    for (int j = 0; j <= n; ++j) lp.free_vars[j] = true;

    const LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::optimal) {
        throw NumericError("sum_k_largest_min_primal: LP not optimal for k=" +
                           std::to_string(k));
    }
    return sol.optimal_value;
}

ProbVec meet_over_constraints(const LinearConstraintSet& x) {
    const int n = x.dim();
    std::vector<double> c(n);
    double prev = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double s = sum_k_largest_min(x, k);
        c[k - 1] = std::max(0.0, s - prev);
        prev = s;
    }
    return ProbVec(std::move(c));
}

std::vector<Eigen::VectorXd> enumerate_vertices(const LinearConstraintSet& x) {
    const int n = x.dim();
    const int m1 = static_cast<int>(x.a().rows());
    const int m2 = static_cast<int>(x.b().rows());
    if (n > 12 || m1 + m2 > 64) {
        throw NumericError("enumerate_vertices: problem exceeds desk-scale limits");
    }
    if (m2 >= n) {
        // The equalities alone pin the point (they are feasible by
        // construction); no combinatorial search needed.
        const Eigen::VectorXd p = x.b().fullPivHouseholderQr().solve(x.beta());
        std::vector<Eigen::VectorXd> out;
        if (x.residual(p) <= 1e-9) out.push_back(p);
        return out;
    }
    const int pick = n - m2;
    // Guard against combinatorial blowup before enumerating.
    double combos = 1.0;
    for (int i = 0; i < pick; ++i) combos *= static_cast<double>(m1 - i) / (i + 1);
    if (combos > 2e6) {
        throw NumericError("enumerate_vertices: too many candidate bases");
    }

    std::vector<Eigen::VectorXd> vertices;
    std::vector<int> sel(pick);
    for (int i = 0; i < pick; ++i) sel[i] = i;

    Eigen::MatrixXd active(n, n);
    Eigen::VectorXd rhs(n);
    auto try_active_set = [&]() {
        active.topRows(m2) = x.b();
        rhs.head(m2) = x.beta();
        for (int i = 0; i < pick; ++i) {
            active.row(m2 + i) = x.a().row(sel[i]);
            rhs[m2 + i] = x.alpha()[sel[i]];
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(active);
        lu.setThreshold(1e-10);
        if (lu.rank() < n) return;
        Eigen::VectorXd p = lu.solve(rhs);
        if (x.residual(p) > 1e-9) return;
        for (const auto& v : vertices) {
            if ((v - p).lpNorm<Eigen::Infinity>() < 1e-9) return;
        }
        vertices.push_back(std::move(p));
    };

    if (pick == 0) {
        try_active_set();
        return vertices;
    }
    while (true) {
        try_active_set();
        int i = pick - 1;
        while (i >= 0 && sel[i] == m1 - pick + i) --i;
        if (i < 0) break;
        ++sel[i];
        for (int j = i + 1; j < pick; ++j) sel[j] = sel[j - 1] + 1;
    }
    return vertices;
}

ProbVec join_over_constraints(const LinearConstraintSet& x) {
    const auto vertices = enumerate_vertices(x);
    if (vertices.empty()) {
        throw NumericError("join_over_constraints: no vertices found");
    }
    std::vector<ProbVec> vs;
    vs.reserve(vertices.size());
    for (const auto& v : vertices) {
        std::vector<double> comps(v.size());
        for (int i = 0; i < v.size(); ++i) comps[i] = std::max(0.0, v[i]);
        vs.emplace_back(std::move(comps));
    }
    return join_finite(vs);
}

}  // namespace cohcert
