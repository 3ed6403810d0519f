#include "cohcert/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <ostream>

#include "cohcert/coherence.hpp"
#include "cohcert/errors.hpp"

namespace cohcert {

namespace {

Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint().eval()); }

Matrix psd_project(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

// Projection onto {X Hermitian | v_a^dagger X v_a = target_a}, with the
// Gram pseudo-inverse factored once up front.
class AffineProjector {
  public:
    AffineProjector(const std::vector<Vector>& vecs, Eigen::VectorXd rhs)
        : rhs_(std::move(rhs)) {
        const int n = static_cast<int>(vecs.front().size());
        const int m = static_cast<int>(vecs.size());
        v_.resize(n, m);
        for (int a = 0; a < m; ++a) {
            if (vecs[static_cast<std::size_t>(a)].size() != n) {
                throw DimensionError("AffineProjector: constraint vector size mismatch");
            }
            v_.col(a) = vecs[static_cast<std::size_t>(a)];
        }
        const Matrix overlaps = v_.adjoint() * v_;
        Eigen::MatrixXd gram = overlaps.cwiseAbs2();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
        const double cutoff = std::max(es.eigenvalues().maxCoeff(), 1.0) * 1e-12;
        Eigen::VectorXd inv = es.eigenvalues();
        for (int i = 0; i < inv.size(); ++i) inv[i] = inv[i] > cutoff ? 1.0 / inv[i] : 0.0;
        pinv_ = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
    }

    Eigen::VectorXd values(const Matrix& x) const {
        const Matrix xv = x * v_;
        Eigen::VectorXd c(v_.cols());
        for (int a = 0; a < v_.cols(); ++a) c[a] = v_.col(a).dot(xv.col(a)).real();
        return c;
    }

    // With band > 0 each equality is loosened to |value - rhs| <= band and
    // the projection targets the nearest point of that interval.
    Matrix project(const Matrix& x, double band, double* residual = nullptr) const {
        const Eigen::VectorXd c = values(x);
        Eigen::VectorXd target = rhs_;
        if (band > 0.0) {
            for (int a = 0; a < target.size(); ++a) {
                target[a] = std::clamp(c[a], rhs_[a] - band, rhs_[a] + band);
            }
        }
        const Eigen::VectorXd y = pinv_ * (target - c);
        const Matrix out = x + v_ * y.asDiagonal() * v_.adjoint();
        if (residual != nullptr) {
            *residual = (values(out) - target).cwiseAbs().maxCoeff();
        }
        return out;
    }

    const Eigen::VectorXd& rhs() const { return rhs_; }

  private:
    Matrix v_;
    Eigen::MatrixXd pinv_;
    Eigen::VectorXd rhs_;
};

// ADMM between the affine constraint set and the PSD cone, with
// over-relaxation and residual-balanced step-size adaptation. The iterates
// persist across maximize() calls so that a see-saw alternation (same
// constraints, slowly rotating objective) is warm-started.
class AdmmSolver {
  public:
    // With best_effort set, a stalled solve returns its current iterate
    // instead of throwing; callers that only need a heuristic (the see-saw
    // basis search) opt in.
    AdmmSolver(std::vector<Vector> vecs, Eigen::VectorXd rhs, double relax_band, double tol,
               int max_iters, bool best_effort = false)
        : aff_(vecs, std::move(rhs)),
          band_(relax_band),
          tol_(tol),
          best_effort_(best_effort),
          max_iters_(max_iters),
          n_(static_cast<int>(vecs.front().size())),
          z_(Matrix::Zero(n_, n_)),
          u_(Matrix::Zero(n_, n_)) {
        double res = 0.0;
        z_ = psd_project(hermitize(aff_.project(z_, band_, &res)));
        if (band_ == 0.0 && res > 1e-7) {
            throw InfeasibleError("constrained SDP: inconsistent affine constraints, residual " +
                                  std::to_string(res));
        }
    }

    Matrix maximize(const Matrix& objective) {
        const Matrix h = hermitize(objective);
        double tau = std::max(1.0, h.norm());
        constexpr double alpha = 1.6;  // over-relaxation
        const double rtol = best_effort_ ? 1e-6 : 3e-7;

        bool converged = false;
        int used = 0;
        Matrix rho;
        for (int it = 0; it < max_iters_; ++it) {
            used = it + 1;
            rho = aff_.project(hermitize(z_ - u_ + h / tau), band_);
            const Matrix rho_r = alpha * rho + (1.0 - alpha) * z_;
            const Matrix z_prev = z_;
            z_ = psd_project(hermitize(rho_r + u_));
            u_ += rho_r - z_;

            const double scale = 1.0 + z_.norm();
            const double rp = (rho - z_).norm() / scale;
            const double rd = tau * (z_ - z_prev).norm() / scale;
            if (rp < rtol && rd < rtol) {
                converged = true;
                break;
            }
            if (it % 25 == 24) {
                if (rp > 10.0 * rd) {
                    tau *= 2.0;
                    u_ *= 0.5;
                } else if (rd > 10.0 * rp) {
                    tau *= 0.5;
                    u_ *= 2.0;
                }
            }
        }
        if (std::getenv("COHCERT_SDP_TRACE") != nullptr) {
            std::fprintf(stderr, "admm iters=%d converged=%d\n", used, converged ? 1 : 0);
        }
        if (!converged && !best_effort_) {
            const double gap = (rho - z_).norm() / (1.0 + z_.norm());
            if (gap > std::max(1e-5, tol_)) {
                throw NumericError("constrained SDP: splitting scheme did not converge, "
                                   "residual " + std::to_string(gap));
            }
        }

        // Feasibility polish: plain alternating projections from the
        // solution. The affine-side iterate satisfies the constraints
        // exactly; accept it as soon as it is PSD to within 1e-9 (the final
        // state cleanup absorbs a defect of that size).
        Matrix x = z_;
        Matrix p = x;
        for (int it = 0; it < 2000; ++it) {
            p = aff_.project(x, band_);
            Eigen::SelfAdjointEigenSolver<Matrix> es(p);
            if (es.eigenvalues().minCoeff() > -1e-9) return p;
            x = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).asDiagonal() *
                es.eigenvectors().adjoint();
            if ((x - p).norm() < 1e-12 * (1.0 + x.norm())) break;
        }
        const double violation =
            (aff_.values(x) - aff_.rhs()).cwiseAbs().maxCoeff() - band_;
        if (violation > tol_ && !best_effort_) {
            throw NumericError("constrained SDP: constraint violation " +
                               std::to_string(violation) + " above tolerance");
        }
        return x;
    }

  private:
    AffineProjector aff_;
    double band_;
    double tol_;
    bool best_effort_;
    int max_iters_;
    int n_;
    Matrix z_;
    Matrix u_;
};

DensityMatrix to_state(const Matrix& x) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(x);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    const double tr = ev.sum();
    if (tr <= 0.0) throw NumericError("constrained SDP: zero-trace solution");
    ev /= tr;
    return DensityMatrix(es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint());
}

struct DiagonalConstraints {
    std::vector<Vector> vecs;
    Eigen::VectorXd rhs;
};

DiagonalConstraints diagonal_constraints(const std::vector<OrthonormalBasis>& bases,
                                         const std::vector<ProbVec>& diagonals) {
    if (bases.empty() || bases.size() != diagonals.size()) {
        throw ValidationError("constrained SDP: bases/diagonals mismatch");
    }
    const int n = bases.front().dim();
    DiagonalConstraints out;
    out.rhs.resize(static_cast<Eigen::Index>(bases.size()) * n);
    Eigen::Index a = 0;
    for (std::size_t i = 0; i < bases.size(); ++i) {
        if (bases[i].dim() != n || static_cast<int>(diagonals[i].size()) != n) {
            throw DimensionError("constrained SDP: dimension mismatch at basis " +
                                 std::to_string(i));
        }
        for (int j = 0; j < n; ++j) {
            out.vecs.push_back(bases[i].vec(j));
            out.rhs[a++] = diagonals[i][static_cast<std::size_t>(j)];
        }
    }
    return out;
}

}  // namespace

Matrix solve_rank_one_sdp(const RankOneSdp& problem) {
    const int n = static_cast<int>(problem.objective.rows());
    if (problem.objective.cols() != n || n < 1) {
        throw DimensionError("solve_rank_one_sdp: objective must be square");
    }
    if (problem.constraint_vecs.empty() ||
        static_cast<int>(problem.constraint_vecs.size()) != problem.rhs.size()) {
        throw DimensionError("solve_rank_one_sdp: constraint/rhs mismatch");
    }
    AdmmSolver solver(problem.constraint_vecs, problem.rhs, problem.relax_band, problem.tol,
                      problem.max_iters);
    return solver.maximize(problem.objective);
}

void MeasurementRecord::validate() const {
    if (bases.empty() || bases.size() != outcomes.size()) {
        throw ValidationError("MeasurementRecord: bases/outcomes length mismatch");
    }
    const int n = bases.front().dim();
    const Matrix identity = Matrix::Identity(n, n);
    if ((bases.front().columns() - identity).cwiseAbs().maxCoeff() > 1e-9) {
        throw ValidationError("MeasurementRecord: first basis must be the incoherent basis");
    }
    for (std::size_t i = 0; i < bases.size(); ++i) {
        if (bases[i].dim() != n || static_cast<int>(outcomes[i].size()) != n) {
            throw DimensionError("MeasurementRecord: dimension mismatch at entry " +
                                 std::to_string(i));
        }
    }
}

DensityMatrix solve_constrained_state(const SdpProblem& problem) {
    DiagonalConstraints dc = diagonal_constraints(problem.bases, problem.diagonals);
    AdmmSolver solver(std::move(dc.vecs), std::move(dc.rhs), problem.relax_band, 1e-6, 50000);
    return to_state(solver.maximize(problem.objective));
}

SeesawResult seesaw_step(const MeasurementRecord& record, const Matrix& h_init) {
    record.validate();
    const int n = record.bases.front().dim();
    if (h_init.rows() != n || h_init.cols() != n) {
        throw DimensionError("seesaw_step: weight matrix dimension mismatch");
    }

    // The see-saw state only steers the next basis choice; a slightly
    // infeasible or stalled solution is harmless, so the solver runs in
    // best-effort mode with a smaller iteration budget.
    DiagonalConstraints dc = diagonal_constraints(record.bases, record.outcomes);
    AdmmSolver solver(std::move(dc.vecs), std::move(dc.rhs), 0.0, 1e-4, 8000, true);

    Matrix objective = hermitize(h_init);
    Eigen::VectorXd weights(n);
    for (int i = 0; i < n; ++i) weights[i] = static_cast<double>(n - i);

    double prev = -std::numeric_limits<double>::infinity();
    SeesawResult result{.rho_hat = DensityMatrix(Matrix::Identity(n, n) * (1.0 / n)),
                        .u_next = OrthonormalBasis::computational(n),
                        .objective = 0.0};
    for (int it = 0; it < 50; ++it) {
        const DensityMatrix rho = to_state(solver.maximize(objective));

        Eigen::SelfAdjointEigenSolver<Matrix> es(rho.entries());
        // Eigen sorts ascending; flip to descending.
        Matrix v(n, n);
        Eigen::VectorXd lambda(n);
        for (int i = 0; i < n; ++i) {
            v.col(i) = es.eigenvectors().col(n - 1 - i);
            lambda[i] = es.eigenvalues()[n - 1 - i];
        }
        objective = v * weights.asDiagonal() * v.adjoint();

        const double value = lambda.dot(weights);
        result = SeesawResult{.rho_hat = rho,
                              .u_next = OrthonormalBasis(v),
                              .objective = value};
        if (value - prev < 1e-7) break;
        prev = value;
    }
    return result;
}

std::vector<AdaptiveRound> adaptive_loop(const DensityMatrix& true_state, int max_rounds,
                                         std::mt19937_64& rng) {
    if (max_rounds < 0) throw ValidationError("adaptive_loop: negative round count");
    const int n = true_state.dim();
    const ProbVec d = diagonal_part(true_state);
    const double exact = cr_exact(true_state);
    const auto ratio_of = [&](double bound) {
        return exact > 1e-15 ? bound / exact : 1.0;
    };

    MeasurementRecord record{.bases = {OrthonormalBasis::computational(n)},
                             .outcomes = {d}};
    std::vector<AdaptiveRound> rounds;
    rounds.push_back({.round = 0, .num_measurements = 1, .bound = 0.0, .exact = exact,
                      .ratio = ratio_of(0.0)});

    for (int r = 1; r <= max_rounds; ++r) {
        const SeesawResult step = seesaw_step(record, random_hermitian(n, rng));
        record.bases.push_back(step.u_next);
        record.outcomes.push_back(measure(true_state, step.u_next));

        const double bound = cr_bound_join(d, record.outcomes);
        rounds.push_back({.round = r,
                          .num_measurements = r + 1,
                          .bound = bound,
                          .exact = exact,
                          .ratio = ratio_of(bound)});
        if (exact > 0.0 && bound >= exact - 1e-9) break;
    }
    return rounds;
}

void write_adaptive_csv(const std::vector<AdaptiveRound>& rounds, std::ostream& os) {
    os << "round,num_measurements,bound,exact,ratio\n";
    char buf[128];
    for (const AdaptiveRound& r : rounds) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%.12g,%.12g,%.12g\n", r.round,
                      r.num_measurements, r.bound, r.exact, r.ratio);
        os << buf;
    }
}

Matrix random_hermitian(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            m(i, j) = std::complex<double>(gauss(rng), gauss(rng));
        }
    }
    return 0.5 * (m + m.adjoint().eval());
}

}  // namespace cohcert
