#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"

#include "cohcert/adaptive.hpp"
#include "cohcert/coherence.hpp"
#include "cohcert/random.hpp"
#include "support/oracles.hpp"

using cohcert::DensityMatrix;
using cohcert::Matrix;
using cohcert::OrthonormalBasis;
using cohcert::ProbVec;
using cohcert::Vector;

TEST_CASE("rank-one SDP: correlation matrix of the plus state") {
    // max tr(rho X) over PSD X with unit diagonal, rho = |+><+|: the optimum
    // is X = all-ones with value 2.
    Matrix plus(2, 2);
    plus << 0.5, 0.5, 0.5, 0.5;
    cohcert::RankOneSdp sdp;
    sdp.objective = plus;
    sdp.rhs = Eigen::VectorXd::Ones(2);
    for (int i = 0; i < 2; ++i) {
        Vector e = Vector::Zero(2);
        e[i] = 1.0;
        sdp.constraint_vecs.push_back(e);
    }
    const Matrix x = cohcert::solve_rank_one_sdp(sdp);
    CHECK((plus * x).trace().real() == doctest::Approx(2.0).epsilon(1e-5));
    CHECK(std::abs(x(0, 0).real() - 1.0) <= 1e-5);
    CHECK(std::abs(x(1, 1).real() - 1.0) <= 1e-5);

    cohcert::RankOneSdp bad;
    bad.objective = plus;
    CHECK_THROWS_AS((void)cohcert::solve_rank_one_sdp(bad), cohcert::DimensionError);
}

TEST_CASE("constrained-state solve honours diagonal data") {
    // Maximize <+|rho|+> over states with fixed computational diagonal
    // (0.5, 0.5): the optimum is |+><+| itself.
    Matrix plus(2, 2);
    plus << 0.5, 0.5, 0.5, 0.5;
    cohcert::SdpProblem prob;
    prob.objective = plus;
    prob.bases = {OrthonormalBasis::computational(2)};
    prob.diagonals = {ProbVec({0.5, 0.5})};
    const DensityMatrix rho = cohcert::solve_constrained_state(prob);
    CHECK((rho.entries() - plus).cwiseAbs().maxCoeff() <= 1e-4);

    // Unequal diagonal: off-diagonal magnitude is capped by sqrt(d0 d1).
    cohcert::SdpProblem prob2;
    prob2.objective = plus;
    prob2.bases = {OrthonormalBasis::computational(2)};
    prob2.diagonals = {ProbVec({0.8, 0.2})};
    const DensityMatrix rho2 = cohcert::solve_constrained_state(prob2);
    CHECK(rho2(0, 0).real() == doctest::Approx(0.8).epsilon(1e-4));
    CHECK(std::abs(rho2(0, 1)) == doctest::Approx(std::sqrt(0.16)).epsilon(1e-3));
}

TEST_CASE("informationally complete data pins the state") {
    std::mt19937_64 rng(11);
    const int n = 3;
    const DensityMatrix target = cohcert::random_state(n, 2, rng);

    cohcert::SdpProblem prob;
    prob.bases.push_back(OrthonormalBasis::computational(n));
    prob.diagonals.push_back(cohcert::diagonal_part(target));
    for (int b = 0; b < 5; ++b) {
        const OrthonormalBasis basis(cohcert::random_unitary(n, rng));
        prob.bases.push_back(basis);
        prob.diagonals.push_back(cohcert::measure(target, basis));
    }
    prob.objective = cohcert::random_hermitian(n, rng);
    const DensityMatrix rho = cohcert::solve_constrained_state(prob);
    CHECK((rho.entries() - target.entries()).cwiseAbs().maxCoeff() <= 1e-5);
}

TEST_CASE("relaxed constraint bands admit nearby data") {
    // Diagonal data from two bases of a PURE state is slightly inconsistent
    // once perturbed: rejected as equalities, admitted inside a band.
    std::mt19937_64 rng(12);
    const int n = 3;
    const DensityMatrix target = cohcert::random_state(n, 1, rng);
    cohcert::SdpProblem prob;
    prob.bases.push_back(OrthonormalBasis::computational(n));
    std::vector<double> d = cohcert::diagonal_part(target).raw();
    const double shift = std::min(5e-3, std::min(d[0], 1.0 - d[0]));
    d[0] += shift;
    d[1] -= shift;
    prob.diagonals.push_back(ProbVec(d));
    for (int b = 0; b < 4; ++b) {
        const OrthonormalBasis basis(cohcert::random_unitary(n, rng));
        prob.bases.push_back(basis);
        prob.diagonals.push_back(cohcert::measure(target, basis));
    }
    prob.objective = Matrix::Identity(n, n);
    CHECK_THROWS_AS((void)cohcert::solve_constrained_state(prob), cohcert::InfeasibleError);

    prob.relax_band = 2e-2;
    const DensityMatrix rho = cohcert::solve_constrained_state(prob);
    // All reported diagonals reproduced within the band plus the trace
    // renormalization slack (each diagonal sums over n banded entries), so
    // the recovered state is close to the truth.
    const double slack = prob.relax_band * (1.0 + n) + 1e-3;
    for (std::size_t i = 0; i < prob.bases.size(); ++i) {
        const ProbVec got = cohcert::measure(rho, prob.bases[i]);
        for (std::size_t j = 0; j < std::size_t(n); ++j) {
            CHECK(std::abs(got[j] - prob.diagonals[i][j]) <= slack);
        }
    }
    CHECK((rho.entries() - target.entries()).cwiseAbs().maxCoeff() <= 0.2);
}

TEST_CASE("measurement record validation") {
    cohcert::MeasurementRecord rec;
    CHECK_THROWS_AS(rec.validate(), cohcert::ValidationError);
    rec.bases = {OrthonormalBasis::computational(2)};
    rec.outcomes = {ProbVec({0.5, 0.5})};
    rec.validate();

    std::mt19937_64 rng(3);
    cohcert::MeasurementRecord rot;
    rot.bases = {OrthonormalBasis(cohcert::random_unitary(2, rng))};
    rot.outcomes = {ProbVec({0.5, 0.5})};
    CHECK_THROWS_AS(rot.validate(), cohcert::ValidationError);
}

TEST_CASE("see-saw recovers a pure state from its diagonal") {
    // d = (1/2, 1/2) with maximal assumed coherence: the see-saw converges
    // to a pure state whose eigenbasis contains a maximally coherent vector.
    cohcert::MeasurementRecord rec;
    rec.bases = {OrthonormalBasis::computational(2)};
    rec.outcomes = {ProbVec({0.5, 0.5})};
    Matrix x(2, 2);
    x << 0, 1, 1, 0;
    const cohcert::SeesawResult res = cohcert::seesaw_step(rec, x);
    CHECK(res.objective == doctest::Approx(2.0).epsilon(1e-4));
    const ProbVec lam = cohcert::spectrum(res.rho_hat);
    CHECK(lam[0] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(std::abs(res.rho_hat(0, 1)) == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("see-saw fixed point at informationally complete data") {
    // When the record contains the true eigenbasis, the estimated spectrum
    // matches the true one.
    std::mt19937_64 rng(21);
    const int n = 4;
    DensityMatrix target = cohcert::random_state(n, 2, rng);
    target = cohcert::dephase_global(target, 0.05);  // full-rank-ish diagonal

    Eigen::SelfAdjointEigenSolver<Matrix> es(target.entries());
    const OrthonormalBasis eig(es.eigenvectors());
    cohcert::MeasurementRecord rec;
    rec.bases = {OrthonormalBasis::computational(n), eig};
    rec.outcomes = {cohcert::diagonal_part(target), cohcert::measure(target, eig)};

    const cohcert::SeesawResult res = cohcert::seesaw_step(rec, Matrix::Identity(n, n));
    const ProbVec est = cohcert::spectrum(res.rho_hat);
    const ProbVec truth = cohcert::spectrum(target);
    for (std::size_t i = 0; i < est.size(); ++i) {
        CHECK(std::abs(est[i] - truth[i]) <= 1e-4);
    }
}

TEST_CASE("adaptive loop on an incoherent state certifies nothing") {
    std::mt19937_64 rng(4);
    Matrix diag = Matrix::Zero(3, 3);
    diag(0, 0) = 0.2;
    diag(1, 1) = 0.5;
    diag(2, 2) = 0.3;
    const auto rounds = cohcert::adaptive_loop(DensityMatrix(diag), 3, rng);
    REQUIRE(rounds.size() == 4);
    for (const auto& r : rounds) {
        CHECK(r.bound == 0.0);
        CHECK(r.exact == 0.0);
        CHECK(r.ratio == 1.0);
    }
}

TEST_CASE("adaptive loop on a pure state converges to the exact value") {
    std::mt19937_64 rng(6);
    const DensityMatrix psi = oracles::random_pure_state(4, rng);
    const auto rounds = cohcert::adaptive_loop(psi, 6, rng);
    REQUIRE(!rounds.empty());
    const double exact = cohcert::cr_exact(psi);
    double prev = -1.0;
    for (const auto& r : rounds) {
        CHECK(r.exact == doctest::Approx(exact).epsilon(1e-10));
        CHECK(r.bound <= exact + 1e-6);   // soundness
        CHECK(r.bound >= prev - 1e-9);    // monotone trajectory
        prev = r.bound;
        CHECK(r.num_measurements == r.round + 1);
    }
    CHECK(rounds.back().bound == doctest::Approx(exact).epsilon(1e-4));
}

TEST_CASE("adaptive loop is sound on a noisy state") {
    std::mt19937_64 rng(9);
    DensityMatrix rho = cohcert::random_state(5, 1, rng);
    rho = cohcert::dephase_global(rho, 0.2);
    const double exact = cohcert::cr_exact(rho);
    const auto rounds = cohcert::adaptive_loop(rho, 4, rng);
    double prev = -1.0;
    for (const auto& r : rounds) {
        CHECK(r.bound <= exact + 1e-6);
        CHECK(r.bound >= prev - 1e-9);
        prev = r.bound;
    }
    CHECK(rounds.back().ratio >= 0.5);  // a handful of rounds already bites
}

TEST_CASE("adaptive CSV format") {
    std::vector<cohcert::AdaptiveRound> rounds = {
        {.round = 0, .num_measurements = 1, .bound = 0.0, .exact = 0.5, .ratio = 0.0},
        {.round = 1, .num_measurements = 2, .bound = 0.25, .exact = 0.5, .ratio = 0.5},
    };
    std::ostringstream os;
    cohcert::write_adaptive_csv(rounds, os);
    CHECK(os.str() ==
          "round,num_measurements,bound,exact,ratio\n"
          "0,1,0,0.5,0\n"
          "1,2,0.25,0.5,0.5\n");
}
