#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "cohcert/freezing.hpp"

using cohcert::DensityMatrix;
using cohcert::FreezingConfig;
using cohcert::FreezingRun;
using cohcert::LinearConstraintSet;
using cohcert::ProbVec;

namespace {

// Exact expectation values of the stabilizer observables on rho.
std::map<std::string, double> exact_expectations(int n, const DensityMatrix& rho) {
    const auto obs = cohcert::stabilizer_observables(n);
    std::map<std::string, double> e;
    for (const auto& o : obs) e[o.label()] = o.expectation(rho);
    return e;
}

DensityMatrix noisy_evolved_ghz(int n, double eps, double gamma_t,
                                cohcert::NoiseKind kind) {
    const DensityMatrix ghz = cohcert::ghz_state(n);
    const DensityMatrix prep = kind == cohcert::NoiseKind::dephasing
                                   ? cohcert::dephase_prep(ghz, eps)
                                   : cohcert::depolarize_prep(ghz, eps);
    return cohcert::bitflip_channel(prep, gamma_t);
}

}  // namespace

TEST_CASE("GHZ constraint polytope construction") {
    const DensityMatrix ghz = cohcert::ghz_state(3);
    const LinearConstraintSet x = cohcert::build_ghz_constraints(3, exact_expectations(3, ghz));

    // Equality block is the eigenvalue matrix; rhs all ones for the ideal
    // state (every stabilizer has expectation +1).
    const Eigen::MatrixXd b = cohcert::ghz_eigenvalue_matrix(3);
    REQUIRE(x.b().rows() == 5);
    CHECK((x.b() - b).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((x.beta() - Eigen::VectorXd::Ones(5)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(x.a().rows() == 8);

    // The meet of the ideal polytope is the point distribution.
    const ProbVec meet = cohcert::meet_over_constraints(x);
    CHECK(meet[0] == doctest::Approx(1.0).epsilon(1e-9));

    // N = 4: 2^{N-1} + 1 equalities, 2^N inequalities.
    const LinearConstraintSet x4 =
        cohcert::build_ghz_constraints(4, exact_expectations(4, cohcert::ghz_state(4)));
    CHECK(x4.b().rows() == 9);
    CHECK(x4.a().rows() == 16);
}

TEST_CASE("missing expectation values are reported by name") {
    std::map<std::string, double> e = exact_expectations(3, cohcert::ghz_state(3));
    e.erase("ZZI");
    CHECK_THROWS_WITH_AS((void)cohcert::build_ghz_constraints(3, e), doctest::Contains("ZZI"),
                         cohcert::ValidationError);
    e["ZZI"] = 1.0;
    e["YYI"] = 0.5;  // not a stabilizer label
    CHECK_THROWS_AS((void)cohcert::build_ghz_constraints(3, e), cohcert::ValidationError);
    e.erase("YYI");
    e["XXX"] = 1.5;  // out of range
    CHECK_THROWS_AS((void)cohcert::build_ghz_constraints(3, e), cohcert::ValidationError);
}

TEST_CASE("the meet recovers the k-largest sums of the true distribution") {
    // For the ideal GHZ state under bit-flip noise the constraints pin the
    // distribution up to permutations, so s_k must match the true GHZ-basis
    // probabilities.
    for (double gt : {0.3, 1.1}) {
        const DensityMatrix rho = noisy_evolved_ghz(3, 0.0, gt, cohcert::NoiseKind::dephasing);
        const LinearConstraintSet x = cohcert::build_ghz_constraints(3, exact_expectations(3, rho));
        const ProbVec meet = cohcert::meet_over_constraints(x);
        const auto p = cohcert::ghz_probabilities(rho).sorted_desc();
        double sp = 0.0, sm = 0.0;
        for (std::size_t k = 0; k < 8; ++k) {
            sp += p[k];
            sm += meet.sorted_desc()[k];
            CHECK(sm <= sp + 1e-8);  // the meet never overstates knowledge
        }
        // Equality of the full sums.
        CHECK(sm == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("permutation symmetrization") {
    for (int n : {3, 4}) {
        const DensityMatrix rho =
            noisy_evolved_ghz(n, 0.1, 0.7, cohcert::NoiseKind::depolarizing);
        const LinearConstraintSet x = cohcert::build_ghz_constraints(n, exact_expectations(n, rho));
        const cohcert::SymmetrizedLp lp = cohcert::symmetrize(x, n);

        const int nv = 2 * (n / 2) + 2;
        const int nr = (n + 1 + 1) / 2 + 1;  // ceil((N+1)/2) + 1
        CHECK(lp.eq.rows() == nr);
        CHECK(lp.eq.cols() == nv);
        CHECK(lp.mult.size() == nv);
        CHECK(lp.total_dim == (1 << n));
        // Class cardinalities: c_0 = 1, c_1 = N, halved at i = N/2.
        CHECK(lp.mult[0] == 1.0);
        if (n == 3) CHECK(lp.mult[1] == 3.0);
        if (n == 4) CHECK(lp.mult[2] == 3.0);
        CHECK(lp.mult.sum() == doctest::Approx(double(1 << n)));

        // Symmetrized and full meets agree on permutation-symmetric states.
        const ProbVec full = cohcert::meet_over_constraints(x);
        const ProbVec sym = cohcert::meet_over_constraints_symmetrized(lp);
        REQUIRE(full.size() == sym.size());
        for (std::size_t i = 0; i < full.size(); ++i) {
            CHECK(full.sorted_desc()[i] ==
                  doctest::Approx(sym.sorted_desc()[i]).scale(1.0).epsilon(1e-7));
        }
        for (int k = 1; k <= (1 << n); ++k) {
            CHECK(cohcert::sum_k_largest_min_symmetrized(lp, k) ==
                  doctest::Approx(cohcert::sum_k_largest_min(x, k)).scale(1.0).epsilon(1e-7));
        }
    }
}

TEST_CASE("symmetrize rejects constraints it was not built for") {
    Eigen::MatrixXd b = Eigen::MatrixXd::Ones(1, 8);
    const LinearConstraintSet foreign(Eigen::MatrixXd::Identity(8, 8),
                                      Eigen::VectorXd::Zero(8), b, Eigen::VectorXd::Ones(1));
    CHECK_THROWS_AS((void)cohcert::symmetrize(foreign, 3), cohcert::ValidationError);
}

TEST_CASE("configuration validation") {
    FreezingConfig c;
    c.validate();
    c.n_qubits = 1;
    CHECK_THROWS_AS(c.validate(), cohcert::ValidationError);
    c.n_qubits = 3;
    c.eps_list = {1.2};
    CHECK_THROWS_AS(c.validate(), cohcert::ValidationError);
    c.eps_list = {0.1};
    c.gamma_t_grid = {-0.5};
    CHECK_THROWS_AS(c.validate(), cohcert::ValidationError);
    c.gamma_t_grid = {0.0};
    c.shots = -1;
    CHECK_THROWS_AS(c.validate(), cohcert::ValidationError);

    const auto grid = FreezingConfig::default_grid();
    REQUIRE(grid.size() == 31);
    CHECK(grid.front() == 0.0);
    CHECK(grid.back() == doctest::Approx(3.0));
}

TEST_CASE("freezing run: ideal state certifies one full bit") {
    FreezingConfig c;
    c.n_qubits = 3;
    c.eps_list = {0.0};
    c.gamma_t_grid = {0.0, 0.5, 1.5};
    const FreezingRun run = cohcert::run_freezing(c);
    REQUIRE(run.points.size() == 3);
    for (const auto& pt : run.points) {
        CHECK(pt.fidelity == doctest::Approx(1.0));
        CHECK(pt.actual_cr == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(pt.bound_cr == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("freezing run: soundness and dephasing constancy") {
    FreezingConfig c;
    c.n_qubits = 3;
    c.noise = cohcert::NoiseKind::dephasing;
    c.eps_list = {0.1, 0.2};
    c.gamma_t_grid = {0.0, 0.4, 1.0, 2.0};
    const FreezingRun run = cohcert::run_freezing(c);
    REQUIRE(run.points.size() == 8);
    for (const auto& pt : run.points) {
        // Bound never exceeds the true coherence.
        CHECK(pt.bound_cr <= pt.actual_cr + 1e-7);
        // Independent recomputation of the true coherence.
        const DensityMatrix rho = noisy_evolved_ghz(3, pt.eps, pt.gamma_t, c.noise);
        CHECK(pt.actual_cr == doctest::Approx(cohcert::cr_exact(rho)).epsilon(1e-9));
        CHECK(pt.fidelity ==
              doctest::Approx(cohcert::ghz_fidelity(pt.eps, 3, c.noise)).epsilon(1e-10));
    }
    // Under dephasing preparation noise the coherence is frozen: for fixed
    // eps the actual value is flat across the whole bit-flip evolution.
    for (int block = 0; block < 2; ++block) {
        const double ref = run.points[std::size_t(4 * block)].actual_cr;
        for (int j = 1; j < 4; ++j) {
            CHECK(run.points[std::size_t(4 * block + j)].actual_cr ==
                  doctest::Approx(ref).epsilon(1e-9));
        }
    }
    // <X...X> is untouched by the bit-flip channel: the prepared value
    // persists along the trajectory.
    const auto obs = cohcert::stabilizer_observables(3);
    const auto& xxx = obs.back();
    const double x0 = xxx.expectation(noisy_evolved_ghz(3, 0.1, 0.0, c.noise));
    for (double gt : {0.4, 1.0, 2.0}) {
        CHECK(xxx.expectation(noisy_evolved_ghz(3, 0.1, gt, c.noise)) ==
              doctest::Approx(x0).epsilon(1e-10));
    }
}

TEST_CASE("freezing run: depolarizing noise is sound but not frozen") {
    FreezingConfig c;
    c.n_qubits = 3;
    c.noise = cohcert::NoiseKind::depolarizing;
    c.eps_list = {0.2};
    c.gamma_t_grid = {0.0, 1.0};
    c.symmetrized = true;
    const FreezingRun run = cohcert::run_freezing(c);
    REQUIRE(run.points.size() == 2);
    for (const auto& pt : run.points) CHECK(pt.bound_cr <= pt.actual_cr + 1e-7);
    // Depolarizing preparation at eps = 0.2 loses coherence along the
    // trajectory (no freezing).
    CHECK(run.points[1].actual_cr < run.points[0].actual_cr - 1e-6);
}

TEST_CASE("freezing run with sampled frequencies is reproducible") {
    FreezingConfig c;
    c.n_qubits = 3;
    c.eps_list = {0.1};
    c.gamma_t_grid = {0.0, 0.8};
    c.shots = 20000;
    c.seed = 7;
    const FreezingRun a = cohcert::run_freezing(c);
    const FreezingRun b = cohcert::run_freezing(c);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i].bound_cr == b.points[i].bound_cr);
        // Sampled bounds stay in the vicinity of the exact-value bound.
        CHECK(a.points[i].bound_cr >= 0.0);
        CHECK(a.points[i].bound_cr <= 1.0);
    }
}

TEST_CASE("CSV and JSON output") {
    FreezingConfig c;
    c.n_qubits = 3;
    c.eps_list = {0.0};
    c.gamma_t_grid = {0.0};
    const FreezingRun run = cohcert::run_freezing(c);

    std::ostringstream csv;
    cohcert::write_freezing_csv(run, csv);
    std::istringstream lines(csv.str());
    std::string header, row, extra;
    REQUIRE(std::getline(lines, header));
    CHECK(header == "noise,N,eps,fidelity,gamma_t,actual_cr,bound_cr");
    REQUIRE(std::getline(lines, row));
    CHECK(row.rfind("dephasing,3,0,", 0) == 0);
    CHECK_FALSE(std::getline(lines, extra));

    std::ostringstream csv2;
    cohcert::write_freezing_csv(run, csv2);
    CHECK(csv.str() == csv2.str());  // deterministic byte-for-byte

    std::ostringstream js;
    cohcert::write_freezing_summary(run, js);
    CHECK(js.str().find("\"n_qubits\"") != std::string::npos);
    CHECK(js.str().find("\"points\"") != std::string::npos);
}
