#include "cohcert/freezing.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "json.hpp"

namespace cohcert {

namespace {

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= static_cast<double>(n - i) / (i + 1);
    return r;
}

void check_qubit_count(int n_qubits, const char* where) {
    if (n_qubits < 2 || (1 << n_qubits) > DensityMatrix::max_dim) {
        throw ValidationError(std::string(where) + ": qubit count out of range [2, 12]");
    }
}

}  // namespace

LinearConstraintSet build_ghz_constraints(int n_qubits,
                                          const std::map<std::string, double>& expectations) {
    check_qubit_count(n_qubits, "build_ghz_constraints");
    const int n = 1 << n_qubits;
    const std::vector<std::string> labels = stabilizer_labels(n_qubits);
    const Eigen::MatrixXd b = ghz_eigenvalue_matrix(n_qubits);

    Eigen::VectorXd beta(b.rows());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto it = expectations.find(labels[i]);
        if (it == expectations.end()) {
            if (i == 0) {
                beta[0] = 1.0;  // normalization is implied
                continue;
            }
            throw ValidationError("build_ghz_constraints: missing expectation value for " +
                                  labels[i]);
        }
        if (std::abs(it->second) > 1.0 + 1e-9) {
            throw ValidationError("build_ghz_constraints: expectation value for " + labels[i] +
                                  " outside [-1, 1]");
        }
        beta[static_cast<Eigen::Index>(i)] = it->second;
    }
    for (const auto& [key, value] : expectations) {
        (void)value;
        if (std::find(labels.begin(), labels.end(), key) == labels.end()) {
            throw ValidationError("build_ghz_constraints: unknown observable label " + key);
        }
    }

    return LinearConstraintSet(Eigen::MatrixXd::Identity(n, n), Eigen::VectorXd::Zero(n),
                               b, beta);
}

SymmetrizedLp symmetrize(const LinearConstraintSet& x, int n_qubits) {
    check_qubit_count(n_qubits, "symmetrize");
    const int n = 1 << n_qubits;
    const int half = n / 2;
    const int kmax = n_qubits / 2;
    const int nv = 2 * (kmax + 1);

    if (x.dim() != n || x.b().rows() != half + 1 ||
        x.a().rows() != n ||
        (x.b() - ghz_eigenvalue_matrix(n_qubits)).cwiseAbs().maxCoeff() > 1e-9 ||
        (x.a() - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-9) {
        throw ValidationError("symmetrize: constraints are not in the GHZ stabilizer form");
    }

    SymmetrizedLp lp;
    lp.total_dim = n;
    lp.mult.resize(nv);
    for (int i = 0; i <= kmax; ++i) {
        double c = binomial(n_qubits, i);
        if (n_qubits % 2 == 0 && i == kmax) c /= 2.0;
        lp.mult[i] = c;
        lp.mult[kmax + 1 + i] = c;
    }

    // Class membership map: basis vector (s, j) with sign block s and label
    // bits j belongs to class min(w, N - w), w = popcount(j).
    Eigen::MatrixXd cmap = Eigen::MatrixXd::Zero(n, nv);
    for (int j = 0; j < half; ++j) {
        const int w = std::popcount(static_cast<unsigned>(j));
        const int cls = std::min(w, n_qubits - w);
        cmap(j, cls) = 1.0 / lp.mult[cls];
        cmap(half + j, kmax + 1 + cls) = 1.0 / lp.mult[kmax + 1 + cls];
    }

    // Group the Z-correlation rows by the (even) size of the measured subset.
    const int rows = kmax + 2;
    Eigen::MatrixXd grouped = Eigen::MatrixXd::Zero(rows, n);
    lp.beta = Eigen::VectorXd::Zero(rows);
    grouped.row(0) = x.b().row(0);
    lp.beta[0] = x.beta()[0];
    for (int mask = 1; mask < half; ++mask) {
        const int w = std::popcount(static_cast<unsigned>(mask));
        const int group = (w + 1) / 2;  // subset size 2*group
        grouped.row(group) += x.b().row(mask);
        lp.beta[group] += x.beta()[mask];
    }
    grouped.row(rows - 1) = x.b().row(half);
    lp.beta[rows - 1] = x.beta()[half];

    lp.eq = grouped * cmap;
    lp.ineq = Eigen::MatrixXd::Identity(nv, nv);
    lp.alpha = Eigen::VectorXd::Zero(nv);
    return lp;
}

double sum_k_largest_min_symmetrized(const SymmetrizedLp& lp, int k) {
    const int nv = static_cast<int>(lp.mult.size());
    const int m2 = static_cast<int>(lp.eq.rows());
    if (k < 1 || k > lp.total_dim) {
        throw ValidationError("sum_k_largest_min_symmetrized: k out of range");
    }

    LpProblem dual;
    dual.maximize = true;
    dual.c.resize(nv + m2);
    dual.c << lp.alpha, lp.beta;
    // w holds the per-class values of the dual certificate; the box and
    // cardinality constraints act classwise with multiplicity weights.
    Eigen::MatrixXd w(nv, nv + m2);
    w << lp.ineq.transpose(), lp.eq.transpose();
    dual.a_ub.resize(2 * nv, nv + m2);
    dual.a_ub << w, -w;
    dual.b_ub.resize(2 * nv);
    dual.b_ub << Eigen::VectorXd::Ones(nv), Eigen::VectorXd::Zero(nv);
    dual.a_eq = lp.mult.transpose() * w;
    dual.b_eq = Eigen::VectorXd::Constant(1, static_cast<double>(k));
    dual.free_vars.assign(nv + m2, false);
    for (int i = 0; i < m2; ++i) dual.free_vars[nv + i] = true;

    const LpSolution sol = solve_lp(dual);
    if (sol.status != LpStatus::optimal) {
        throw NumericError("sum_k_largest_min_symmetrized: dual LP not optimal for k=" +
                           std::to_string(k));
    }
    return sol.optimal_value;
}

ProbVec meet_over_constraints_symmetrized(const SymmetrizedLp& lp) {
    std::vector<double> c(static_cast<std::size_t>(lp.total_dim));
    double prev = 0.0;
    for (int k = 1; k <= lp.total_dim; ++k) {
        const double s = sum_k_largest_min_symmetrized(lp, k);
        c[static_cast<std::size_t>(k - 1)] = std::max(0.0, s - prev);
        prev = s;
    }
    return ProbVec(std::move(c));
}

std::vector<double> FreezingConfig::default_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 30; ++i) g.push_back(0.1 * i);
    return g;
}

void FreezingConfig::validate() const {
    if (n_qubits < 2 || n_qubits > 10) {
        throw ValidationError("FreezingConfig: qubit count out of range [2, 10]");
    }
    if (eps_list.empty()) throw ValidationError("FreezingConfig: empty noise-strength list");
    for (double e : eps_list) {
        if (!(e >= 0.0 && e <= 1.0)) {
            throw ValidationError("FreezingConfig: noise strength outside [0, 1]");
        }
    }
    for (double g : gamma_t_grid) {
        if (!(g >= 0.0) || !std::isfinite(g)) {
            throw ValidationError("FreezingConfig: gamma-t values must be finite and >= 0");
        }
    }
    if (shots < 0) throw ValidationError("FreezingConfig: negative shot count");
}

namespace {

// Draws a multinomial sample from p and returns the empirical frequencies.
std::vector<double> sample_frequencies(const std::vector<double>& p, int shots,
                                       std::mt19937_64& rng) {
    std::discrete_distribution<int> dist(p.begin(), p.end());
    std::vector<double> freq(p.size(), 0.0);
    for (int s = 0; s < shots; ++s) freq[static_cast<std::size_t>(dist(rng))] += 1.0;
    for (double& f : freq) f /= static_cast<double>(shots);
    return freq;
}

struct Expectations {
    std::map<std::string, double> values;
    ProbVec diagonal;  // the diagonal estimate fed to the bound
};

// Expectation values of the stabilizer observables, either exact or from a
// finite number of shots per local setting (Z^(x)N and X^(x)N).
Expectations gather_expectations(const DensityMatrix& rho, int n_qubits, int shots,
                                 std::mt19937_64& rng) {
    const int n = 1 << n_qubits;
    const std::vector<std::string> labels = stabilizer_labels(n_qubits);

    std::vector<double> zdiag(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) zdiag[static_cast<std::size_t>(i)] =
        std::max(0.0, rho(i, i).real());
    std::vector<double> xdiag(static_cast<std::size_t>(n));
    {
        // Outcome distribution of the all-X setting: diagonal of H^(x)N rho
        // H^(x)N, computed by a fast Walsh-Hadamard transform of each column.
        Matrix m = rho.entries();
        for (int bit = 0; bit < n_qubits; ++bit) {
            const int stride = 1 << bit;
            for (int side = 0; side < 2; ++side) {
                for (int i = 0; i < n; ++i) {
                    if ((i & stride) != 0) continue;
                    for (int j = 0; j < n; ++j) {
                        const std::complex<double> a = side == 0 ? m(i, j) : m(j, i);
                        const std::complex<double> b =
                            side == 0 ? m(i | stride, j) : m(j, i | stride);
                        if (side == 0) {
                            m(i, j) = (a + b) * std::sqrt(0.5);
                            m(i | stride, j) = (a - b) * std::sqrt(0.5);
                        } else {
                            m(j, i) = (a + b) * std::sqrt(0.5);
                            m(j, i | stride) = (a - b) * std::sqrt(0.5);
                        }
                    }
                }
            }
        }
        for (int i = 0; i < n; ++i) xdiag[static_cast<std::size_t>(i)] =
            std::max(0.0, m(i, i).real());
    }

    if (shots > 0) {
        zdiag = sample_frequencies(zdiag, shots, rng);
        xdiag = sample_frequencies(xdiag, shots, rng);
    }

    Expectations out{.values = {}, .diagonal = ProbVec(zdiag)};
    const int half = n / 2;
    for (std::size_t i = 0; i + 1 < labels.size(); ++i) {
        // Z_E expectation from the computational-basis outcomes: parity of
        // the outcome restricted to E. E is the mask over qubits 2..N plus
        // qubit 1 when that mask has odd weight.
        const int mask = static_cast<int>(i);
        int emask = mask;
        if (std::popcount(static_cast<unsigned>(mask)) % 2 == 1) emask |= half;
        double val = 0.0;
        for (int z = 0; z < n; ++z) {
            const int parity = std::popcount(static_cast<unsigned>(z & emask)) % 2;
            val += (parity == 0 ? 1.0 : -1.0) * zdiag[static_cast<std::size_t>(z)];
        }
        out.values[labels[i]] = val;
    }
    double xall = 0.0;
    for (int s = 0; s < n; ++s) {
        const int parity = std::popcount(static_cast<unsigned>(s)) % 2;
        xall += (parity == 0 ? 1.0 : -1.0) * xdiag[static_cast<std::size_t>(s)];
    }
    out.values[labels.back()] = xall;
    return out;
}

}  // namespace

FreezingRun run_freezing(const FreezingConfig& config_in) {
    FreezingConfig config = config_in;
    config.validate();
    if (config.gamma_t_grid.empty()) config.gamma_t_grid = FreezingConfig::default_grid();

    std::mt19937_64 rng(config.seed);
    FreezingRun run{.config = config, .points = {}};
    const DensityMatrix ghz = ghz_state(config.n_qubits);

    for (double eps : config.eps_list) {
        DensityMatrix prepared = config.noise == NoiseKind::dephasing
                                     ? dephase_prep(ghz, eps)
                                     : depolarize_prep(ghz, eps);
        const double fidelity = ghz_fidelity(eps, config.n_qubits, config.noise);

        for (double gt : config.gamma_t_grid) {
          try {
            const DensityMatrix rho = bitflip_channel(prepared, gt);
            const double actual = cr_exact(rho);

            Expectations est =
                gather_expectations(rho, config.n_qubits, config.shots, rng);

            if (eps == 0.0 && config.shots == 0) {
                // Sanity check for the ideal preparation: the computational
                // diagonal is half the "+"-block GHZ outcome, duplicated.
                const ProbVec q = ghz_probabilities(rho);
                const int n = 1 << config.n_qubits;
                for (int i = 0; i < n; ++i) {
                    const int rep = std::min(i, n - 1 - i);
                    const double expected =
                        0.5 * (q[static_cast<std::size_t>(rep)] +
                               q[static_cast<std::size_t>(n / 2 + rep)]);
                    if (std::abs(est.diagonal[static_cast<std::size_t>(i)] - expected) > 1e-9) {
                        throw NumericError("run_freezing: ideal-case diagonal consistency failed");
                    }
                }
            }

            const LinearConstraintSet constraints =
                build_ghz_constraints(config.n_qubits, est.values);
            const ProbVec meet =
                config.symmetrized
                    ? meet_over_constraints_symmetrized(symmetrize(constraints, config.n_qubits))
                    : meet_over_constraints(constraints);
            const double bound = cr_bound_join(est.diagonal, {meet});

            run.points.push_back({.eps = eps,
                                  .fidelity = fidelity,
                                  .gamma_t = gt,
                                  .actual_cr = actual,
                                  .bound_cr = bound});
          } catch (const std::runtime_error& e) {
            throw NumericError("run_freezing at eps=" + std::to_string(eps) +
                               ", gamma_t=" + std::to_string(gt) + ": " + e.what());
          }
        }
    }
    return run;
}

namespace {

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

const char* noise_name(NoiseKind k) {
    return k == NoiseKind::dephasing ? "dephasing" : "depolarizing";
}

}  // namespace

void write_freezing_csv(const FreezingRun& run, std::ostream& os) {
    os << "noise,N,eps,fidelity,gamma_t,actual_cr,bound_cr\n";
    for (const FreezingPoint& p : run.points) {
        os << noise_name(run.config.noise) << ',' << run.config.n_qubits << ','
           << fmt12(p.eps) << ',' << fmt12(p.fidelity) << ',' << fmt12(p.gamma_t) << ','
           << fmt12(p.actual_cr) << ',' << fmt12(p.bound_cr) << '\n';
    }
}

void write_freezing_summary(const FreezingRun& run, std::ostream& os) {
    nlohmann::json j;
    j["config"] = {{"noise", noise_name(run.config.noise)},
                   {"n_qubits", run.config.n_qubits},
                   {"eps_list", run.config.eps_list},
                   {"gamma_t_grid", run.config.gamma_t_grid},
                   {"symmetrized", run.config.symmetrized},
                   {"shots", run.config.shots},
                   {"seed", run.config.seed}};
    j["points"] = nlohmann::json::array();
    for (const FreezingPoint& p : run.points) {
        j["points"].push_back({{"eps", p.eps},
                               {"fidelity", p.fidelity},
                               {"gamma_t", p.gamma_t},
                               {"actual_cr", p.actual_cr},
                               {"bound_cr", p.bound_cr}});
    }
    os << j.dump(2) << '\n';
}

}  // namespace cohcert
