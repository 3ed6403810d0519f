// cohcert: certify quantum coherence lower bounds from measurement data.
//
// Subcommands:
//   bound     certified coherence bounds from a JSON data file
//   freeze    GHZ coherence-freezing study (CSV + optional JSON summary)
//   adaptive  adaptive measurement simulation on a seeded random state
//   lattice   raw majorization join/meet of probability vectors
//
// Exit codes: 0 success, 2 input error, 3 infeasibility / numeric failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cohcert/adaptive.hpp"
#include "cohcert/coherence.hpp"
#include "cohcert/errors.hpp"
#include "cohcert/freezing.hpp"
#include "cohcert/linear_program.hpp"
#include "cohcert/prob_vec.hpp"
#include "cohcert/random.hpp"

namespace {

using nlohmann::json;

constexpr int exit_ok = 0;
constexpr int exit_input = 2;
constexpr int exit_numeric = 3;

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw cohcert::ValidationError("cannot open input file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw cohcert::ValidationError("JSON parse error in " + path + ": " + e.what());
    }
}

std::vector<double> as_vector(const json& j, const std::string& field) {
    if (!j.is_array()) throw cohcert::ValidationError("field '" + field + "' must be an array");
    std::vector<double> v;
    v.reserve(j.size());
    for (const auto& x : j) {
        if (!x.is_number()) {
            throw cohcert::ValidationError("field '" + field + "' must contain only numbers");
        }
        v.push_back(x.get<double>());
    }
    return v;
}

Eigen::MatrixXd as_matrix(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) {
        throw cohcert::ValidationError("field '" + field + "' must be a non-empty array of rows");
    }
    const std::size_t cols = j.front().size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < j.size(); ++r) {
        const std::vector<double> row = as_vector(j[r], field);
        if (row.size() != cols) {
            throw cohcert::ValidationError("field '" + field + "' has ragged rows");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
        }
    }
    return m;
}

int cmd_bound(const std::string& input_path) {
    const json doc = load_json_file(input_path);
    if (!doc.contains("diagonal")) {
        throw cohcert::ValidationError("input document must contain 'diagonal'");
    }
    const cohcert::ProbVec d(as_vector(doc["diagonal"], "diagonal"));

    std::vector<cohcert::ProbVec> measurements;
    if (doc.contains("measurements")) {
        const json& ms = doc["measurements"];
        if (!ms.is_array()) {
            throw cohcert::ValidationError("field 'measurements' must be an array of vectors");
        }
        for (std::size_t i = 0; i < ms.size(); ++i) {
            measurements.emplace_back(as_vector(ms[i], "measurements[" + std::to_string(i) + "]"));
            if (measurements.back().size() != d.size()) {
                throw cohcert::ValidationError("measurements[" + std::to_string(i) +
                                               "] length differs from diagonal");
            }
        }
    }

    std::optional<cohcert::LinearConstraintSet> constraints;
    if (doc.contains("constraints")) {
        const json& c = doc["constraints"];
        for (const char* f : {"A", "alpha", "B", "beta"}) {
            if (!c.contains(f)) {
                throw cohcert::ValidationError(std::string("constraints missing field '") + f +
                                               "'");
            }
        }
        const std::vector<double> alpha = as_vector(c["alpha"], "alpha");
        const std::vector<double> beta = as_vector(c["beta"], "beta");
        constraints.emplace(
            as_matrix(c["A"], "A"),
            Eigen::Map<const Eigen::VectorXd>(alpha.data(),
                                              static_cast<Eigen::Index>(alpha.size())),
            as_matrix(c["B"], "B"),
            Eigen::Map<const Eigen::VectorXd>(beta.data(),
                                              static_cast<Eigen::Index>(beta.size())));
        if (constraints->dim() != static_cast<int>(d.size())) {
            throw cohcert::ValidationError("constraint matrices' column count differs from "
                                           "diagonal length");
        }
    }

    const cohcert::CoherenceReport r =
        cohcert::make_report(d, measurements, constraints ? &*constraints : nullptr);
    json out = {{"cr_bound", r.cr_bound},
                {"cl2_bound", r.cl2_bound},
                {"cl1_bound", r.cl1_bound},
                {"robustness_bound", r.robustness_bound},
                {"cmax_bound", r.cmax_bound},
                {"crdelta_bound", r.crdelta_bound},
                {"cmaxdelta_bound", r.cmaxdelta_bound},
                {"inputs_digest", r.inputs_digest},
                {"positive", r.positive}};
    std::cout << out.dump(2) << '\n';
    return exit_ok;
}

std::vector<double> parse_grid(const std::string& spec) {
    double start = 0.0, stop = 0.0, step = 0.0;
    char c1 = 0, c2 = 0;
    std::istringstream in(spec);
    if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' ||
        !(in >> std::ws).eof()) {
        throw cohcert::ValidationError("--grid expects start:stop:step, got '" + spec + "'");
    }
    if (step <= 0.0 || stop < start) {
        throw cohcert::ValidationError("--grid requires step > 0 and stop >= start");
    }
    std::vector<double> g;
    for (int i = 0;; ++i) {
        const double v = start + i * step;
        if (v > stop + 1e-12) break;
        g.push_back(v);
    }
    return g;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"certified coherence lower bounds from few measurements"};
    app.require_subcommand(1);

    // bound
    std::string bound_input;
    CLI::App* bound = app.add_subcommand("bound", "bounds from a JSON data file");
    bound->add_option("input", bound_input, "JSON file with diagonal/measurements/constraints")
        ->required();

    // freeze
    cohcert::FreezingConfig fc;
    std::string freeze_noise = "dephasing";
    std::string freeze_grid;
    std::string freeze_out;
    std::string freeze_summary;
    CLI::App* freeze = app.add_subcommand("freeze", "GHZ coherence-freezing study");
    freeze->add_option("--n", fc.n_qubits, "qubit count (2-10)")->required();
    freeze->add_option("--noise", freeze_noise, "preparation noise: dephasing|depolarizing")
        ->check(CLI::IsMember({"dephasing", "depolarizing"}));
    freeze->add_option("--eps", fc.eps_list, "preparation noise strengths (repeatable)");
    freeze->add_option("--grid", freeze_grid, "gamma-t grid as start:stop:step");
    freeze->add_flag("--symmetrized", fc.symmetrized, "use the permutation-symmetrized LP");
    freeze->add_option("--shots", fc.shots, "shots per setting (0 = exact expectations)");
    freeze->add_option("--seed", fc.seed, "RNG seed for shot noise");
    freeze->add_option("--out", freeze_out, "CSV output path (default: stdout)");
    freeze->add_option("--summary", freeze_summary, "JSON summary output path");

    // adaptive
    int ad_dim = 10, ad_rank = 1, ad_rounds = 10;
    double ad_eps = 0.0;
    std::string ad_noise = "none";
    std::uint64_t ad_seed = 0;
    std::string ad_out;
    CLI::App* adaptive = app.add_subcommand("adaptive", "adaptive estimation on a random state");
    adaptive->add_option("--dim", ad_dim, "Hilbert-space dimension")->check(CLI::Range(2, 40));
    adaptive->add_option("--rank", ad_rank, "rank of the random state");
    adaptive->add_option("--noise", ad_noise, "state noise: none|dephasing|depolarizing")
        ->check(CLI::IsMember({"none", "dephasing", "depolarizing"}));
    adaptive->add_option("--eps", ad_eps, "noise strength")->check(CLI::Range(0.0, 1.0));
    adaptive->add_option("--seed", ad_seed, "RNG seed")->required();
    adaptive->add_option("--rounds", ad_rounds, "maximum adaptive rounds");
    adaptive->add_option("--out", ad_out, "CSV output path (default: stdout)");

    // lattice
    std::string lattice_op;
    std::string lattice_input;
    CLI::App* lattice = app.add_subcommand("lattice", "majorization join/meet of vectors");
    lattice->add_option("op", lattice_op, "join or meet")
        ->required()
        ->check(CLI::IsMember({"join", "meet"}));
    lattice->add_option("input", lattice_input, "JSON file: array of probability vectors")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_input;
    }

    try {
        if (*bound) return cmd_bound(bound_input);

        if (*freeze) {
            fc.noise = freeze_noise == "dephasing" ? cohcert::NoiseKind::dephasing
                                                   : cohcert::NoiseKind::depolarizing;
            if (!freeze_grid.empty()) fc.gamma_t_grid = parse_grid(freeze_grid);
            const cohcert::FreezingRun run = cohcert::run_freezing(fc);
            if (freeze_out.empty()) {
                cohcert::write_freezing_csv(run, std::cout);
            } else {
                std::ofstream out(freeze_out);
                if (!out) {
                    throw cohcert::ValidationError("cannot open output file: " + freeze_out);
                }
                cohcert::write_freezing_csv(run, out);
            }
            if (!freeze_summary.empty()) {
                std::ofstream out(freeze_summary);
                if (!out) {
                    throw cohcert::ValidationError("cannot open output file: " + freeze_summary);
                }
                cohcert::write_freezing_summary(run, out);
            }
            return exit_ok;
        }

        if (*adaptive) {
            std::mt19937_64 rng(ad_seed);
            cohcert::DensityMatrix state = cohcert::random_state(ad_dim, ad_rank, rng);
            if (ad_noise == "dephasing") {
                state = cohcert::dephase_global(state, ad_eps);
            } else if (ad_noise == "depolarizing") {
                cohcert::Matrix m = (1.0 - ad_eps) * state.entries() +
                                    (ad_eps / ad_dim) *
                                        cohcert::Matrix::Identity(ad_dim, ad_dim);
                state = cohcert::DensityMatrix(std::move(m));
            }
            const std::vector<cohcert::AdaptiveRound> rounds =
                cohcert::adaptive_loop(state, ad_rounds, rng);
            if (ad_out.empty()) {
                cohcert::write_adaptive_csv(rounds, std::cout);
            } else {
                std::ofstream out(ad_out);
                if (!out) throw cohcert::ValidationError("cannot open output file: " + ad_out);
                cohcert::write_adaptive_csv(rounds, out);
            }
            return exit_ok;
        }

        if (*lattice) {
            const json doc = load_json_file(lattice_input);
            if (!doc.is_array() || doc.empty()) {
                throw cohcert::ValidationError("lattice input must be a non-empty array of "
                                               "vectors");
            }
            std::vector<cohcert::ProbVec> vs;
            for (std::size_t i = 0; i < doc.size(); ++i) {
                vs.emplace_back(as_vector(doc[i], "vectors[" + std::to_string(i) + "]"));
            }
            const cohcert::ProbVec result =
                lattice_op == "join" ? cohcert::join_finite(vs) : cohcert::meet_finite(vs);
            std::cout << json(result.raw()).dump() << '\n';
            return exit_ok;
        }
    } catch (const cohcert::InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return exit_numeric;
    } catch (const cohcert::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return exit_numeric;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return exit_input;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input;
    }
    return exit_input;
}
