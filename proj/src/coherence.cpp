#include "cohcert/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cohcert {

double cr_exact(const DensityMatrix& rho) {
    return std::max(0.0, shannon_entropy(diagonal_part(rho)) - shannon_entropy(spectrum(rho)));
}

double cl2_exact(const DensityMatrix& rho) {
    double s = 0.0;
    for (int i = 0; i < rho.dim(); ++i) {
        for (int j = 0; j < rho.dim(); ++j) {
            if (i != j) s += std::norm(rho(i, j));
        }
    }
    return s;
}

double cl1_exact(const DensityMatrix& rho) {
    double s = 0.0;
    for (int i = 0; i < rho.dim(); ++i) {
        for (int j = 0; j < rho.dim(); ++j) {
            if (i != j) s += std::abs(rho(i, j));
        }
    }
    return s;
}

double cr_bound_rough(const ProbVec& d, const ProbVec& p) {
    if (d.size() != p.size()) throw DimensionError("cr_bound_rough: length mismatch");
    return std::max(0.0, shannon_entropy(d) - shannon_entropy(p));
}

double cr_bound_join(const ProbVec& d, const std::vector<ProbVec>& ps) {
    std::vector<ProbVec> all;
    all.reserve(ps.size() + 1);
    all.push_back(d);
    all.insert(all.end(), ps.begin(), ps.end());
    return std::max(0.0, shannon_entropy(d) - shannon_entropy(join_finite(all)));
}

double cr_bound_constraints(const ProbVec& d, const LinearConstraintSet& x) {
    return cr_bound_join(d, {meet_over_constraints(x)});
}

double cl2_bound(const ProbVec& d, const ProbVec& p_hat) {
    return std::max(0.0, linear_entropy(d) - linear_entropy(join_finite({d, p_hat})));
}

std::vector<double> vhat(const std::vector<double>& u) {
    if (u.empty()) throw ValidationError("vhat: empty weight vector");
    double total = 0.0;
    for (double x : u) total += x;
    if (total < 1.0 - 1e-9) {
        throw ValidationError("vhat: weights sum below 1, infeasible pair constraints");
    }
    std::vector<double> v(u.size(), 0.0);
    double acc = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (acc + u[k] <= 1.0 + 1e-12) {
            v[k] = u[k];
            acc += u[k];
        } else {
            v[k] = 1.0 - acc;
            break;
        }
    }
    return v;
}

namespace {

struct PairWeights {
    std::vector<double> u;        // 2 d_i d_j / C_l2, descending
    std::vector<double> inv_sqrt; // 1 / sqrt(d_i d_j), aligned with u
    std::vector<double> inv;      // 1 / (d_i d_j), aligned with u
};

// Pairs with d_i d_j = 0 contribute no off-diagonal mass (PSD) and are
// dropped before sorting.
PairWeights pair_weights(const ProbVec& d, double cl2) {
    std::vector<double> prods;
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (std::size_t j = i + 1; j < d.size(); ++j) {
            const double prod = d[i] * d[j];
            if (prod > 0.0) prods.push_back(prod);
        }
    }
    std::sort(prods.begin(), prods.end(), std::greater<double>());
    PairWeights w;
    w.u.reserve(prods.size());
    w.inv_sqrt.reserve(prods.size());
    w.inv.reserve(prods.size());
    for (double prod : prods) {
        w.u.push_back(2.0 * prod / cl2);
        w.inv_sqrt.push_back(1.0 / std::sqrt(prod));
        w.inv.push_back(1.0 / prod);
    }
    return w;
}

}  // namespace

double cl1_bound(const ProbVec& d, double cl2_lower) {
    if (cl2_lower < 0.0) throw ValidationError("cl1_bound: negative C_l2 estimate");
    if (cl2_lower <= 0.0) return 0.0;
    const PairWeights w = pair_weights(d, cl2_lower);
    if (w.u.empty()) {
        throw ValidationError("cl1_bound: no support overlap between diagonal entries");
    }
    const std::vector<double> v = vhat(w.u);
    double s = 0.0;
    for (double vk : v) s += std::sqrt(vk);
    return std::sqrt(2.0 * cl2_lower) * s;
}

double robustness_bound(const ProbVec& d, double cl2_lower) {
    if (cl2_lower < 0.0) throw ValidationError("robustness_bound: negative C_l2 estimate");
    if (cl2_lower <= 0.0) return 0.0;
    const PairWeights w = pair_weights(d, cl2_lower);
    if (w.u.empty()) {
        throw ValidationError("robustness_bound: no support overlap between diagonal entries");
    }
    const std::vector<double> v = vhat(w.u);
    double s = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        s += v[k] * w.inv_sqrt[k];
    }
    return cl2_lower * s;
}

double cmax_bound(const ProbVec& d, double cl2_lower) {
    return std::log2(1.0 + robustness_bound(d, cl2_lower));
}

CrDeltaBounds crdelta_bounds(const ProbVec& d, double cl2_lower,
                             const ProbVec& spectrum_estimate) {
    if (d.size() != spectrum_estimate.size()) {
        throw DimensionError("crdelta_bounds: length mismatch");
    }
    CrDeltaBounds out;
    if (cl2_lower > 0.0) {
        const PairWeights w = pair_weights(d, cl2_lower);
        if (w.u.empty()) {
            throw ValidationError("crdelta_bounds: no support overlap between diagonal entries");
        }
        const std::vector<double> v = vhat(w.u);
        double s = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k) {
            s += v[k] * w.inv[k];
        }
        out.h_based = cl2_lower * s / static_cast<double>(d.size());
    }
    const auto& c = spectrum_estimate.sorted_desc();
    const auto& ds = d.sorted_desc();
    double cs = 0.0, dsum = 0.0;
    for (std::size_t k = 0; k < ds.size(); ++k) {
        cs += c[k];
        dsum += ds[k];
        if (dsum <= 0.0) {
            throw ValidationError("crdelta_bounds: zero diagonal prefix");
        }
        out.spectrum_based = std::max(out.spectrum_based, cs / dsum - 1.0);
    }
    out.spectrum_based = std::max(0.0, out.spectrum_based);
    out.best = std::max(out.h_based, out.spectrum_based);
    return out;
}

double cmaxdelta_bound(const ProbVec& d, double cl2_lower,
                       const ProbVec& spectrum_estimate) {
    return std::log2(1.0 + crdelta_bounds(d, cl2_lower, spectrum_estimate).best);
}

CoherenceReport make_report(const ProbVec& d, const std::vector<ProbVec>& measurements,
                            const LinearConstraintSet* constraints) {
    std::vector<ProbVec> parts;
    parts.push_back(d);
    parts.insert(parts.end(), measurements.begin(), measurements.end());
    if (constraints != nullptr) {
        parts.push_back(meet_over_constraints(*constraints));
    }
    const ProbVec estimate = join_finite(parts);

    CoherenceReport r;
    r.cr_bound = std::max(0.0, shannon_entropy(d) - shannon_entropy(estimate));
    r.cl2_bound = std::max(0.0, linear_entropy(d) - linear_entropy(estimate));
    if (r.cl2_bound > 0.0) {
        r.cl1_bound = cl1_bound(d, r.cl2_bound);
        r.robustness_bound = robustness_bound(d, r.cl2_bound);
    }
    r.cmax_bound = std::log2(1.0 + r.robustness_bound);
    r.crdelta_bound = crdelta_bounds(d, r.cl2_bound, estimate).best;
    r.cmaxdelta_bound = std::log2(1.0 + r.crdelta_bound);

    std::ostringstream digest;
    digest << "diagonal(n=" << d.size() << ")";
    if (!measurements.empty()) {
        digest << " + " << measurements.size() << " measurement outcome(s)";
    }
    if (constraints != nullptr) {
        digest << " + constraint polytope (" << constraints->b().rows() << " eq, "
               << constraints->a().rows() << " ineq)";
    }
    r.inputs_digest = digest.str();

    const auto flag = [&](const char* name, double value) {
        if (value > 1e-12) r.positive.emplace_back(name);
    };
    flag("cr", r.cr_bound);
    flag("cl2", r.cl2_bound);
    flag("cl1", r.cl1_bound);
    flag("robustness", r.robustness_bound);
    flag("cmax", r.cmax_bound);
    flag("crdelta", r.crdelta_bound);
    flag("cmaxdelta", r.cmaxdelta_bound);
    return r;
}

}  // namespace cohcert
