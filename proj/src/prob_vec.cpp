#include "cohcert/prob_vec.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cohcert {

ProbVec::ProbVec(std::vector<double> components) : raw_(std::move(components)) {
    if (raw_.empty()) {
        throw ValidationError("ProbVec: empty component list");
    }
    for (double& x : raw_) {
        if (std::isnan(x) || std::isinf(x)) {
            throw ValidationError("ProbVec: non-finite component");
        }
        if (x < 0.0) {
            if (x < -neg_tol) {
                throw ValidationError("ProbVec: negative component " + std::to_string(x));
            }
            x = 0.0;
        }
    }
    const double total = std::accumulate(raw_.begin(), raw_.end(), 0.0);
    if (std::abs(total - 1.0) > sum_tol) {
        throw ValidationError("ProbVec: components sum to " + std::to_string(total) +
                              ", expected 1 within " + std::to_string(sum_tol));
    }
    sorted_ = raw_;
    std::stable_sort(sorted_.begin(), sorted_.end(), std::greater<double>());
}

double ProbVec::sum() const {
    return std::accumulate(raw_.begin(), raw_.end(), 0.0);
}

bool majorizes(const ProbVec& a, const ProbVec& b) {
    if (a.size() != b.size()) {
        throw DimensionError("majorizes: length mismatch");
    }
    double sa = 0.0;
    double sb = 0.0;
    const auto& av = a.sorted_desc();
    const auto& bv = b.sorted_desc();
    for (std::size_t k = 0; k < av.size(); ++k) {
        sa += av[k];
        sb += bv[k];
        if (sa < sb - ProbVec::sum_tol) {
            return false;
        }
    }
    return true;
}

namespace detail {

std::vector<double> prefix_sums(const std::vector<double>& v) {
    std::vector<double> s(v.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        acc += v[i];
        s[i] = acc;
    }
    return s;
}

void flatten_to_descending(std::vector<double>& c) {
    const std::size_t n = c.size();
    std::size_t k = 1;
    while (k < n) {
        if (c[k] <= c[k - 1]) {
            ++k;
            continue;
        }
        // Find the largest l < k (0-based) such that the average of
        // c[l..k] does not exceed c[l-1]; l = 0 always qualifies.
        std::size_t l = k;
        double sum = c[k];
        std::size_t count = 1;
        while (l > 0) {
            sum += c[l - 1];
            ++count;
            --l;
            if (l == 0 || sum / static_cast<double>(count) <= c[l - 1]) {
                break;
            }
        }
        const double avg = sum / static_cast<double>(count);
        for (std::size_t i = l; i <= k; ++i) {
            c[i] = avg;
        }
        // Averaging may create a new inversion further right; resume at l.
        k = (l > 0) ? l : 1;
    }
}

}  // namespace detail

namespace {

void check_uniform_length(const std::vector<ProbVec>& vs) {
    if (vs.empty()) {
        throw ValidationError("lattice operation on empty list of vectors");
    }
    for (const ProbVec& v : vs) {
        if (v.size() != vs.front().size()) {
            throw DimensionError("lattice operation: length mismatch");
        }
    }
}

}  // namespace

ProbVec meet_finite(const std::vector<ProbVec>& vs) {
    check_uniform_length(vs);
    const std::size_t n = vs.front().size();
    std::vector<double> s(n, 0.0);
    bool first = true;
    for (const ProbVec& v : vs) {
        const auto ps = detail::prefix_sums(v.sorted_desc());
        for (std::size_t k = 0; k < n; ++k) {
            s[k] = first ? ps[k] : std::min(s[k], ps[k]);
        }
        first = false;
    }
    std::vector<double> c(n);
    double prev = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        c[k] = s[k] - prev;
        prev = s[k];
    }
    return ProbVec(std::move(c));
}

ProbVec join_finite(const std::vector<ProbVec>& vs) {
    check_uniform_length(vs);
    const std::size_t n = vs.front().size();
    std::vector<double> s(n, 0.0);
    for (const ProbVec& v : vs) {
        const auto ps = detail::prefix_sums(v.sorted_desc());
        for (std::size_t k = 0; k < n; ++k) {
            s[k] = std::max(s[k], ps[k]);
        }
    }
    std::vector<double> c(n);
    double prev = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        c[k] = s[k] - prev;
        prev = s[k];
    }
    detail::flatten_to_descending(c);
    return ProbVec(std::move(c));
}

double shannon_entropy(const ProbVec& p) {
    double h = 0.0;
    for (double x : p.raw()) {
        if (x > 0.0) {
            h -= x * std::log2(x);
        }
    }
    return h;
}

double linear_entropy(const ProbVec& p) {
    double q = 0.0;
    for (double x : p.raw()) {
        q += x * x;
    }
    return 1.0 - q;
}

}  // namespace cohcert
