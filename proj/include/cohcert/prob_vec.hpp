#pragma once

#include <span>
#include <vector>

#include "cohcert/errors.hpp"

namespace cohcert {

/// A finite probability distribution. The raw storage order is preserved
/// (measurement outcomes need not arrive sorted); a descending-sorted view
/// is cached at construction. Immutable after construction.
class ProbVec {
  public:
    /// Components below zero by at most `neg_tol` are clamped to 0; anything
    /// more negative, or a total mass outside [1 - sum_tol, 1 + sum_tol],
    /// is rejected.
    static constexpr double neg_tol = 1e-12;
    static constexpr double sum_tol = 1e-9;

    explicit ProbVec(std::vector<double> components);

    std::size_t size() const { return raw_.size(); }
    double operator[](std::size_t i) const { return raw_[i]; }

    /// Components in original storage order.
    const std::vector<double>& raw() const { return raw_; }

    /// Components sorted in descending order (stable, ties keep original
    /// relative order).
    const std::vector<double>& sorted_desc() const { return sorted_; }

    double sum() const;

    bool operator==(const ProbVec&) const = default;

  private:
    std::vector<double> raw_;
    std::vector<double> sorted_;
};

/// True iff every prefix sum of sorted(a) dominates the corresponding prefix
/// sum of sorted(b), each comparison with slack ProbVec::sum_tol.
bool majorizes(const ProbVec& a, const ProbVec& b);

/// Greatest lower bound of the given distributions in the majorization
/// order. The construction (prefix-sum minima, then differencing) yields a
/// vector that is already in descending order.
ProbVec meet_finite(const std::vector<ProbVec>& vs);

/// Least upper bound in the majorization order: prefix-sum maxima,
/// differenced, then flattened until descending.
ProbVec join_finite(const std::vector<ProbVec>& vs);

/// Shannon entropy in bits, with 0 log 0 := 0.
double shannon_entropy(const ProbVec& p);

/// Tsallis-2 (linear) entropy 1 - sum p_i^2.
double linear_entropy(const ProbVec& p);

namespace detail {

/// Flattening pass used by the majorization join: wherever c_k > c_{k-1},
/// average a maximal trailing run so that prefix sums never increase and the
/// result is non-increasing. The scan resumes at the start of each averaged
/// run to catch newly created inversions. Input need not sum to one.
void flatten_to_descending(std::vector<double>& c);

std::vector<double> prefix_sums(const std::vector<double>& v);

}  // namespace detail

}  // namespace cohcert
