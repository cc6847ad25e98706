#ifndef FLPAA_MECHANISMS_HPP
#define FLPAA_MECHANISMS_HPP

#include <vector>

#include "flpaa/instance.hpp"
#include "flpaa/rational.hpp"

namespace flpaa {

// A sorted vector of quantile levels the designer queries before seeing any
// reports.
struct QueryPlan {
    std::vector<double> levels;

    explicit QueryPlan(std::vector<double> lv);
    int k() const { return static_cast<int>(levels.size()); }
};

// The n_u phantom levels driving a phantom quantile mechanism; the realized
// phantoms are the corresponding quantiles of the population measure.
struct PhantomVector {
    std::vector<double> levels;

    explicit PhantomVector(std::vector<double> lv);
    int size() const { return static_cast<int>(levels.size()); }
};

// Lower median: element ceil(m/2) (1-based) of the sorted vector.
double median_of(std::vector<double> v);

// Zero-information mechanism: the median of the reports. Requires n_r >= 1.
double median_mechanism(const Instance& inst);

// Phantom quantile mechanism: median of the reports merged with the realized
// phantoms F^[-1](w_j). Requires |w| == n_u and odd n.
double pqm(const Instance& inst, const PhantomVector& w, const PiecewiseUniform& mu);

// w_j = (2j-1)/(2 n_u): the phantom levels that make the mechanism optimal
// for every population measure.
PhantomVector optimal_phantoms(int n_u);

// Expands a k-level plan to n_u phantom levels: each relevant index j is
// assigned its nearest plan level (ties to the lower level); index j of the
// output carries that level, and indices outside the relevant range repeat
// the nearest extreme. Requires odd n.
PhantomVector lift(const QueryPlan& q, int n_r, int n_u);

// Largest index-aligned miss over the relevant indices:
//   max_{j in R} |w_j - (2j-1)/(2 n_u)|.
double delta(const PhantomVector& w, int n_r, int n_u);

// Nearest-level form: max_{j in R} min_l |q_l - (2j-1)/(2 n_u)|. Coincides
// with delta(lift(q)) on lifted vectors.
double delta_lift(const QueryPlan& q, int n_r, int n_u);

enum class Regime { zero, median, k_quantile, full };
enum class LowerRegime { zero, median, k_quantile_even_grid };

// Worst-case cost ratio guaranteed by the best truthful mechanism of each
// information regime. A plan is required for Regime::k_quantile. Returns
// +infinity when the ratio is unbounded (zero information with no reports,
// or a plan gap too large for the ratio formula).
double sar_upper(Regime regime, int n, int n_r, const QueryPlan* q = nullptr);

// Matching lower bounds. k is used by the even-grid regime only and must
// divide n_u; `asymptotic` selects the large-n form of the median bound.
double sar_lower(LowerRegime regime, int n, int n_r, int k = 0, bool asymptotic = false);

// Alternate closed form for the k-quantile lower bound (the summary-table
// variant); exposed separately because it does not algebraically agree with
// the even-grid bound.
double sar_lower_table_k(int n, int n_r, int k);

// Exact rational forms of the zero-information bound, derived two ways: from
// the agent counts and from the report fraction. They must agree exactly.
Rational sar_zero_rational_counts(int n, int n_r);
Rational sar_zero_rational_lambda(int n, int n_r);

// Plan minimizing delta_lift: partitions the relevant targets into k
// contiguous blocks as evenly as possible (first |R| mod k blocks one
// larger) and queries each block's midpoint. k > n_u degenerates to the
// optimal phantom levels.
QueryPlan optimal_query_plan(int k, int n_r, int n_u);

}  // namespace flpaa

#endif
