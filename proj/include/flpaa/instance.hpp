#ifndef FLPAA_INSTANCE_HPP
#define FLPAA_INSTANCE_HPP

#include <vector>

#include "flpaa/distributions.hpp"

namespace flpaa {

// A single-facility problem instance: a facility with capacity n and the
// sorted reports of the n_r deterministic agents. The remaining n_u = n - n_r
// seats are used by i.i.d. draws from the population measure.
class Instance {
public:
    Instance(int n, std::vector<double> reports);

    int n() const { return n_; }
    int n_r() const { return static_cast<int>(reports_.size()); }
    int n_u() const { return n_ - n_r(); }
    double lambda() const { return static_cast<double>(n_r()) / n_; }
    const std::vector<double>& reports() const { return reports_; }

private:
    int n_;
    std::vector<double> reports_;  // sorted nondecreasing
};

// Ex-ante social cost of placing the facility at y:
//   sum_i |x_i - y| + n_u * E|X - y|.
double esc(const Instance& inst, const PiecewiseUniform& mu, double y);

// The convex combination lambda * F_x + (1 - lambda) * F_mu of the empirical
// and population cdfs. Right-continuous, with a jump of lambda * mult / n_r at
// each distinct report.
class MixedCdf {
public:
    MixedCdf(Instance inst, PiecewiseUniform mu);

    const Instance& instance() const { return inst_; }
    const PiecewiseUniform& mu() const { return mu_; }

    double eval(double t) const;

    // inf{t : F(t) >= p}, 0 < p <= 1.
    double quantile(double p) const;

    // [lo, hi] with lo = F^[-1](1/2) and hi = sup{t : F(t-) <= 1/2}; the full
    // median set of the mixed cdf.
    std::pair<double, double> median_interval() const;

private:
    double eval_left_limit(std::size_t point_index) const;

    Instance inst_;
    PiecewiseUniform mu_;
    std::vector<double> points_;  // sorted merge of reports and segment endpoints
};

// The set of minimizers of the ex-ante social cost. Cost is constant on
// [lo, hi] and strictly larger outside. canonical == lo.
struct OptimalSet {
    double lo = 0.0;
    double hi = 0.0;
    double canonical = 0.0;
};

OptimalSet solve_optimal(const Instance& inst, const PiecewiseUniform& mu);

// Quantiles of mu that can host an optimum: F^[-1]((2j-1)/(2 n_u)) for odd n,
// F^[-1](j/n_u) for even n, j = 1..n_u. Empty when n_u == 0.
std::vector<double> candidate_set(int n, int n_u, const PiecewiseUniform& mu);

// Indices j in [1, n_u] whose quantile can be optimal for some report vector:
// consecutive integers (n+1)/2 - k for k = #{x_i <= y} ranging over its
// feasible values. Defined for odd n only.
std::vector<int> relevant_quantiles(int n_r, int n_u);

}  // namespace flpaa

#endif
