#ifndef FLPAA_DISTRIBUTIONS_HPP
#define FLPAA_DISTRIBUTIONS_HPP

#include <vector>

#include "flpaa/errors.hpp"

namespace flpaa {

// One uniform piece of a mixture: density mass/(hi-lo) on (lo, hi).
struct Segment {
    double lo = 0.0;
    double hi = 0.0;
    double mass = 0.0;
};

// Absolutely continuous probability measure on the line, represented as a
// finite mixture of uniform segments. Bounded support, so the first moment is
// always finite. Everything (cdf, pseudo-inverse, expected absolute
// deviation) is evaluated in closed form.
//
// Immutable after construction; all member functions are const and
// thread-safe.
class PiecewiseUniform {
public:
    // Validates and normalizes. Segments must satisfy lo < hi, be sorted by
    // lo with pairwise-disjoint interiors (touching endpoints allowed), and
    // carry positive masses. Total mass is normalized to one when it is
    // within 1e-9 of one; otherwise the input is rejected.
    explicit PiecewiseUniform(std::vector<Segment> segments);

    static PiecewiseUniform uniform(double lo, double hi) { return PiecewiseUniform({{lo, hi, 1.0}}); }

    const std::vector<Segment>& segments() const { return segments_; }
    double support_lo() const { return segments_.front().lo; }
    double support_hi() const { return segments_.back().hi; }
    double mean() const;

    // F(t) = P(X <= t). Nondecreasing, 0 before the support, 1 after it,
    // piecewise linear inside segments.
    double cdf(double t) const;

    // Pseudo-inverse F^[-1](p) = inf{t : F(t) >= p}. On a flat stretch of the
    // cdf the infimum is the left endpoint. Requires 0 < p <= 1.
    double quantile(double p) const;

    // E|X - y| in closed form.
    double mean_abs_dev(double y) const;

    // Unnormalized partial deviations used by the two-facility split:
    // integral of |x - y| over {x <= z} (resp. {x > z}) against the measure.
    double abs_dev_below(double z, double y) const;
    double abs_dev_above(double z, double y) const;

    // The measure conditioned on the lowest (resp. highest) share of its
    // mass: everything below (above) the p-quantile, renormalized.
    // Requires 0 < p < 1 (p <= ... below) strictly inside the unit interval.
    PiecewiseUniform truncated_below(double p) const;
    PiecewiseUniform truncated_above(double p) const;

private:
    std::vector<Segment> segments_;
    std::vector<double> cum_;  // cumulative mass at each segment's hi
};

enum class Side { left, right, centered };

struct Atom {
    double point = 0.0;
    double weight = 0.0;
};

// A sequence of absolutely continuous measures converging to a discrete one:
// realize(ell) puts each atom's weight on a width-1/ell uniform segment glued
// to the atom on the declared side. This is how point masses are expressed
// throughout the library; they are never represented directly.
class ConcentrationFamily {
public:
    ConcentrationFamily(std::vector<Atom> atoms, Side side);

    const std::vector<Atom>& atoms() const { return atoms_; }
    Side side() const { return side_; }

    // Requires ell >= 1 and that the realized segments do not overlap.
    PiecewiseUniform realize(long ell) const;

    // Limit of mean_abs_dev(realize(ell), y) as ell grows.
    double limit_abs_dev(double y) const;

private:
    std::vector<Atom> atoms_;  // sorted by point
    Side side_;
};

}  // namespace flpaa

#endif
