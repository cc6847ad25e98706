#ifndef FLPAA_ADVERSARY_HPP
#define FLPAA_ADVERSARY_HPP

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "flpaa/instance.hpp"
#include "flpaa/mechanisms.hpp"
#include "flpaa/two_facility.hpp"

namespace flpaa {

struct SinglePair {
    Instance inst;
    PiecewiseUniform mu;
};

struct TwoPair {
    TwoInstance inst;
    PiecewiseUniform mu;
};

using GeneratedInstance = std::variant<SinglePair, TwoPair>;

// A parameterized worst-case construction: generate(ell) yields the instance
// and measure at concentration level ell. limit_claim is the documented
// limit of the cost ratio for the family's intended mechanism (absent for
// families whose ratio diverges).
struct InstanceFamily {
    std::string name;
    std::function<GeneratedInstance(long)> generate;
    bool has_limit = false;
    double limit_claim = 1.0;
};

using Mechanism1 = std::function<double(const Instance&, const PiecewiseUniform&)>;
using Mechanism2 = std::function<TwoFacilityOutcome(const TwoInstance&, const PiecewiseUniform&)>;

struct RatioTrace {
    std::vector<long> ells;
    std::vector<double> ratios;
    std::vector<bool> divergent;  // per entry: optimal cost vanished while the mechanism cost did not
    bool has_limit = false;
    double limit_claim = 1.0;
};

// Half of the reports at 0, half at 1, population concentrating at 1; drives
// the report-median mechanism to its worst ratio.
InstanceFamily family_zero_info(int n, int n_r);

// Reports split between 0 and 1 with the population mass approaching an even
// split of the two points from below; drives the all-median phantom
// mechanism to its worst ratio. Requires 2 <= n_u <= n - 2.
InstanceFamily family_median_info(int n, int n_r);

// The even-grid construction: reports split between 0 and 1, population in
// three clusters keyed to the grid's two central levels. Evaluated against a
// fixed midpoint responder; its ratio converges to n/(n - sigma - 1) with
// sigma = n_u/k. Requires even k dividing n_u and odd n.
InstanceFamily family_k_quantile(int n, int n_r, int k);

// Worst case for the lifted-plan mechanism: two clusters separated so the
// mechanism lands one lift gap away from the optimum. The trace converges to
// the closed-form ratio at delta_lift(q). Requires n_r >= (n-1)/2.
InstanceFamily family_lift_gap(int n, int n_r, const QueryPlan& q);

// All reports at one point, population splitting between that point and a
// far cluster so the optimal two-facility cost vanishes; any fixed placement
// keeps positive cost, so ratios diverge. Requires n_r <= c.
InstanceFamily family_two_facility_unbounded(int c, int n_r);

// Convenience responder for the unbounded family: both facilities fixed.
Mechanism2 fixed_placement(double y1, double y2);

RatioTrace empirical_sar(const Mechanism1& mech, const InstanceFamily& family, const std::vector<long>& schedule);
RatioTrace empirical_sar(const Mechanism2& mech, const InstanceFamily& family, const std::vector<long>& schedule);

inline std::vector<long> default_schedule() { return {10, 100, 1000, 10000}; }

// Seeded random inputs shared by the fuzzers and the test batteries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    double uniform(double lo, double hi);
    int uniform_int(int lo, int hi);  // inclusive bounds

private:
    std::mt19937_64 gen_;
};

PiecewiseUniform random_mixture(Rng& rng, int max_segments = 8, double lo = -10.0, double hi = 10.0);
Instance random_instance(Rng& rng, int max_n = 15, bool odd_n = true);

struct FuzzReport {
    double worst_regret = 0.0;
    long trials = 0;
    std::uint64_t seed = 0;
    long worst_trial = -1;
};

using InstanceSampler1 = std::function<SinglePair(Rng&)>;
using InstanceSampler2 = std::function<TwoPair(Rng&)>;

// Samples (instance, agent, misreport) triples and reports the largest cost
// reduction any agent obtained by deviating. Truthful mechanisms stay at or
// below zero (up to rounding); deterministic for a fixed seed.
FuzzReport truthfulness_fuzz(const Mechanism1& mech, const InstanceSampler1& sampler, long trials,
                             std::uint64_t seed);
FuzzReport truthfulness_fuzz(const Mechanism2& mech, const InstanceSampler2& sampler, long trials,
                             std::uint64_t seed);

// Regret of one explicit deviation (positive when profitable).
double deviation_regret(const Mechanism1& mech, const SinglePair& p, int agent, double misreport);
double deviation_regret(const Mechanism2& mech, const TwoPair& p, int agent, double misreport);

// Brute-force minimizer of the ex-ante social cost over a grid augmented
// with every breakpoint (reports, segment endpoints, candidate quantiles).
std::pair<double, double> grid_oracle(const Instance& inst, const PiecewiseUniform& mu,
                                      std::pair<double, double> box, double step);

// Brute-force two-facility optimum over candidate facility pairs and all
// feasible prefix matchings.
double two_facility_oracle(const TwoInstance& inst, const PiecewiseUniform& mu);

}  // namespace flpaa

#endif
