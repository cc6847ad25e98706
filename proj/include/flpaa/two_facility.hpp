#ifndef FLPAA_TWO_FACILITY_HPP
#define FLPAA_TWO_FACILITY_HPP

#include <vector>

#include "flpaa/distributions.hpp"
#include "flpaa/mechanisms.hpp"

namespace flpaa {

// Two facilities with equal capacity c, total capacity n = 2c.
class TwoInstance {
public:
    TwoInstance(int c, std::vector<double> reports);

    int c() const { return c_; }
    int n() const { return 2 * c_; }
    int n_r() const { return static_cast<int>(reports_.size()); }
    int n_u() const { return n() - n_r(); }
    double lambda() const { return static_cast<double>(n_r()) / n(); }
    const std::vector<double>& reports() const { return reports_; }

private:
    int c_;
    std::vector<double> reports_;  // sorted
};

// A facility pair, an agent-to-facility matching, and the aleatory split.
// Aleatory draws below threshold_z go to facility 1, the rest to facility 2;
// the threshold is the n_u1/n_u quantile of the population measure so each
// facility's expected load matches its spare capacity.
struct TwoFacilityOutcome {
    double y1 = 0.0;
    double y2 = 0.0;
    std::vector<int> matching;  // per report, 1 or 2
    int spare1 = 0;
    int spare2 = 0;
    bool has_threshold = false;  // false when n_u == 0 or a spare is zero
    double threshold_z = 0.0;
};

// Builds an outcome from a facility pair and matching, deriving spares and
// the aleatory threshold. Rejects matchings that overload a facility.
TwoFacilityOutcome make_outcome(const TwoInstance& inst, const PiecewiseUniform& mu, double y1, double y2,
                                std::vector<int> matching);

// Nearest-facility matching, ties to facility 1; when a side would exceed
// its capacity the agents nearest the midpoint overflow to the other side.
std::vector<int> nearest_matching(const TwoInstance& inst, double y1, double y2);

// Matched distances plus the closed-form aleatory cost of the threshold
// split.
double esc2(const TwoInstance& inst, const PiecewiseUniform& mu, const TwoFacilityOutcome& out);

// Exact optimum: facilities at the 1/4 and 3/4 quantiles of the mixed cdf,
// agents split at its median; agents sitting exactly on the split point are
// assigned by exhaustive trial, ties preferring facility 1.
TwoFacilityOutcome solve_optimal2(const TwoInstance& inst, const PiecewiseUniform& mu);

// Truthful mechanisms. z denotes the sorted merge of the reports with the
// realized optimal phantom quantiles.

// Few reports (n_r <= c): facilities at z_{floor((c+1)/2)} and
// z_{n - floor(c/2)}, nearest-facility matching.
TwoFacilityOutcome pom(const TwoInstance& inst, const PiecewiseUniform& mu);

// Many reports (n_r > c): facilities at max{x_{n_r-c}, z_{ceil(c/2)}} and
// min{x_{c+1}, z_{n - floor(c/2)}}.
TwoFacilityOutcome aqm(const TwoInstance& inst, const PiecewiseUniform& mu);

// Zero information, many reports: facilities at x_c and x_{c+1}. With
// n_r <= c no truthful mechanism has a bounded ratio, so that regime is
// rejected.
TwoFacilityOutcome igm(const TwoInstance& inst, const PiecewiseUniform& mu);

// Quantile budget k with the even grid q_j = (2j-1)/(2k) (the only plan with
// a truthfulness guarantee; others are rejected). Endpoint rule for
// n_r <= c, the amended-quartile rule otherwise.
TwoFacilityOutcome cem(const TwoInstance& inst, const PiecewiseUniform& mu, const QueryPlan& q);

}  // namespace flpaa

#endif
