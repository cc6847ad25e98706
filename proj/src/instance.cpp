#include "flpaa/instance.hpp"

#include <algorithm>
#include <cmath>

namespace flpaa {

Instance::Instance(int n, std::vector<double> reports) : n_(n), reports_(std::move(reports)) {
    if (n_ < 1) fail(errc::domain, "capacity n must be positive");
    if (static_cast<int>(reports_.size()) > n_) fail(errc::domain, "more reports than capacity");
    std::sort(reports_.begin(), reports_.end());
}

double esc(const Instance& inst, const PiecewiseUniform& mu, double y) {
    double cost = 0.0;
    for (double x : inst.reports()) cost += std::abs(x - y);
    if (inst.n_u() > 0) cost += inst.n_u() * mu.mean_abs_dev(y);
    return cost;
}

MixedCdf::MixedCdf(Instance inst, PiecewiseUniform mu) : inst_(std::move(inst)), mu_(std::move(mu)) {
    points_ = inst_.reports();
    for (const Segment& s : mu_.segments()) {
        points_.push_back(s.lo);
        points_.push_back(s.hi);
    }
    std::sort(points_.begin(), points_.end());
    points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
}

double MixedCdf::eval(double t) const {
    const auto& x = inst_.reports();
    auto le = std::upper_bound(x.begin(), x.end(), t) - x.begin();
    double ec = static_cast<double>(le);
    return (ec + inst_.n_u() * mu_.cdf(t)) / inst_.n();
}

double MixedCdf::eval_left_limit(std::size_t i) const {
    const auto& x = inst_.reports();
    double t = points_[i];
    auto lt = std::lower_bound(x.begin(), x.end(), t) - x.begin();
    return (static_cast<double>(lt) + inst_.n_u() * mu_.cdf(t)) / inst_.n();
}

double MixedCdf::quantile(double p) const {
    if (!(p > 0.0) || p > 1.0) fail(errc::domain, "quantile level must be in (0, 1]");
    double prev_f = 0.0;
    double prev_t = points_.front();
    for (std::size_t i = 0; i < points_.size(); ++i) {
        double t = points_[i];
        double f_left = eval_left_limit(i);
        if (f_left >= p) {
            // F is linear and continuous on (prev_t, t); solve the piece.
            double slope = (f_left - prev_f) / (t - prev_t);
            return prev_t + (p - prev_f) / slope;
        }
        double f = eval(t);
        if (f >= p) return t;  // a report jump reaches p here
        prev_f = f;
        prev_t = t;
    }
    return points_.back();
}

std::pair<double, double> MixedCdf::median_interval() const {
    double lo = quantile(0.5);
    // hi = sup{t : F(t-) <= 1/2} = inf{t : F(t-) > 1/2}.
    double hi = points_.back();
    double prev_f = 0.0;
    double prev_t = points_.front();
    for (std::size_t i = 0; i < points_.size(); ++i) {
        double t = points_[i];
        double f_left = eval_left_limit(i);
        if (f_left > 0.5) {
            double slope = (f_left - prev_f) / (t - prev_t);
            hi = prev_t + (0.5 - prev_f) / slope;
            break;
        }
        double f = eval(t);
        if (f > 0.5) {
            hi = t;
            break;
        }
        prev_f = f;
        prev_t = t;
    }
    if (hi < lo) hi = lo;  // guards rounding when both land on one jump
    return {lo, hi};
}

OptimalSet solve_optimal(const Instance& inst, const PiecewiseUniform& mu) {
    MixedCdf f(inst, mu);
    auto [lo, hi] = f.median_interval();
    return {lo, hi, lo};
}

std::vector<double> candidate_set(int n, int n_u, const PiecewiseUniform& mu) {
    std::vector<double> out;
    if (n_u <= 0) return out;
    out.reserve(n_u);
    for (int j = 1; j <= n_u; ++j) {
        double level = (n % 2 != 0) ? (2.0 * j - 1.0) / (2.0 * n_u) : static_cast<double>(j) / n_u;
        out.push_back(mu.quantile(level));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> relevant_quantiles(int n_r, int n_u) {
    int n = n_r + n_u;
    if (n % 2 == 0) fail(errc::parity, "relevant quantile set is defined for odd n only");
    if (n_u < 1) fail(errc::domain, "relevant quantile set needs n_u >= 1");
    int half = (n + 1) / 2;
    int k_lo = std::max(0, half - n_u);
    int k_hi = std::min(n_r, (n - 1) / 2);
    std::vector<int> out;
    for (int k = k_hi; k >= k_lo; --k) out.push_back(half - k);
    return out;  // ascending j
}

}  // namespace flpaa
