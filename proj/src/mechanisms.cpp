#include "flpaa/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace flpaa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double target_level(int j, int n_u) { return (2.0 * j - 1.0) / (2.0 * n_u); }

// Index into q.levels of the level nearest to t, ties to the smaller index.
int nearest_level(const QueryPlan& q, double t) {
    int best = 0;
    double best_d = std::abs(q.levels[0] - t);
    for (int l = 1; l < q.k(); ++l) {
        double d = std::abs(q.levels[l] - t);
        if (d < best_d) {
            best = l;
            best_d = d;
        }
    }
    return best;
}

}  // namespace

QueryPlan::QueryPlan(std::vector<double> lv) : levels(std::move(lv)) {
    if (levels.empty()) fail(errc::domain, "query plan needs at least one level");
    for (double q : levels)
        if (q < 0.0 || q > 1.0) fail(errc::domain, "query levels must lie in [0, 1]");
    if (!std::is_sorted(levels.begin(), levels.end())) fail(errc::domain, "query levels must be sorted");
}

PhantomVector::PhantomVector(std::vector<double> lv) : levels(std::move(lv)) {
    for (double w : levels)
        if (w < 0.0 || w > 1.0) fail(errc::domain, "phantom levels must lie in [0, 1]");
    if (!std::is_sorted(levels.begin(), levels.end())) fail(errc::domain, "phantom levels must be sorted");
}

double median_of(std::vector<double> v) {
    if (v.empty()) fail(errc::domain, "median of an empty vector");
    std::sort(v.begin(), v.end());
    return v[(v.size() + 1) / 2 - 1];
}

double median_mechanism(const Instance& inst) {
    if (inst.n_r() == 0) fail(errc::regime, "no zero-information mechanism exists without reports");
    return median_of(inst.reports());
}

double pqm(const Instance& inst, const PhantomVector& w, const PiecewiseUniform& mu) {
    if (w.size() != inst.n_u()) fail(errc::dimension, "phantom vector length must equal n_u");
    if (inst.n() % 2 == 0) fail(errc::parity, "phantom quantile mechanism requires odd n");
    std::vector<double> merged = inst.reports();
    merged.reserve(inst.n());
    for (double lv : w.levels) merged.push_back(mu.quantile(lv));
    return median_of(std::move(merged));
}

PhantomVector optimal_phantoms(int n_u) {
    std::vector<double> lv;
    lv.reserve(std::max(n_u, 0));
    for (int j = 1; j <= n_u; ++j) lv.push_back(target_level(j, n_u));
    return PhantomVector(std::move(lv));
}

PhantomVector lift(const QueryPlan& q, int n_r, int n_u) {
    std::vector<int> rel = relevant_quantiles(n_r, n_u);  // checks parity, n_u >= 1
    int j_min = rel.front();
    int j_max = rel.back();
    std::vector<double> out;
    out.reserve(n_u);
    for (int i = 1; i < j_min; ++i) out.push_back(q.levels[nearest_level(q, target_level(j_min, n_u))]);
    for (int j : rel) out.push_back(q.levels[nearest_level(q, target_level(j, n_u))]);
    for (int i = j_max; i < n_u; ++i) out.push_back(q.levels[nearest_level(q, target_level(j_max, n_u))]);
    return PhantomVector(std::move(out));
}

double delta(const PhantomVector& w, int n_r, int n_u) {
    if (w.size() != n_u) fail(errc::dimension, "phantom vector length must equal n_u");
    double worst = 0.0;
    for (int j : relevant_quantiles(n_r, n_u))
        worst = std::max(worst, std::abs(w.levels[j - 1] - target_level(j, n_u)));
    return worst;
}

double delta_lift(const QueryPlan& q, int n_r, int n_u) {
    double worst = 0.0;
    for (int j : relevant_quantiles(n_r, n_u)) {
        double t = target_level(j, n_u);
        worst = std::max(worst, std::abs(q.levels[nearest_level(q, t)] - t));
    }
    return worst;
}

namespace {

double sar_zero(int n, int n_r) {
    if (n_r == 0) return kInf;
    double v = (n_r % 2 != 0) ? static_cast<double>(2 * (n - n_r) + n_r - 1) / (n_r + 1)
                              : static_cast<double>(2 * (n - n_r) + n_r) / n_r;
    return std::max(v, 1.0);  // the count form dips below one only when n_u == 0
}

double sar_median_upper(int n, int n_r) {
    int n_u = n - n_r;
    if (n_u == 0 || n_u == 1 || n_u == n) return 1.0;
    double lambda = static_cast<double>(n_r) / n;
    if (lambda >= 0.5) return std::max(2.0 / (lambda + 1.0 / n), 2.0) - 1.0;
    return 1.0 + 2.0 * lambda / (1.0 - lambda);
}

double ratio_from_gap(double lambda, double gap) {
    double denom = 1.0 - 2.0 * (1.0 - lambda) * gap;
    if (denom <= 0.0) return kInf;
    return 1.0 + 4.0 * (1.0 - lambda) * gap / denom;
}

}  // namespace

double sar_upper(Regime regime, int n, int n_r, const QueryPlan* q) {
    if (n < 1 || n_r < 0 || n_r > n) fail(errc::domain, "invalid (n, n_r)");
    switch (regime) {
        case Regime::zero:
            return sar_zero(n, n_r);
        case Regime::median:
            return sar_median_upper(n, n_r);
        case Regime::k_quantile: {
            if (q == nullptr) fail(errc::domain, "k-quantile regime needs a query plan");
            double lambda = static_cast<double>(n_r) / n;
            return ratio_from_gap(lambda, delta_lift(*q, n_r, n - n_r));
        }
        case Regime::full:
            return 1.0;
    }
    fail(errc::domain, "unknown regime");
}

double sar_lower(LowerRegime regime, int n, int n_r, int k, bool asymptotic) {
    if (n < 1 || n_r < 0 || n_r > n) fail(errc::domain, "invalid (n, n_r)");
    int n_u = n - n_r;
    double lambda = static_cast<double>(n_r) / n;
    switch (regime) {
        case LowerRegime::zero:
            return sar_zero(n, n_r);
        case LowerRegime::median: {
            if (n_u == 0 || n_u == 1 || n_u == n) return 1.0;  // an optimal mechanism exists
            if (lambda < 1.0 / 3.0) return 1.0 + 2.0 * lambda / (1.0 - lambda);
            if (asymptotic) return std::max(4.0 / (1.0 + lambda), 2.0) - 1.0;
            int q4 = (n + n_r) / 4;
            double a = static_cast<double>(n) / (q4 + 1);
            double b = 2.0 * n / (2.0 * n - 2.0 * q4 - n_u);
            return std::max(std::min(a, b), 2.0) - 1.0;
        }
        case LowerRegime::k_quantile_even_grid: {
            if (k < 1 || n_u % k != 0) fail(errc::domain, "even-grid bound requires k dividing n_u");
            double sigma = static_cast<double>(n_u) / k;
            if (k % 2 == 0) return 1.0 + 2.0 * sigma / (n + n_u - 2.0 * sigma);
            double denom = n + n_u - 5.0 * sigma;
            // only k = 1 can push the denominator to zero or below; the
            // formula carries no information there, so fall back to the
            // trivial bound
            if (denom <= 0.0) return 1.0;
            return 1.0 + 6.0 * sigma / denom;
        }
    }
    fail(errc::domain, "unknown regime");
}

double sar_lower_table_k(int n, int n_r, int k) {
    int n_u = n - n_r;
    if (k < 1 || n_u % k != 0) fail(errc::domain, "table bound requires k dividing n_u");
    double lambda = static_cast<double>(n_r) / n;
    double sigma = static_cast<double>(n_u) / k;
    return 1.0 + 2.0 * (1.0 - lambda) * sigma / ((1.0 + lambda) * n_u + (1.0 - lambda) * sigma);
}

Rational sar_zero_rational_counts(int n, int n_r) {
    if (n_r == 0) fail(errc::domain, "zero-information bound is unbounded without reports");
    int n_u = n - n_r;
    Rational v = (n_r % 2 != 0) ? Rational(2 * n_u + n_r - 1, n_r + 1) : Rational(2 * n_u + n_r, n_r);
    return v < Rational(1) ? Rational(1) : v;
}

Rational sar_zero_rational_lambda(int n, int n_r) {
    if (n_r == 0) fail(errc::domain, "zero-information bound is unbounded without reports");
    Rational lam(n_r, n);
    Rational inv_n(1, n);
    Rational v = (n_r % 2 != 0) ? (Rational(2) - lam - inv_n) / (lam + inv_n) : (Rational(2) - lam) / lam;
    return v < Rational(1) ? Rational(1) : v;
}

QueryPlan optimal_query_plan(int k, int n_r, int n_u) {
    if (k < 1) fail(errc::domain, "plan size must be positive");
    if (k > n_u) return QueryPlan(optimal_phantoms(n_u).levels);
    std::vector<int> rel = relevant_quantiles(n_r, n_u);
    int r_size = static_cast<int>(rel.size());
    int blocks = std::min(k, r_size);
    int base = r_size / blocks;
    int extra = r_size % blocks;
    std::vector<double> lv;
    lv.reserve(k);
    int pos = 0;
    for (int b = 0; b < blocks; ++b) {
        int len = base + (b < extra ? 1 : 0);
        double first = target_level(rel[pos], n_u);
        double last = target_level(rel[pos + len - 1], n_u);
        lv.push_back((first + last) / 2.0);
        pos += len;
    }
    while (static_cast<int>(lv.size()) < k) lv.push_back(lv.back());  // k exceeds |R|
    return QueryPlan(std::move(lv));
}

}  // namespace flpaa
