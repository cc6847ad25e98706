#include "flpaa/two_facility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "flpaa/instance.hpp"

namespace flpaa {

namespace {

// Sorted merge of reports with the realized phantom quantiles.
std::vector<double> merged_order_statistics(const TwoInstance& inst, const PiecewiseUniform& mu,
                                            const PhantomVector& w) {
    std::vector<double> z = inst.reports();
    z.reserve(inst.n());
    for (double lv : w.levels) z.push_back(mu.quantile(lv));
    std::sort(z.begin(), z.end());
    return z;
}

}  // namespace

std::vector<int> nearest_matching(const TwoInstance& inst, double y1, double y2) {
    const auto& x = inst.reports();
    double mid = (y1 + y2) / 2.0;
    std::vector<int> m(x.size(), 2);
    int c1 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= mid) {
            m[i] = 1;
            ++c1;
        }
    }
    int c2 = static_cast<int>(x.size()) - c1;
    // Reports are sorted, so facility 1 holds a prefix; overflow (possible
    // only on degenerate inputs with y1 == y2) peels agents off the boundary.
    while (c1 > inst.c()) {
        m[c1 - 1] = 2;
        --c1;
        ++c2;
    }
    while (c2 > inst.c()) {
        m[c1] = 1;
        ++c1;
        --c2;
    }
    return m;
}

TwoInstance::TwoInstance(int c, std::vector<double> reports) : c_(c), reports_(std::move(reports)) {
    if (c_ < 1) fail(errc::domain, "facility capacity must be positive");
    if (static_cast<int>(reports_.size()) > 2 * c_) fail(errc::domain, "more reports than total capacity");
    std::sort(reports_.begin(), reports_.end());
}

TwoFacilityOutcome make_outcome(const TwoInstance& inst, const PiecewiseUniform& mu, double y1, double y2,
                                std::vector<int> matching) {
    if (static_cast<int>(matching.size()) != inst.n_r()) fail(errc::dimension, "matching size must equal n_r");
    if (y1 > y2) {
        std::swap(y1, y2);
        for (int& m : matching) m = 3 - m;
    }
    int c1 = 0, c2 = 0;
    for (int m : matching) {
        if (m == 1)
            ++c1;
        else if (m == 2)
            ++c2;
        else
            fail(errc::domain, "matching entries must be 1 or 2");
    }
    if (c1 > inst.c() || c2 > inst.c()) fail(errc::infeasible, "matching overloads a facility");
    TwoFacilityOutcome out;
    out.y1 = y1;
    out.y2 = y2;
    out.matching = std::move(matching);
    out.spare1 = inst.c() - c1;
    out.spare2 = inst.c() - c2;
    if (inst.n_u() > 0 && out.spare1 > 0 && out.spare2 > 0) {
        out.has_threshold = true;
        out.threshold_z = mu.quantile(static_cast<double>(out.spare1) / inst.n_u());
    }
    return out;
}

double esc2(const TwoInstance& inst, const PiecewiseUniform& mu, const TwoFacilityOutcome& out) {
    if (static_cast<int>(out.matching.size()) != inst.n_r()) fail(errc::dimension, "matching size must equal n_r");
    int c1 = 0, c2 = 0;
    double cost = 0.0;
    const auto& x = inst.reports();
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (out.matching[i] == 1) {
            cost += std::abs(x[i] - out.y1);
            ++c1;
        } else {
            cost += std::abs(x[i] - out.y2);
            ++c2;
        }
    }
    if (c1 > inst.c() || c2 > inst.c()) fail(errc::infeasible, "matching overloads a facility");
    int n_u = inst.n_u();
    if (n_u == 0) return cost;
    if (out.spare1 == 0) return cost + n_u * mu.mean_abs_dev(out.y2);
    if (out.spare2 == 0) return cost + n_u * mu.mean_abs_dev(out.y1);
    return cost + n_u * (mu.abs_dev_below(out.threshold_z, out.y1) + mu.abs_dev_above(out.threshold_z, out.y2));
}

namespace {

// Optimal facility for one side of a prefix split: the median of the group
// formed by its matched reports and its share of the (already truncated)
// population. The group always holds exactly c units.
double group_median(std::vector<double> reports, int spare, const PiecewiseUniform& mu) {
    int units = static_cast<int>(reports.size()) + spare;
    return solve_optimal(Instance(units, std::move(reports)), mu).canonical;
}

}  // namespace

TwoFacilityOutcome solve_optimal2(const TwoInstance& inst, const PiecewiseUniform& mu) {
    // The optimal matching sends a sorted prefix of the reports to the left
    // facility (exchange argument), the aleatory split is the mass-balanced
    // threshold, and each facility then sits at its own group's median. The
    // mixed-cdf quartile characterization is the special case where the
    // mixed cdf crosses 1/2 continuously; when a report jump crosses it,
    // capacity pins fewer aleatory seats to the left group than the quartile
    // assumes, so every feasible prefix size is tried instead.
    const auto& x = inst.reports();
    int n_r = inst.n_r(), c = inst.c(), n_u = inst.n_u();
    int s_lo = std::max(0, n_r - c);
    int s_hi = std::min(c, n_r);

    TwoFacilityOutcome best;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int s = s_hi; s >= s_lo; --s) {
        std::vector<double> left_reports(x.begin(), x.begin() + s);
        std::vector<double> right_reports(x.begin() + s, x.end());
        int spare1 = c - s;
        double cut = n_u > 0 ? static_cast<double>(spare1) / n_u : 0.0;
        double y1 = (spare1 == 0 || spare1 == n_u)
                        ? group_median(std::move(left_reports), spare1, mu)
                        : group_median(std::move(left_reports), spare1, mu.truncated_below(cut));
        int spare2 = n_u - spare1;
        double y2 = (spare2 == 0 || spare2 == n_u)
                        ? group_median(std::move(right_reports), spare2, mu)
                        : group_median(std::move(right_reports), spare2, mu.truncated_above(cut));
        if (y1 > y2) continue;  // label-swapped duplicate of another prefix
        std::vector<int> m(x.size(), 2);
        for (int i = 0; i < s; ++i) m[i] = 1;
        TwoFacilityOutcome cand = make_outcome(inst, mu, y1, y2, std::move(m));
        double cost = esc2(inst, mu, cand);
        if (cost < best_cost - 1e-12) {
            best_cost = cost;
            best = std::move(cand);
        }
    }
    if (!std::isfinite(best_cost)) fail(errc::infeasible, "no feasible prefix split");
    return best;
}

TwoFacilityOutcome pom(const TwoInstance& inst, const PiecewiseUniform& mu) {
    if (inst.n_r() > inst.c()) fail(errc::regime, "pseudo-optimal mechanism requires n_r <= c");
    std::vector<double> z = merged_order_statistics(inst, mu, optimal_phantoms(inst.n_u()));
    int n = inst.n(), c = inst.c();
    double y1 = z[(c + 1) / 2 - 1];
    double y2 = z[n - c / 2 - 1];
    return make_outcome(inst, mu, y1, y2, nearest_matching(inst, y1, y2));
}

TwoFacilityOutcome aqm(const TwoInstance& inst, const PiecewiseUniform& mu) {
    if (inst.n_r() <= inst.c()) fail(errc::regime, "amended-quartile mechanism requires n_r > c");
    std::vector<double> z = merged_order_statistics(inst, mu, optimal_phantoms(inst.n_u()));
    const auto& x = inst.reports();
    int n = inst.n(), c = inst.c();
    double y1 = std::max(x[inst.n_r() - c - 1], z[(c + 1) / 2 - 1]);
    double y2 = std::min(x[c], z[n - c / 2 - 1]);
    return make_outcome(inst, mu, y1, y2, nearest_matching(inst, y1, y2));
}

TwoFacilityOutcome igm(const TwoInstance& inst, const PiecewiseUniform& mu) {
    if (inst.n_r() <= inst.c())
        fail(errc::regime, "no truthful bounded mechanism exists without quantile access when n_r <= c");
    const auto& x = inst.reports();
    double y1 = x[inst.c() - 1];
    double y2 = x[inst.c()];
    return make_outcome(inst, mu, y1, y2, nearest_matching(inst, y1, y2));
}

namespace {

// Even-grid lift for the two-facility case: spread the n_u phantom slots
// over the k levels by nearest target, n independent of report parity.
PhantomVector even_grid_lift(const QueryPlan& q, int n_u) {
    std::vector<double> out;
    out.reserve(n_u);
    for (int j = 1; j <= n_u; ++j) {
        double t = (2.0 * j - 1.0) / (2.0 * n_u);
        int best = 0;
        double best_d = std::abs(q.levels[0] - t);
        for (int l = 1; l < q.k(); ++l) {
            double d = std::abs(q.levels[l] - t);
            if (d < best_d) {
                best = l;
                best_d = d;
            }
        }
        out.push_back(q.levels[best]);
    }
    return PhantomVector(std::move(out));
}

}  // namespace

TwoFacilityOutcome cem(const TwoInstance& inst, const PiecewiseUniform& mu, const QueryPlan& q) {
    for (int j = 1; j <= q.k(); ++j) {
        double expected = (2.0 * j - 1.0) / (2.0 * q.k());
        if (std::abs(q.levels[j - 1] - expected) > 1e-12)
            fail(errc::unsupported_plan, "capped-endpoint mechanism is truthful only for the even quantile grid");
    }
    std::vector<double> z = merged_order_statistics(inst, mu, even_grid_lift(q, inst.n_u()));
    int n = inst.n(), c = inst.c();
    double y1, y2;
    if (inst.n_r() <= c) {
        y1 = z.front();
        y2 = z.back();
    } else {
        const auto& x = inst.reports();
        y1 = std::max(x[inst.n_r() - c - 1], z[(c + 1) / 2 - 1]);
        y2 = std::min(x[c], z[n - c / 2 - 1]);
    }
    return make_outcome(inst, mu, y1, y2, nearest_matching(inst, y1, y2));
}

}  // namespace flpaa
