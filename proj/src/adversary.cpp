#include "flpaa/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace flpaa {

namespace {

constexpr double kDivergenceFloor = 1e-12;

std::vector<double> cluster_reports(int at_zero, int at_one) {
    std::vector<double> x(at_zero, 0.0);
    x.insert(x.end(), at_one, 1.0);
    return x;
}

}  // namespace

InstanceFamily family_zero_info(int n, int n_r) {
    if (n % 2 == 0) fail(errc::parity, "family requires odd n");
    if (n_r < 1 || n_r > n) fail(errc::domain, "family requires 1 <= n_r <= n");
    int at_zero = (n_r + 1) / 2;
    InstanceFamily fam;
    fam.name = "zero-info";
    fam.has_limit = true;
    fam.limit_claim = sar_lower(LowerRegime::zero, n, n_r);
    fam.generate = [n, n_r, at_zero](long ell) -> GeneratedInstance {
        ConcentrationFamily far({{1.0, 1.0}}, Side::left);
        return SinglePair{Instance(n, cluster_reports(at_zero, n_r - at_zero)), far.realize(ell)};
    };
    return fam;
}

InstanceFamily family_median_info(int n, int n_r) {
    if (n % 2 == 0) fail(errc::parity, "family requires odd n");
    int n_u = n - n_r;
    if (n_u < 2 || n_u > n - 2) fail(errc::regime, "the all-median mechanism is optimal when n_u <= 1 or n_r == 0");
    int at_zero = std::min((n - 1) / 2, n_r);
    InstanceFamily fam;
    fam.name = "median-info";
    fam.has_limit = true;
    fam.limit_claim = sar_upper(Regime::median, n, n_r);
    fam.generate = [n, n_r, at_zero](long ell) -> GeneratedInstance {
        if (ell < 2) fail(errc::domain, "schedule must start at ell >= 2");
        // Mass approaches an even split from below so the population median
        // stays pinned to the right cluster.
        double gap = 1.0 / (2.0 * ell);
        double w = 1.0 / static_cast<double>(ell);
        PiecewiseUniform mu({{-w, 0.0, 0.5 - gap}, {1.0 - w, 1.0, 0.5 + gap}});
        return SinglePair{Instance(n, cluster_reports(at_zero, n_r - at_zero)), mu};
    };
    return fam;
}

InstanceFamily family_k_quantile(int n, int n_r, int k) {
    if (n % 2 == 0) fail(errc::parity, "family requires odd n");
    int n_u = n - n_r;
    if (k < 2 || k % 2 != 0) fail(errc::domain, "only the even-k construction is implemented");
    if (n_u % k != 0) fail(errc::domain, "k must divide n_u");
    int sigma = n_u / k;
    int at_zero = n_r / 2;
    InstanceFamily fam;
    fam.name = "k-grid";
    fam.has_limit = true;
    fam.limit_claim = static_cast<double>(n) / (n - sigma - 1);
    fam.generate = [n, n_r, k, at_zero](long ell) -> GeneratedInstance {
        if (ell < 2) fail(errc::domain, "schedule must start at ell >= 2");
        double eps = 1.0 / static_cast<double>(ell);
        double side = 0.5 - 1.0 / (2.0 * k);
        double gap = 1.0 / static_cast<double>(k);
        PiecewiseUniform mu({{-eps, 0.0, side}, {1.0 - eps, 1.0, gap}, {1.0, 1.0 + eps, side}});
        return SinglePair{Instance(n, cluster_reports(at_zero, n_r - at_zero)), mu};
    };
    return fam;
}

InstanceFamily family_lift_gap(int n, int n_r, const QueryPlan& q) {
    if (n % 2 == 0) fail(errc::parity, "family requires odd n");
    int n_u = n - n_r;
    if (n_u < 1) fail(errc::domain, "family needs aleatory agents");

    PhantomVector w = lift(q, n_r, n_u);
    double gap = delta_lift(q, n_r, n_u);
    std::vector<int> rel = relevant_quantiles(n_r, n_u);
    int half = (n + 1) / 2;

    // Locate a relevant index attaining the gap whose construction is
    // feasible: enough phantom multiplicity on the side the mechanism must
    // land on. Below-target misses are tried first: the pseudo-inverse's inf
    // convention pins their quantiles directly, while above-target misses
    // need a vanishing bridge (built in the generator below).
    int pick_j = -1;
    double pick_level = 0.0;
    bool above = false;
    for (int j : rel) {
        double target = (2.0 * j - 1.0) / (2.0 * n_u);
        double level = w.levels[j - 1];
        if (std::abs(std::abs(level - target) - gap) > 1e-12) continue;
        if (level <= target && level > 1e-9) {
            int mult_left = static_cast<int>(
                std::count_if(w.levels.begin(), w.levels.end(), [&](double v) { return v <= level + 1e-15; }));
            if (mult_left >= j) {
                pick_j = j;
                pick_level = level;
                above = false;
                break;
            }
        }
    }
    if (pick_j < 0) {
        for (int j : rel) {
            double target = (2.0 * j - 1.0) / (2.0 * n_u);
            double level = w.levels[j - 1];
            if (std::abs(std::abs(level - target) - gap) > 1e-12) continue;
            if (level >= target && level < 1.0 - 1e-9) {
                int mult_right = static_cast<int>(
                    std::count_if(w.levels.begin(), w.levels.end(), [&](double v) { return v >= level - 1e-15; }));
                if (mult_right >= n_u + 1 - j) {
                    pick_j = j;
                    pick_level = level;
                    above = true;
                    break;
                }
            }
        }
    }
    if (pick_j < 0) fail(errc::invalid_family, "no realizable worst-case index for this plan");

    double lambda = static_cast<double>(n_r) / n;
    InstanceFamily fam;
    fam.name = "lift-gap";
    fam.has_limit = true;
    double denom = 1.0 - 2.0 * (1.0 - lambda) * gap;
    fam.limit_claim = denom > 0.0 ? 1.0 + 4.0 * (1.0 - lambda) * gap / denom
                                  : std::numeric_limits<double>::infinity();

    double target = (2.0 * pick_j - 1.0) / (2.0 * n_u);
    int at_zero = half - pick_j;  // pins the mixed cdf to 1/2 at the optimum
    double level = pick_level;

    fam.generate = [n, n_r, at_zero, level, target, above](long ell) -> GeneratedInstance {
        if (ell < 2) fail(errc::domain, "schedule must start at ell >= 2");
        double eps = 1.0 / static_cast<double>(ell);
        std::vector<Segment> segs;
        if (!above) {
            // Mechanism lands at 0 (cumulative hits `level` there), optimum
            // sits at 1 where the cumulative reaches the target.
            segs.push_back({-eps, 0.0, level});
            if (target - level > 1e-15) segs.push_back({1.0 - eps, 1.0, target - level});
            segs.push_back({1.0, 1.0 + eps, 1.0 - target});
        } else {
            // Optimum at 0; the mass between the target and the mechanism's
            // level rides a bridge just right of it, thinning toward zero so
            // the level's quantile stays at the far cluster.
            double bridge = (level - target) * (1.0 - 1.0 / static_cast<double>(ell));
            segs.push_back({-eps, 0.0, target});
            if (bridge > 1e-15) segs.push_back({0.0, eps, bridge});
            if (level - target - bridge > 1e-15) segs.push_back({1.0 - eps, 1.0, level - target - bridge});
            segs.push_back({1.0, 1.0 + eps, 1.0 - level});
        }
        return SinglePair{Instance(n, cluster_reports(at_zero, n_r - at_zero)), PiecewiseUniform(segs)};
    };
    return fam;
}

InstanceFamily family_two_facility_unbounded(int c, int n_r) {
    if (n_r > c) fail(errc::regime, "a bounded truthful mechanism exists when n_r > c");
    if (n_r < 0) fail(errc::domain, "invalid n_r");
    int n_u = 2 * c - n_r;
    double far_mass = static_cast<double>(c) / n_u;
    InstanceFamily fam;
    fam.name = "two-unbounded";
    fam.has_limit = false;
    fam.generate = [c, n_r, far_mass](long ell) -> GeneratedInstance {
        if (ell < 3) fail(errc::domain, "schedule must start at ell >= 3");
        double eps = 1.0 / static_cast<double>(ell);
        std::vector<Segment> segs;
        segs.push_back({-eps / 2.0, eps / 2.0, far_mass});
        if (far_mass < 1.0 - 1e-15) segs.push_back({1.0 - eps, 1.0, 1.0 - far_mass});
        return TwoPair{TwoInstance(c, std::vector<double>(n_r, 1.0)), PiecewiseUniform(segs)};
    };
    return fam;
}

Mechanism2 fixed_placement(double y1, double y2) {
    return [y1, y2](const TwoInstance& inst, const PiecewiseUniform& mu) {
        return make_outcome(inst, mu, y1, y2, nearest_matching(inst, y1, y2));
    };
}

namespace {

RatioTrace finish_trace(const InstanceFamily& family, std::vector<long> ells, std::vector<double> mech_cost,
                        std::vector<double> opt_cost) {
    RatioTrace tr;
    tr.ells = std::move(ells);
    tr.has_limit = family.has_limit;
    tr.limit_claim = family.limit_claim;
    for (std::size_t i = 0; i < mech_cost.size(); ++i) {
        if (opt_cost[i] < kDivergenceFloor && mech_cost[i] > kDivergenceFloor) {
            tr.ratios.push_back(std::numeric_limits<double>::infinity());
            tr.divergent.push_back(true);
        } else if (opt_cost[i] < kDivergenceFloor) {
            tr.ratios.push_back(1.0);
            tr.divergent.push_back(false);
        } else {
            tr.ratios.push_back(mech_cost[i] / opt_cost[i]);
            tr.divergent.push_back(false);
        }
    }
    return tr;
}

}  // namespace

RatioTrace empirical_sar(const Mechanism1& mech, const InstanceFamily& family, const std::vector<long>& schedule) {
    std::vector<double> mech_cost, opt_cost;
    for (long ell : schedule) {
        GeneratedInstance g = family.generate(ell);
        const SinglePair* p = std::get_if<SinglePair>(&g);
        if (p == nullptr) fail(errc::regime, "single-facility mechanism applied to a two-facility family");
        double y = mech(p->inst, p->mu);
        mech_cost.push_back(esc(p->inst, p->mu, y));
        opt_cost.push_back(esc(p->inst, p->mu, solve_optimal(p->inst, p->mu).canonical));
    }
    return finish_trace(family, schedule, std::move(mech_cost), std::move(opt_cost));
}

RatioTrace empirical_sar(const Mechanism2& mech, const InstanceFamily& family, const std::vector<long>& schedule) {
    std::vector<double> mech_cost, opt_cost;
    for (long ell : schedule) {
        GeneratedInstance g = family.generate(ell);
        const TwoPair* p = std::get_if<TwoPair>(&g);
        if (p == nullptr) fail(errc::regime, "two-facility mechanism applied to a single-facility family");
        mech_cost.push_back(esc2(p->inst, p->mu, mech(p->inst, p->mu)));
        opt_cost.push_back(esc2(p->inst, p->mu, solve_optimal2(p->inst, p->mu)));
    }
    return finish_trace(family, schedule, std::move(mech_cost), std::move(opt_cost));
}

double Rng::uniform(double lo, double hi) {
    // 53-bit mantissa draw; keeps streams identical across standard libraries
    double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
}

int Rng::uniform_int(int lo, int hi) {
    return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
}

PiecewiseUniform random_mixture(Rng& rng, int max_segments, double lo, double hi) {
    int count = rng.uniform_int(1, max_segments);
    std::vector<double> cuts;
    cuts.reserve(2 * count);
    for (int i = 0; i < 2 * count; ++i) cuts.push_back(rng.uniform(lo, hi));
    std::sort(cuts.begin(), cuts.end());
    std::vector<Segment> segs;
    std::vector<double> weights;
    double total = 0.0;
    for (int i = 0; i < count; ++i) {
        double a = cuts[2 * i], b = cuts[2 * i + 1];
        if (b - a < 1e-9) b = a + 1e-9;
        double w = rng.uniform(0.05, 1.0);
        segs.push_back({a, b, w});
        total += w;
    }
    for (Segment& s : segs) s.mass /= total;
    return PiecewiseUniform(std::move(segs));
}

Instance random_instance(Rng& rng, int max_n, bool odd_n) {
    int n = rng.uniform_int(1, max_n);
    if (odd_n && n % 2 == 0) n = (n == max_n) ? n - 1 : n + 1;
    int n_r = rng.uniform_int(0, n);
    std::vector<double> x;
    x.reserve(n_r);
    for (int i = 0; i < n_r; ++i) x.push_back(rng.uniform(-10.0, 10.0));
    return Instance(n, std::move(x));
}

double deviation_regret(const Mechanism1& mech, const SinglePair& p, int agent, double misreport) {
    double truthful = std::abs(p.inst.reports()[agent] - mech(p.inst, p.mu));
    std::vector<double> x = p.inst.reports();
    double true_pos = x[agent];
    x[agent] = misreport;
    double deviated = std::abs(true_pos - mech(Instance(p.inst.n(), std::move(x)), p.mu));
    return truthful - deviated;
}

double deviation_regret(const Mechanism2& mech, const TwoPair& p, int agent, double misreport) {
    TwoFacilityOutcome truth = mech(p.inst, p.mu);
    double true_pos = p.inst.reports()[agent];
    double truthful = std::abs(true_pos - (truth.matching[agent] == 1 ? truth.y1 : truth.y2));

    std::vector<double> x = p.inst.reports();
    x[agent] = misreport;
    TwoInstance dev_inst(p.inst.c(), std::move(x));
    // Track the deviant through the re-sorted report vector.
    const auto& sorted = dev_inst.reports();
    int idx = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), misreport) - sorted.begin());
    TwoFacilityOutcome dev = mech(dev_inst, p.mu);
    double deviated = std::abs(true_pos - (dev.matching[idx] == 1 ? dev.y1 : dev.y2));
    return truthful - deviated;
}

FuzzReport truthfulness_fuzz(const Mechanism1& mech, const InstanceSampler1& sampler, long trials,
                             std::uint64_t seed) {
    if (trials < 1) fail(errc::domain, "trial count must be positive");
    Rng rng(seed);
    FuzzReport rep;
    rep.trials = trials;
    rep.seed = seed;
    rep.worst_regret = -std::numeric_limits<double>::infinity();
    for (long t = 0; t < trials; ++t) {
        SinglePair p = sampler(rng);
        if (p.inst.n_r() == 0) continue;
        int agent = rng.uniform_int(0, p.inst.n_r() - 1);
        double mis = rng.uniform(-10.0, 10.0);
        double regret = deviation_regret(mech, p, agent, mis);
        if (regret > rep.worst_regret) {
            rep.worst_regret = regret;
            rep.worst_trial = t;
        }
    }
    return rep;
}

FuzzReport truthfulness_fuzz(const Mechanism2& mech, const InstanceSampler2& sampler, long trials,
                             std::uint64_t seed) {
    if (trials < 1) fail(errc::domain, "trial count must be positive");
    Rng rng(seed);
    FuzzReport rep;
    rep.trials = trials;
    rep.seed = seed;
    rep.worst_regret = -std::numeric_limits<double>::infinity();
    for (long t = 0; t < trials; ++t) {
        TwoPair p = sampler(rng);
        if (p.inst.n_r() == 0) continue;
        int agent = rng.uniform_int(0, p.inst.n_r() - 1);
        double mis = rng.uniform(-10.0, 10.0);
        double regret = deviation_regret(mech, p, agent, mis);
        if (regret > rep.worst_regret) {
            rep.worst_regret = regret;
            rep.worst_trial = t;
        }
    }
    return rep;
}

std::pair<double, double> grid_oracle(const Instance& inst, const PiecewiseUniform& mu,
                                      std::pair<double, double> box, double step) {
    if (!(box.first < box.second)) fail(errc::domain, "empty search box");
    if (!(step > 0.0)) fail(errc::domain, "step must be positive");
    std::vector<double> points;
    long count = static_cast<long>((box.second - box.first) / step) + 1;
    points.reserve(count + 2 * inst.n_r() + 16);
    for (long i = 0; i <= count; ++i) points.push_back(box.first + i * step);
    for (double x : inst.reports()) points.push_back(x);
    for (const Segment& s : mu.segments()) {
        points.push_back(s.lo);
        points.push_back(s.hi);
    }
    for (double f : candidate_set(inst.n(), inst.n_u(), mu)) points.push_back(f);
    double best_y = points.front();
    double best = std::numeric_limits<double>::infinity();
    for (double y : points) {
        double v = esc(inst, mu, y);
        if (v < best) {
            best = v;
            best_y = y;
        }
    }
    return {best_y, best};
}

double two_facility_oracle(const TwoInstance& inst, const PiecewiseUniform& mu) {
    // Candidate positions: reports plus both quantile grids (the mixed-cdf
    // quartiles land on the odd grid for odd c and the even grid otherwise).
    std::vector<double> cand = inst.reports();
    int n_u = inst.n_u();
    for (int j = 1; j <= n_u; ++j) {
        cand.push_back(mu.quantile((2.0 * j - 1.0) / (2.0 * n_u)));
        cand.push_back(mu.quantile(static_cast<double>(j) / n_u));
    }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

    int n_r = inst.n_r(), c = inst.c();
    int s_lo = std::max(0, n_r - c);
    int s_hi = std::min(c, n_r);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < cand.size(); ++a) {
        for (std::size_t b = a; b < cand.size(); ++b) {
            for (int s = s_lo; s <= s_hi; ++s) {  // leftmost s reports to facility 1
                std::vector<int> m(n_r, 2);
                for (int i = 0; i < s; ++i) m[i] = 1;
                double v = esc2(inst, mu, make_outcome(inst, mu, cand[a], cand[b], std::move(m)));
                if (v < best) best = v;
            }
        }
    }
    return best;
}

}  // namespace flpaa
