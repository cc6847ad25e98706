#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "flpaa/adversary.hpp"

using namespace flpaa;

namespace {

Mechanism1 median_mech() {
    return [](const Instance& i, const PiecewiseUniform&) { return median_mechanism(i); };
}

Mechanism1 all_median_pqm() {
    return [](const Instance& i, const PiecewiseUniform& m) {
        return pqm(i, PhantomVector(std::vector<double>(i.n_u(), 0.5)), m);
    };
}

Mechanism1 optimal_pqm() {
    return [](const Instance& i, const PiecewiseUniform& m) { return pqm(i, optimal_phantoms(i.n_u()), m); };
}

}  // namespace

TEST_CASE("zero-information family drives the median mechanism to its bound") {
    auto fam = family_zero_info(5, 3);
    auto tr = empirical_sar(median_mech(), fam, default_schedule());
    CHECK(tr.limit_claim == doctest::Approx(1.5));
    CHECK(tr.ratios.back() > 1.485);
    CHECK(tr.ratios.back() <= 1.5 + 1e-9);
    for (std::size_t i = 1; i < tr.ratios.size(); ++i) CHECK(tr.ratios[i] >= tr.ratios[i - 1] - 1e-6);

    // full reporting leaves nothing to exploit
    auto full = empirical_sar(median_mech(), family_zero_info(5, 5), default_schedule());
    for (double r : full.ratios) CHECK(r == doctest::Approx(1.0));

    CHECK(family_zero_info(3, 1).limit_claim == doctest::Approx(2.0));
}

TEST_CASE("median-information family drives the all-median mechanism to its bound") {
    auto tr = empirical_sar(all_median_pqm(), family_median_info(5, 3), default_schedule());
    CHECK(tr.limit_claim == doctest::Approx(1.5));
    CHECK(tr.ratios.back() > 1.48);
    CHECK(tr.ratios.back() <= 1.5 + 1e-9);
    for (std::size_t i = 1; i < tr.ratios.size(); ++i) CHECK(tr.ratios[i] >= tr.ratios[i - 1] - 1e-6);

    CHECK_THROWS_AS(family_median_info(5, 4), Error);  // n_u = 1: mechanism optimal
    CHECK(family_median_info(9, 3).limit_claim == doctest::Approx(2.0));
}

TEST_CASE("even-grid family approaches its limit against the midpoint responder") {
    Mechanism1 mid = [](const Instance&, const PiecewiseUniform&) { return 0.5; };
    auto fam = family_k_quantile(15, 5, 2);
    auto tr = empirical_sar(mid, fam, default_schedule());
    CHECK(tr.limit_claim == doctest::Approx(5.0 / 3.0));
    CHECK(std::abs(tr.ratios.back() - 5.0 / 3.0) / (5.0 / 3.0) < 0.02);
    for (std::size_t i = 1; i < tr.ratios.size(); ++i) CHECK(tr.ratios[i] >= tr.ratios[i - 1] - 1e-6);

    CHECK_THROWS_AS(family_k_quantile(15, 5, 3), Error);   // odd k unsupported
    CHECK_THROWS_AS(family_k_quantile(15, 11, 3), Error);  // k must divide n_u
}

TEST_CASE("lift-gap family reproduces the closed-form ratio") {
    QueryPlan q({0.125, 0.625});
    int n = 9, n_r = 5, n_u = 4;
    double lam = static_cast<double>(n_r) / n;
    double d = delta_lift(q, n_r, n_u);
    double expected = 1.0 + 4.0 * (1.0 - lam) * d / (1.0 - 2.0 * (1.0 - lam) * d);
    Mechanism1 mech = [q](const Instance& i, const PiecewiseUniform& m) {
        return pqm(i, lift(q, i.n_r(), i.n_u()), m);
    };
    auto tr = empirical_sar(mech, family_lift_gap(n, n_r, q), {10000});
    CHECK(std::abs(tr.ratios[0] - expected) / expected < 0.01);

    // a gap-free plan degenerates to ratio one
    auto flat = empirical_sar(optimal_pqm(), family_lift_gap(5, 3, QueryPlan({0.25, 0.75})), {10000});
    CHECK(flat.ratios[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("optimal-phantom mechanism is immune to every single-facility family") {
    for (const auto& fam : {family_zero_info(5, 3), family_median_info(5, 3), family_k_quantile(9, 3, 2)}) {
        auto tr = empirical_sar(optimal_pqm(), fam, default_schedule());
        for (double r : tr.ratios) CHECK(r == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("two-facility impossibility family diverges against fixed placements") {
    auto fam = family_two_facility_unbounded(3, 2);
    auto tr = empirical_sar(fixed_placement(0.4, 1.0), fam, {10, 100, 1000});
    CHECK(tr.ratios[0] < tr.ratios[1]);
    CHECK(tr.ratios[1] < tr.ratios[2]);

    Mechanism2 opt = [](const TwoInstance& i, const PiecewiseUniform& m) { return solve_optimal2(i, m); };
    auto ideal = empirical_sar(opt, fam, default_schedule());
    for (double r : ideal.ratios) CHECK(r == doctest::Approx(1.0).epsilon(1e-9));

    GeneratedInstance g = fam.generate(10000);
    const TwoPair& p = std::get<TwoPair>(g);
    CHECK(esc2(p.inst, p.mu, solve_optimal2(p.inst, p.mu)) < 1e-3);

    CHECK_THROWS_AS(family_two_facility_unbounded(3, 4), Error);  // n_r > c
}

TEST_CASE("ratio traces never exceed the closed-form upper bound") {
    auto z = empirical_sar(median_mech(), family_zero_info(7, 3), default_schedule());
    for (double r : z.ratios) CHECK(r <= sar_upper(Regime::zero, 7, 3) + 1e-6);
    auto m = empirical_sar(all_median_pqm(), family_median_info(7, 3), default_schedule());
    for (double r : m.ratios) CHECK(r <= sar_upper(Regime::median, 7, 3) + 1e-6);
    QueryPlan q({0.3});
    auto g = empirical_sar(
        [q](const Instance& i, const PiecewiseUniform& mu) { return pqm(i, lift(q, i.n_r(), i.n_u()), mu); },
        family_lift_gap(7, 3, q), default_schedule());
    for (double r : g.ratios) CHECK(r <= sar_upper(Regime::k_quantile, 7, 3, &q) + 1e-6);
}

TEST_CASE("family ratios approach the claimed limit at ell = 1e4") {
    struct Case {
        InstanceFamily fam;
        Mechanism1 mech;
    };
    for (auto& [fam, mech] : {Case{family_zero_info(9, 5), median_mech()},
                              Case{family_zero_info(11, 4), median_mech()},
                              Case{family_median_info(11, 7), all_median_pqm()},
                              Case{family_median_info(11, 3), all_median_pqm()},
                              Case{family_k_quantile(9, 3, 2),
                                   [](const Instance&, const PiecewiseUniform&) { return 0.5; }}}) {
        auto tr = empirical_sar(mech, fam, default_schedule());
        REQUIRE(tr.has_limit);
        CHECK(std::abs(tr.ratios.back() - tr.limit_claim) / tr.limit_claim < 0.01);
        for (std::size_t i = 1; i < tr.ratios.size(); ++i) CHECK(tr.ratios[i] >= tr.ratios[i - 1] - 1e-6);
    }
}

TEST_CASE("grid oracle") {
    Instance inst(5, {0.0, 0.0, 1.25});
    auto mu = PiecewiseUniform::uniform(1.0, 2.0);
    auto [y, v] = grid_oracle(inst, mu, {-1.0, 3.0}, 1e-4);
    CHECK(y == doctest::Approx(1.25).epsilon(1e-6));
    CHECK(v == doctest::Approx(3.125).epsilon(1e-9));

    Instance pure(3, {1.0, 2.0, 3.0});
    CHECK(grid_oracle(pure, mu, {0.0, 4.0}, 1e-4).first == doctest::Approx(2.0).epsilon(1e-6));

    CHECK_THROWS_AS(grid_oracle(inst, mu, {3.0, -1.0}, 1e-4), Error);
}

TEST_CASE("oracle never undershoots the solver by more than discretization") {
    Rng rng(61);
    for (int trial = 0; trial < 100; ++trial) {
        Instance inst = random_instance(rng, 15);
        auto mu = random_mixture(rng, 6);
        double solver = esc(inst, mu, solve_optimal(inst, mu).canonical);
        double oracle = grid_oracle(inst, mu, {-12.0, 12.0}, 1e-3).second;
        CHECK(oracle >= solver - 1e-6);
    }
}

TEST_CASE("fuzzer is deterministic for a fixed seed") {
    InstanceSampler1 sampler = [](Rng& rng) {
        std::vector<double> x;
        for (int i = 0; i < 3; ++i) x.push_back(rng.uniform(-10.0, 10.0));
        return SinglePair{Instance(5, std::move(x)), random_mixture(rng)};
    };
    auto a = truthfulness_fuzz(median_mech(), sampler, 2000, 4242);
    auto b = truthfulness_fuzz(median_mech(), sampler, 2000, 4242);
    CHECK(a.worst_regret == b.worst_regret);
    CHECK(a.worst_trial == b.worst_trial);
    auto c = truthfulness_fuzz(median_mech(), sampler, 2000, 4243);
    CHECK((c.worst_regret != a.worst_regret || c.worst_trial != a.worst_trial));
}
