#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "flpaa/adversary.hpp"
#include "flpaa/mechanisms.hpp"

using namespace flpaa;

namespace {
PiecewiseUniform u12() { return PiecewiseUniform::uniform(1.0, 2.0); }
Instance worked_example() { return Instance(5, {0.0, 0.0, 1.25}); }
}  // namespace

TEST_CASE("lower median") {
    CHECK(median_of({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median_of({1.0, 2.0, 3.0, 4.0}) == 2.0);
    CHECK(median_of({0.0, 0.0, 1.25}) == 0.0);
    CHECK_THROWS_AS(median_of({}), Error);
}

TEST_CASE("median mechanism") {
    CHECK(median_mechanism(worked_example()) == 0.0);
    CHECK(median_mechanism(Instance(1, {5.0})) == 5.0);
    CHECK(median_mechanism(Instance(4, {0.0, 1.0, 1.0, 2.0})) == 1.0);
    CHECK_THROWS_AS(median_mechanism(Instance(3, {})), Error);
}

TEST_CASE("phantom quantile mechanism") {
    CHECK(pqm(worked_example(), PhantomVector({0.25, 0.75}), u12()) == doctest::Approx(1.25));
    CHECK(pqm(worked_example(), PhantomVector({0.5, 0.5}), u12()) == doctest::Approx(1.25));
    CHECK(pqm(Instance(3, {4.0, 5.0, 6.0}), PhantomVector({}), u12()) == doctest::Approx(5.0));
    CHECK_THROWS_AS(pqm(worked_example(), PhantomVector({0.5}), u12()), Error);            // dimension
    CHECK_THROWS_AS(pqm(Instance(4, {0.0, 1.0}), PhantomVector({0.5, 0.5}), u12()), Error);  // parity
}

TEST_CASE("optimal phantom levels") {
    CHECK(optimal_phantoms(2).levels == std::vector<double>{0.25, 0.75});
    CHECK(optimal_phantoms(1).levels == std::vector<double>{0.5});
    CHECK(optimal_phantoms(4).levels == std::vector<double>{0.125, 0.375, 0.625, 0.875});
    CHECK(optimal_phantoms(0).levels.empty());
}

TEST_CASE("lift expands a plan by nearest targets, ties to the left") {
    auto w = lift(QueryPlan({0.125, 0.625}), 5, 4);  // n = 9, full relevant range
    CHECK(w.levels == std::vector<double>{0.125, 0.125, 0.625, 0.625});

    auto rep = lift(QueryPlan({0.5}), 4, 3);  // n = 7
    CHECK(rep.levels == std::vector<double>{0.5, 0.5, 0.5});

    auto fixed = lift(QueryPlan(optimal_phantoms(4).levels), 5, 4);
    CHECK(fixed.levels == optimal_phantoms(4).levels);
}

TEST_CASE("index-aligned quantile gap") {
    CHECK(delta(optimal_phantoms(2), 3, 2) == doctest::Approx(0.0));
    CHECK(delta(PhantomVector({0.5, 0.5}), 3, 2) == doctest::Approx(0.25));
    CHECK(delta(PhantomVector({0.125, 0.125, 0.625, 0.625}), 5, 4) == doctest::Approx(0.25));
    CHECK_THROWS_AS(delta(PhantomVector({0.5}), 3, 2), Error);
}

TEST_CASE("nearest-level quantile gap") {
    CHECK(delta_lift(QueryPlan({0.5}), 3, 2) == doctest::Approx(0.25));
    CHECK(delta_lift(QueryPlan(optimal_phantoms(3).levels), 4, 3) == doctest::Approx(0.0));
    CHECK(delta_lift(QueryPlan({0.125, 0.625}), 5, 4) == doctest::Approx(0.25));
}

TEST_CASE("gap of a lifted plan matches the nearest-level form exactly") {
    Rng rng(21);
    for (int trial = 0; trial < 300; ++trial) {
        int n = 2 * rng.uniform_int(1, 7) + 1;
        int n_r = rng.uniform_int(0, n - 1);
        int n_u = n - n_r;
        int k = rng.uniform_int(1, n_u);
        std::vector<double> lv;
        for (int i = 0; i < k; ++i) lv.push_back(rng.uniform(0.0, 1.0));
        std::sort(lv.begin(), lv.end());
        QueryPlan q(lv);
        CHECK(delta(lift(q, n_r, n_u), n_r, n_u) == delta_lift(q, n_r, n_u));
    }
}

TEST_CASE("the lift minimizes the gap over vectors drawn from the plan's levels") {
    Rng rng(22);
    for (int trial = 0; trial < 300; ++trial) {
        int n = 2 * rng.uniform_int(2, 7) + 1;
        int n_r = rng.uniform_int(1, n - 1);
        int n_u = n - n_r;
        int k = rng.uniform_int(1, std::max(1, n_u - 1));
        std::vector<double> lv;
        for (int i = 0; i < k; ++i) lv.push_back(rng.uniform(0.0, 1.0));
        std::sort(lv.begin(), lv.end());
        QueryPlan q(lv);
        std::vector<double> w;
        for (int i = 0; i < n_u; ++i) w.push_back(lv[rng.uniform_int(0, k - 1)]);
        std::sort(w.begin(), w.end());
        CHECK(delta(lift(q, n_r, n_u), n_r, n_u) <= delta(PhantomVector(w), n_r, n_u) + 1e-15);
    }
}

TEST_CASE("upper bound formulas") {
    CHECK(sar_upper(Regime::zero, 5, 3) == doctest::Approx(1.5));
    CHECK(sar_upper(Regime::median, 5, 3) == doctest::Approx(1.5));
    CHECK(sar_upper(Regime::full, 5, 3) == doctest::Approx(1.0));
    CHECK(sar_upper(Regime::zero, 5, 0) == std::numeric_limits<double>::infinity());
    CHECK(sar_upper(Regime::median, 5, 4) == doctest::Approx(1.0));  // n_u = 1
    QueryPlan med_plan({0.5});
    CHECK(sar_upper(Regime::k_quantile, 5, 3, &med_plan) == doctest::Approx(1.5));
}

TEST_CASE("lower bound formulas") {
    CHECK(sar_lower(LowerRegime::zero, 5, 3) == doctest::Approx(1.5));
    CHECK(sar_lower(LowerRegime::median, 5, 3, 0, true) == doctest::Approx(1.5));  // 4/1.6 - 1
    CHECK(sar_lower(LowerRegime::k_quantile_even_grid, 15, 5, 2) == doctest::Approx(5.0 / 3.0));
    CHECK_THROWS_AS(sar_lower(LowerRegime::k_quantile_even_grid, 15, 5, 4), Error);  // 4 does not divide 10
    // odd-k branch, plus the k = 1 degeneracy falling back to the trivial bound
    CHECK(sar_lower(LowerRegime::k_quantile_even_grid, 9, 3, 3) ==
          doctest::Approx(1.0 + 12.0 / (9.0 + 6.0 - 10.0)));
    CHECK(sar_lower(LowerRegime::k_quantile_even_grid, 5, 3, 1) == doctest::Approx(1.0));
    // the summary-table variant of the intermediate lower bound
    CHECK(sar_lower_table_k(9, 3, 2) == doctest::Approx(1.4));
    CHECK(sar_lower_table_k(9, 5, 2) == doctest::Approx(1.25));
    CHECK_THROWS_AS(sar_lower_table_k(15, 5, 4), Error);
    // lambda == 1/3 sits on the first branch; the finite-n form is weaker
    CHECK(sar_lower(LowerRegime::median, 9, 3, 0, true) == doctest::Approx(2.0));
    CHECK(sar_lower(LowerRegime::median, 9, 3, 0, false) == doctest::Approx(1.25));
    // strictly below 1/3
    CHECK(sar_lower(LowerRegime::median, 9, 2, 0, false) == doctest::Approx(1.0 + 2.0 * (2.0 / 9.0) / (7.0 / 9.0)));
}

TEST_CASE("zero-information bound is exact in rational arithmetic") {
    for (int n : {3, 5, 7, 9, 11, 15, 21, 51, 101}) {
        for (int n_r = 1; n_r <= n; n_r += 2) {
            CHECK(sar_zero_rational_counts(n, n_r) == sar_zero_rational_lambda(n, n_r));
            CHECK(sar_zero_rational_counts(n, n_r).value() ==
                  doctest::Approx(sar_upper(Regime::zero, n, n_r)).epsilon(1e-15));
        }
    }
    CHECK(sar_zero_rational_counts(5, 3) == Rational(3, 2));
}

TEST_CASE("optimal query plan") {
    CHECK(optimal_query_plan(2, 5, 4).levels == std::vector<double>{0.25, 0.75});
    CHECK(optimal_query_plan(3, 4, 3).levels == optimal_phantoms(3).levels);
    auto uneven = optimal_query_plan(2, 6, 5);
    REQUIRE(uneven.k() == 2);
    CHECK(uneven.levels[0] == doctest::Approx(0.3));
    CHECK(uneven.levels[1] == doctest::Approx(0.8));
    CHECK(optimal_query_plan(9, 4, 3).levels == optimal_phantoms(3).levels);  // k > n_u clamps
}

TEST_CASE("optimal plan reduces the gap to (sigma-1)/(2 n_u) on the full range") {
    for (int k : {1, 2, 3, 6}) {
        int n_u = 6, n_r = 7;  // n = 13, full relevant range
        auto q = optimal_query_plan(k, n_r, n_u);
        CHECK(delta_lift(q, n_r, n_u) == doctest::Approx((6.0 / k - 1.0) / 12.0));
    }
}

TEST_CASE("phantom mechanism with optimal levels attains the optimum") {
    Rng rng(23);
    for (int trial = 0; trial < 500; ++trial) {
        Instance inst = random_instance(rng, 15);
        auto mu = random_mixture(rng, 6);
        double y = pqm(inst, optimal_phantoms(inst.n_u()), mu);
        double opt = esc(inst, mu, solve_optimal(inst, mu).canonical);
        CHECK(esc(inst, mu, y) == doctest::Approx(opt).epsilon(1e-9));
    }
}

TEST_CASE("mechanisms are anonymous") {
    Rng rng(24);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 2 * rng.uniform_int(1, 7) + 1;
        int n_r = rng.uniform_int(1, n);
        std::vector<double> x;
        for (int i = 0; i < n_r; ++i) x.push_back(rng.uniform(-10.0, 10.0));
        auto mu = random_mixture(rng, 4);
        auto w = optimal_phantoms(n - n_r);
        double base = pqm(Instance(n, x), w, mu);
        for (int s = 0; s < 5; ++s) {
            std::swap(x[rng.uniform_int(0, n_r - 1)], x[rng.uniform_int(0, n_r - 1)]);
            CHECK(pqm(Instance(n, x), w, mu) == base);
        }
    }
}

TEST_CASE("phantom mechanisms are truthful under fuzzing") {
    Rng shape_rng(25);
    for (int combo = 0; combo < 5; ++combo) {
        int n = 2 * shape_rng.uniform_int(1, 7) + 1;
        int n_r = shape_rng.uniform_int(1, n);
        int n_u = n - n_r;
        std::vector<double> lv;
        for (int i = 0; i < n_u; ++i) lv.push_back(shape_rng.uniform(0.0, 1.0));
        std::sort(lv.begin(), lv.end());
        PhantomVector w(lv);
        Mechanism1 mech = [w](const Instance& inst, const PiecewiseUniform& mu) { return pqm(inst, w, mu); };
        InstanceSampler1 sampler = [n, n_r](Rng& rng) {
            std::vector<double> x;
            for (int i = 0; i < n_r; ++i) x.push_back(rng.uniform(-10.0, 10.0));
            return SinglePair{Instance(n, std::move(x)), random_mixture(rng)};
        };
        FuzzReport rep = truthfulness_fuzz(mech, sampler, 10000, 900 + combo);
        CHECK(rep.worst_regret <= 1e-12);
    }
}

TEST_CASE("a broken mechanism is caught by the fuzzer") {
    Mechanism1 mean_mech = [](const Instance& inst, const PiecewiseUniform&) {
        double s = 0.0;
        for (double x : inst.reports()) s += x;
        return s / inst.n_r();
    };
    InstanceSampler1 sampler = [](Rng& rng) {
        std::vector<double> x;
        for (int i = 0; i < 3; ++i) x.push_back(rng.uniform(-10.0, 10.0));
        return SinglePair{Instance(5, std::move(x)), random_mixture(rng)};
    };
    FuzzReport rep = truthfulness_fuzz(mean_mech, sampler, 1000, 77);
    CHECK(rep.worst_regret > 1e-9);
}

TEST_CASE("bounds are ordered within the zero, median, and full regimes") {
    for (int n = 3; n <= 101; n += 2) {
        for (int n_r = 1; n_r <= n; ++n_r) {
            CHECK(sar_lower(LowerRegime::zero, n, n_r) <= sar_upper(Regime::zero, n, n_r) + 1e-9);
            double med_up = sar_upper(Regime::median, n, n_r);
            CHECK(sar_lower(LowerRegime::median, n, n_r, 0, false) <= med_up + 1e-9);
            CHECK(sar_lower(LowerRegime::median, n, n_r, 0, true) <= med_up + 1e-9);
            CHECK(1.0 <= sar_upper(Regime::full, n, n_r));
        }
    }
}

TEST_CASE("the ratio formula is strictly increasing in the gap") {
    // single-level plans on (5, 3): the gap shrinks as the level approaches
    // the midpoint of the two targets
    double prev = std::numeric_limits<double>::infinity();
    for (double t : {0.25, 0.30, 0.35, 0.40, 0.45, 0.50}) {
        QueryPlan q({t});
        double v = sar_upper(Regime::k_quantile, 5, 3, &q);
        CHECK(v <= prev + 1e-15);
        if (t < 0.5) CHECK(v < prev);
        prev = v;
    }
}
