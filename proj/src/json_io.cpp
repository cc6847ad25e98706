#include "flpaa/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace flpaa {

namespace {

[[noreturn]] void schema_fail(const std::string& what) { fail(errc::schema, what); }

const json& need(const json& j, const char* key) {
    if (!j.contains(key)) schema_fail(std::string("missing field '") + key + "'");
    return j.at(key);
}

double need_num(const json& j, const char* key) {
    const json& v = need(j, key);
    if (!v.is_number()) schema_fail(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

int need_int(const json& j, const char* key) {
    const json& v = need(j, key);
    if (!v.is_number_integer()) schema_fail(std::string("field '") + key + "' must be an integer");
    return v.get<int>();
}

std::vector<double> need_reals(const json& j, const char* key) {
    const json& v = need(j, key);
    if (!v.is_array()) schema_fail(std::string("field '") + key + "' must be an array");
    std::vector<double> out;
    for (const json& e : v) {
        if (!e.is_number()) schema_fail(std::string("field '") + key + "' must hold numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

}  // namespace

std::string fmt12(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

PiecewiseUniform parse_distribution(const json& j, std::optional<long> ell) {
    if (!j.is_object()) schema_fail("distribution must be an object");
    if (j.contains("segments")) {
        const json& arr = j.at("segments");
        if (!arr.is_array() || arr.empty()) schema_fail("'segments' must be a nonempty array");
        std::vector<Segment> segs;
        for (const json& e : arr) {
            if (!e.is_array() || e.size() != 3) schema_fail("each segment must be [lo, hi, mass]");
            segs.push_back({e[0].get<double>(), e[1].get<double>(), e[2].get<double>()});
        }
        return PiecewiseUniform(std::move(segs));
    }
    if (j.contains("atoms")) {
        const json& arr = j.at("atoms");
        if (!arr.is_array() || arr.empty()) schema_fail("'atoms' must be a nonempty array");
        std::vector<Atom> atoms;
        for (const json& e : arr) {
            if (!e.is_array() || e.size() != 2) schema_fail("each atom must be [point, weight]");
            atoms.push_back({e[0].get<double>(), e[1].get<double>()});
        }
        std::string side = need(j, "side").get<std::string>();
        Side s;
        if (side == "left")
            s = Side::left;
        else if (side == "right")
            s = Side::right;
        else if (side == "centered")
            s = Side::centered;
        else
            schema_fail("'side' must be one of left, right, centered");
        long use_ell = j.contains("ell") ? j.at("ell").get<long>() : ell.value_or(0);
        if (use_ell < 1) schema_fail("atom distributions need an 'ell' to realize");
        return ConcentrationFamily(std::move(atoms), s).realize(use_ell);
    }
    schema_fail("distribution needs 'segments' or 'atoms'");
}

Instance parse_instance(const json& j) {
    if (!j.is_object()) schema_fail("instance must be an object");
    return Instance(need_int(j, "n"), need_reals(j, "reports"));
}

TwoInstance parse_two_instance(const json& j) {
    if (!j.is_object()) schema_fail("two-facility instance must be an object");
    return TwoInstance(need_int(j, "c"), need_reals(j, "reports"));
}

QueryPlan parse_plan(const json& j) {
    if (!j.is_object()) schema_fail("plan must be an object");
    return QueryPlan(need_reals(j, "levels"));
}

InstanceFamily parse_family(const json& j) {
    std::string name = need(j, "name").get<std::string>();
    if (name == "zero-info") return family_zero_info(need_int(j, "n"), need_int(j, "n_r"));
    if (name == "median-info") return family_median_info(need_int(j, "n"), need_int(j, "n_r"));
    if (name == "k-grid") return family_k_quantile(need_int(j, "n"), need_int(j, "n_r"), need_int(j, "k"));
    if (name == "lift-gap")
        return family_lift_gap(need_int(j, "n"), need_int(j, "n_r"), parse_plan(need(j, "plan")));
    if (name == "two-unbounded") return family_two_facility_unbounded(need_int(j, "c"), need_int(j, "n_r"));
    schema_fail("unknown family '" + name + "'");
}

json outcome_to_json(const TwoFacilityOutcome& out) {
    json j;
    j["y"] = {out.y1, out.y2};
    j["matching"] = out.matching;
    j["spare"] = {out.spare1, out.spare2};
    if (out.has_threshold) j["z"] = out.threshold_z;
    return j;
}

namespace {

// Single-facility mechanism spec:
//   {"regime": "zero" | "median" | "full"}
//   {"regime": "k", "plan": {"levels": [...]}}
//   {"regime": "fixed", "y": real}        (diagnostic responder)
struct Mech1Spec {
    std::string regime;
    std::optional<QueryPlan> plan;
    double fixed_y = 0.0;
};

Mech1Spec parse_mech1(const json& j) {
    Mech1Spec spec;
    spec.regime = need(j, "regime").get<std::string>();
    if (spec.regime == "k")
        spec.plan = parse_plan(need(j, "plan"));
    else if (spec.regime == "fixed")
        spec.fixed_y = need_num(j, "y");
    else if (spec.regime != "zero" && spec.regime != "median" && spec.regime != "full")
        schema_fail("unknown regime '" + spec.regime + "'");
    return spec;
}

Mechanism1 realize_mech1(const Mech1Spec& spec) {
    if (spec.regime == "zero")
        return [](const Instance& inst, const PiecewiseUniform&) { return median_mechanism(inst); };
    if (spec.regime == "median")
        return [](const Instance& inst, const PiecewiseUniform& mu) {
            return pqm(inst, PhantomVector(std::vector<double>(inst.n_u(), 0.5)), mu);
        };
    if (spec.regime == "full")
        return [](const Instance& inst, const PiecewiseUniform& mu) {
            return pqm(inst, optimal_phantoms(inst.n_u()), mu);
        };
    if (spec.regime == "fixed") {
        double y = spec.fixed_y;
        return [y](const Instance&, const PiecewiseUniform&) { return y; };
    }
    QueryPlan plan = *spec.plan;
    return [plan](const Instance& inst, const PiecewiseUniform& mu) {
        return pqm(inst, lift(plan, inst.n_r(), inst.n_u()), mu);
    };
}

Mechanism2 realize_mech2(const json& j) {
    std::string name = need(j, "name").get<std::string>();
    if (name == "pom") return [](const TwoInstance& i, const PiecewiseUniform& m) { return pom(i, m); };
    if (name == "aqm") return [](const TwoInstance& i, const PiecewiseUniform& m) { return aqm(i, m); };
    if (name == "igm") return [](const TwoInstance& i, const PiecewiseUniform& m) { return igm(i, m); };
    if (name == "optimal")
        return [](const TwoInstance& i, const PiecewiseUniform& m) { return solve_optimal2(i, m); };
    if (name == "cem") {
        QueryPlan plan = parse_plan(need(j, "plan"));
        return [plan](const TwoInstance& i, const PiecewiseUniform& m) { return cem(i, m, plan); };
    }
    if (name == "fixed") {
        std::vector<double> y = need_reals(j, "y");
        if (y.size() != 2) schema_fail("fixed placement needs two facility positions");
        return fixed_placement(y[0], y[1]);
    }
    schema_fail("unknown two-facility mechanism '" + name + "'");
}

void write_artifact(const std::string& out_path, const std::string& payload) {
    if (out_path.empty()) return;
    std::ofstream f(out_path, std::ios::binary);
    if (!f) fail(errc::schema, "cannot open output path " + out_path);
    f << payload;
}

std::vector<long> parse_schedule(const json& config) {
    if (!config.contains("ells")) return default_schedule();
    std::vector<long> out;
    for (const json& e : config.at("ells")) out.push_back(e.get<long>());
    if (out.empty()) schema_fail("'ells' must be nonempty");
    return out;
}

int run_solve(const json& config, const std::string& out_path, std::ostream& os) {
    Instance inst = parse_instance(need(config, "instance"));
    PiecewiseUniform mu = parse_distribution(need(config, "distribution"));
    OptimalSet opt = solve_optimal(inst, mu);
    double cost = esc(inst, mu, opt.canonical);
    os << "optimal interval [" << fmt12(opt.lo) << ", " << fmt12(opt.hi) << "]\n";
    os << "canonical " << fmt12(opt.canonical) << "\n";
    os << "esc " << fmt12(cost) << "\n";
    json j;
    j["optimal"] = {{"lo", opt.lo}, {"hi", opt.hi}, {"canonical", opt.canonical}};
    j["esc"] = cost;
    write_artifact(out_path, j.dump(2) + "\n");
    return 0;
}

int run_mech(const json& config, const std::string& out_path, std::ostream& os) {
    Mech1Spec spec = parse_mech1(need(config, "mechanism"));
    Instance inst(1, {});
    PiecewiseUniform mu = PiecewiseUniform::uniform(0.0, 1.0);
    if (config.contains("family")) {
        InstanceFamily fam = parse_family(config.at("family"));
        long ell = config.contains("ell") ? config.at("ell").get<long>() : 10000;
        GeneratedInstance g = fam.generate(ell);
        const SinglePair* p = std::get_if<SinglePair>(&g);
        if (p == nullptr) fail(errc::regime, "'mech' runs single-facility families only");
        inst = p->inst;
        mu = p->mu;
    } else {
        inst = parse_instance(need(config, "instance"));
        mu = parse_distribution(need(config, "distribution"));
    }
    double y = realize_mech1(spec)(inst, mu);
    double mech_cost = esc(inst, mu, y);
    double opt_cost = esc(inst, mu, solve_optimal(inst, mu).canonical);
    double ratio = opt_cost > 0 ? mech_cost / opt_cost : 1.0;
    os << "mechanism " << fmt12(y) << "\n";
    os << "esc " << fmt12(mech_cost) << "\n";
    os << "ratio " << fmt12(ratio) << "\n";
    json j;
    j["y"] = y;
    j["esc"] = mech_cost;
    j["ratio"] = ratio;
    write_artifact(out_path, j.dump(2) + "\n");
    return 0;
}

void sar_rows_for(int n, int n_r, const std::vector<int>& ks, std::ostringstream& csv) {
    double lambda = static_cast<double>(n_r) / n;
    int n_u = n - n_r;
    for (int k : ks) {
        double upper, lower;
        if (k <= 0) {
            upper = sar_upper(Regime::zero, n, n_r);
            lower = sar_lower(LowerRegime::zero, n, n_r);
        } else if (k == 1) {
            upper = sar_upper(Regime::median, n, n_r);
            lower = sar_lower(LowerRegime::median, n, n_r, 0, /*asymptotic=*/true);
        } else if (k < n_u) {
            QueryPlan plan = optimal_query_plan(k, n_r, n_u);
            upper = sar_upper(Regime::k_quantile, n, n_r, &plan);
            lower = (k % 2 == 0 && n_u % k == 0) ? sar_lower(LowerRegime::k_quantile_even_grid, n, n_r, k)
                                                 : std::numeric_limits<double>::quiet_NaN();
        } else {
            upper = sar_upper(Regime::full, n, n_r);
            lower = 1.0;
        }
        csv << fmt12(lambda) << "," << k << "," << fmt12(upper) << ","
            << (std::isnan(lower) ? "" : fmt12(lower)) << "\n";
    }
}

int run_sar_table(const json& config, const std::string& out_path, std::ostream& os) {
    std::ostringstream csv;
    csv << "lambda,k,upper,lower\n";
    if (config.contains("rows")) {
        for (const json& row : config.at("rows")) {
            int n = need_int(row, "n");
            int n_r = need_int(row, "n_r");
            sar_rows_for(n, n_r, {need_int(row, "k")}, csv);
        }
    } else if (config.contains("sweep")) {
        const json& sweep = config.at("sweep");
        int max_n = need_int(sweep, "max_n");
        for (const json& lam : need(sweep, "lambdas")) {
            if (!lam.is_array() || lam.size() != 2) schema_fail("each lambda must be [num, den]");
            int p = lam[0].get<int>(), q = lam[1].get<int>();
            if (q < 1 || p < 0 || p > q) schema_fail("lambda must be a fraction in [0, 1]");
            for (int n = q; n <= max_n; n += q) {
                if (n % 2 == 0) continue;
                int n_r = n / q * p;
                int n_u = n - n_r;
                std::vector<int> ks = {0, 1};
                for (int k = 2; k < n_u; ++k)
                    if (k % 2 == 0 && n_u % k == 0) ks.push_back(k);
                if (n_u >= 1) ks.push_back(n_u);
                sar_rows_for(n, n_r, ks, csv);
            }
        }
    } else {
        int n = need_int(config, "n");
        int n_r = need_int(config, "n_r");
        std::vector<int> ks;
        for (const json& e : need(config, "ks")) ks.push_back(e.get<int>());
        sar_rows_for(n, n_r, ks, csv);
    }
    os << csv.str();
    write_artifact(out_path, csv.str());
    return 0;
}

int run_adversary(const json& config, const std::string& out_path, std::ostream& os) {
    InstanceFamily fam = parse_family(need(config, "family"));
    std::vector<long> schedule = parse_schedule(config);
    const json& mech = need(config, "mechanism");
    RatioTrace trace = mech.contains("regime")
                           ? empirical_sar(realize_mech1(parse_mech1(mech)), fam, schedule)
                           : empirical_sar(realize_mech2(mech), fam, schedule);
    std::ostringstream csv;
    csv << "ell,ratio\n";
    for (std::size_t i = 0; i < trace.ells.size(); ++i)
        csv << trace.ells[i] << "," << (trace.divergent[i] ? "divergent" : fmt12(trace.ratios[i])) << "\n";
    os << csv.str();
    if (trace.has_limit) os << "limit " << fmt12(trace.limit_claim) << "\n";
    write_artifact(out_path, csv.str());
    return 0;
}

int run_two_fac(const json& config, const std::string& out_path, std::ostream& os) {
    TwoInstance inst = parse_two_instance(need(config, "instance"));
    PiecewiseUniform mu = parse_distribution(need(config, "distribution"));
    TwoFacilityOutcome out = realize_mech2(need(config, "mechanism"))(inst, mu);
    double cost = esc2(inst, mu, out);
    os << "facilities (" << fmt12(out.y1) << ", " << fmt12(out.y2) << ")\n";
    os << "esc " << fmt12(cost) << "\n";
    json j = outcome_to_json(out);
    j["esc"] = cost;
    write_artifact(out_path, j.dump(2) + "\n");
    return 0;
}

int run_fuzz(const json& config, const std::string& out_path, std::ostream& os) {
    long trials = need_int(config, "trials");
    std::uint64_t seed = static_cast<std::uint64_t>(need_num(config, "seed"));
    const json& shape = need(config, "shape");
    const json& mech = need(config, "mechanism");
    FuzzReport rep;
    if (mech.contains("regime")) {
        int n = need_int(shape, "n");
        int n_r = need_int(shape, "n_r");
        InstanceSampler1 sampler = [n, n_r](Rng& rng) {
            std::vector<double> x;
            for (int i = 0; i < n_r; ++i) x.push_back(rng.uniform(-10.0, 10.0));
            return SinglePair{Instance(n, std::move(x)), random_mixture(rng)};
        };
        rep = truthfulness_fuzz(realize_mech1(parse_mech1(mech)), sampler, trials, seed);
    } else {
        int c = need_int(shape, "c");
        int n_r = need_int(shape, "n_r");
        InstanceSampler2 sampler = [c, n_r](Rng& rng) {
            std::vector<double> x;
            for (int i = 0; i < n_r; ++i) x.push_back(rng.uniform(-10.0, 10.0));
            return TwoPair{TwoInstance(c, std::move(x)), random_mixture(rng)};
        };
        rep = truthfulness_fuzz(realize_mech2(mech), sampler, trials, seed);
    }
    os << "worst regret " << fmt12(rep.worst_regret) << "\n";
    os << "trials " << rep.trials << "\n";
    json j;
    j["worst_regret"] = rep.worst_regret;
    j["trials"] = rep.trials;
    j["seed"] = rep.seed;
    j["worst_trial"] = rep.worst_trial;
    write_artifact(out_path, j.dump(2) + "\n");
    return 0;
}

}  // namespace

int run_config(const json& config, const std::string& out_path, std::ostream& os) {
    if (!config.is_object()) schema_fail("config must be a JSON object");
    std::string command = need(config, "command").get<std::string>();
    if (command == "solve") return run_solve(config, out_path, os);
    if (command == "mech") return run_mech(config, out_path, os);
    if (command == "sar-table") return run_sar_table(config, out_path, os);
    if (command == "adversary") return run_adversary(config, out_path, os);
    if (command == "two-fac") return run_two_fac(config, out_path, os);
    if (command == "fuzz") return run_fuzz(config, out_path, os);
    schema_fail("unknown command '" + command + "'");
}

}  // namespace flpaa
