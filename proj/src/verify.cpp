#include "capalloc/verify.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "capalloc/policies.hpp"
#include "capalloc/solver.hpp"

namespace capalloc {

namespace {

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

int pick(std::mt19937_64& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

CheckReport failure(const std::string& check, const ProblemConfig& config, const std::string& what) {
    CheckReport r;
    r.check = check;
    r.instance = config.fingerprint();
    r.violations.push_back({State(), 0.0, 0.0, what});
    return r;
}

SuiteReport monotone_suite() {
    SuiteReport suite{"monotone", {}};
    for (const ProblemConfig& c : monotone_grid()) {
        const StateSpace space = enumerate_states(c);
        const ArrivalModel model = build_arrival_model(c);
        const PolicyIterationResult opt = policy_iteration(do_nothing_policy(space), space, model, c);
        // Smallest minimizer of the optimality equation.
        const TabularPolicy smallest = improve_policy(opt.evaluation, space, model, c, TieBreak::Smallest);
        CheckReport r = check_monotone_in_x1(smallest, space);
        r.instance = c.fingerprint();
        suite.reports.push_back(std::move(r));
    }
    return suite;
}

SuiteReport convexity_suite() {
    SuiteReport suite{"convexity", {}};
    for (const ProblemConfig& c : convexity_grid()) {
        const ArrivalModel model = build_arrival_model(c);
        CheckReport r = check_value_properties(finite_horizon_sequence(kConvexityHorizon, c, model));
        r.instance = c.fingerprint();
        suite.reports.push_back(std::move(r));
    }
    return suite;
}

SuiteReport never_early_suite() {
    SuiteReport suite{"never-early", {}};
    for (const ProblemConfig& c : never_early_grid()) {
        const StateSpace space = enumerate_states(c);
        const ArrivalModel model = build_arrival_model(c);
        const PolicyIterationResult opt = policy_iteration(do_nothing_policy(space), space, model, c);
        suite.reports.push_back(check_never_early(opt.policy, opt.evaluation, space, model, c, 1e-9));
    }
    return suite;
}

SuiteReport corollary_suite(bool proposition_only) {
    SuiteReport suite{proposition_only ? "proposition1" : "corollary1", {}};
    for (const ProblemConfig& c : corollary_grid()) {
        if (proposition_only && c.A != 2) continue;
        const ArrivalModel model = build_arrival_model(c);
        suite.reports.push_back(proposition_only ? check_proposition1(c, model, 1e-9)
                                                 : check_corollary1(c, model, 1e-9));
    }
    return suite;
}

SuiteReport simulation_suite(const SimOptions& base) {
    SuiteReport suite{"simulation", {}};
    for (const SimulationCase& sc : simulation_cases()) {
        const StateSpace space = enumerate_states(sc.config);
        const ArrivalModel model = build_arrival_model(sc.config);
        const TabularPolicy policy = build_policy(sc.method, sc.config, model, space);
        const double g = evaluate_policy(policy, space, model, sc.config).g;
        SimOptions opts = base;
        opts.seed = sc.seed;
        const SimResult first = simulate(policy, sc.config, model, opts);
        SimOptions again = opts;
        again.workers = opts.workers == 1 ? 2 : 1;
        const SimResult second = simulate(policy, sc.config, model, again);

        CheckReport r;
        r.check = "simulation";
        r.instance = sc.name + " " + std::string(to_string(sc.method)) + " " + sc.config.fingerprint();
        std::ostringstream note;
        note.precision(8);
        note << "exact " << g << " sim " << first.mean_cost << " se " << first.std_error << " ratio "
             << std::abs(first.mean_cost - g) / first.std_error;
        r.note = note.str();
        if (!(std::abs(first.mean_cost - g) <= 3.0 * first.std_error))
            r.violations.push_back({State(), first.mean_cost, g, "outside 3 standard errors"});
        if (first.mean_cost != second.mean_cost || !(first.std_error == second.std_error))
            r.violations.push_back({State(), second.mean_cost, first.mean_cost, "not reproducible"});
        suite.reports.push_back(std::move(r));
    }
    return suite;
}

std::vector<ProblemConfig> all_instances() {
    std::vector<ProblemConfig> out;
    for (const ReferenceTable& t : reference_tables())
        for (const ReferenceRow& row : t.rows)
            if (row.load != LoadPattern::Arbitrary) out.push_back(t.config(row));
    for (auto grid : {never_early_grid(), corollary_grid(), monotone_grid(), convexity_grid()})
        out.insert(out.end(), grid.begin(), grid.end());
    return out;
}

SuiteReport kernel_suite() {
    SuiteReport suite{"kernel", {}};
    for (const ProblemConfig& c : all_instances()) {
        const StateSpace space = enumerate_states(c);
        const ArrivalModel model = build_arrival_model(c);
        CheckReport arrivals = check_arrival_rows(model, 1e-12);
        CheckReport kernel = check_kernel_rows(c, model, space, 1e-12);
        kernel.check = "arrival+kernel rows";
        kernel.violations.insert(kernel.violations.end(), arrivals.violations.begin(),
                                 arrivals.violations.end());
        suite.reports.push_back(std::move(kernel));
    }
    return suite;
}

SuiteReport policy_iteration_suite() {
    SuiteReport suite{"policy-iteration", {}};
    for (const ProblemConfig& c : all_instances()) {
        const StateSpace space = enumerate_states(c);
        const ArrivalModel model = build_arrival_model(c);
        CheckReport r;
        r.check = "policy-iteration";
        r.instance = c.fingerprint();
        try {
            const PolicyIterationResult pi = policy_iteration(do_nothing_policy(space), space, model, c);
            for (std::size_t k = 1; k < pi.gains.size(); ++k) {
                // Gains within rounding of each other count as equal.
                const double slack = 1e-9 * std::max(1.0, std::abs(pi.gains[k - 1]));
                if (pi.gains[k] > pi.gains[k - 1] + slack)
                    r.violations.push_back({State(), pi.gains[k], pi.gains[k - 1],
                                            "gain increased at iteration " + std::to_string(k)});
            }
            if (pi.iterations > 50)
                r.violations.push_back({State(), static_cast<double>(pi.iterations), 50.0,
                                        "more than 50 iterations"});
            r.note = "iterations " + std::to_string(pi.iterations);
        } catch (const NumericalError& e) {
            r = failure("policy-iteration", c, e.what());
        }
        suite.reports.push_back(std::move(r));
    }
    return suite;
}

}  // namespace

int SuiteReport::failures() const {
    int n = 0;
    for (const auto& r : reports) n += r.passed() ? 0 : 1;
    return n;
}

std::string SuiteReport::summary(bool verbose) const {
    std::ostringstream os;
    os << suite << ": " << instances() << " instances, " << failures() << " failing -> "
       << (passed() ? "PASS" : "FAIL") << '\n';
    for (const auto& r : reports) {
        if (!verbose && r.passed()) continue;
        os << "  [" << (r.passed() ? "ok" : "FAIL") << "] " << r.instance;
        if (!r.note.empty()) os << "  (" << r.note << ')';
        os << '\n';
        std::size_t shown = 0;
        for (const auto& v : r.violations) {
            if (++shown > 5) {
                os << "      ... " << r.violations.size() - 5 << " more\n";
                break;
            }
            os << "      x=(";
            for (Index j = 0; j < v.state.size(); ++j) os << (j ? "," : "") << v.state[j];
            os << ") observed " << v.observed << " expected " << v.expected << ": " << v.detail << '\n';
        }
    }
    return os.str();
}

std::vector<ProblemConfig> never_early_grid() {
    std::vector<ProblemConfig> out;
    const std::pair<double, double> costs[] = {{10, 10}, {20, 10}, {20, 5}};
    for (int K : {2, 3})
        for (int M : {1, 2})
            for (int A : {1, 2})
                for (auto [ce, co] : costs)
                    for (LoadPattern load : {LoadPattern::Equal, LoadPattern::FrontLoaded, LoadPattern::BackLoaded})
                        for (double rate : {0.2, 0.5}) {
                            ProblemConfig c;
                            c.K = K;
                            c.M = M;
                            c.A = A;
                            c.lambda = rate * A;
                            c.ce = ce;
                            c.co = co;
                            c.load = load;
                            out.push_back(c);
                        }
    return out;
}

std::vector<ProblemConfig> corollary_grid() {
    std::vector<ProblemConfig> out;
    for (int A : {1, 2, 3})
        for (double ratio : {0.5, 1.0, 1.5, 2.0, 4.0})
            for (double lambda : {0.2, 0.4, 1.0}) {
                ProblemConfig c;
                c.K = 2;
                c.M = 1;
                c.A = A;
                c.lambda = lambda;
                c.ce = 10.0;
                c.co = ratio * 10.0;
                out.push_back(c);
            }
    return out;
}

std::vector<ProblemConfig> random_two_period_grid(int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<ProblemConfig> out;
    for (int k = 0; k < count; ++k) {
        ProblemConfig c;
        c.K = 2;
        c.A = pick(rng, 1, 3);
        c.M = pick(rng, 1, 3);
        c.lambda = (0.1 + 0.9 * unit(rng)) * c.A;
        c.ce = 1.0 + 19.0 * unit(rng);
        c.co = 1.0 + 39.0 * unit(rng);
        const int load = pick(rng, 0, 3);
        c.load = static_cast<LoadPattern>(load);
        if (c.load == LoadPattern::Arbitrary) c.seed = rng();
        out.push_back(c);
    }
    return out;
}

std::vector<ProblemConfig> monotone_grid() { return random_two_period_grid(20, 20260101); }

std::vector<ProblemConfig> convexity_grid() { return random_two_period_grid(10, 20260202); }

std::vector<SimulationCase> simulation_cases() {
    const ReferenceTable& t = reference_table(1);
    auto row = [&](LoadPattern load, int A) {
        for (const ReferenceRow& r : t.rows)
            if (r.load == load && r.A == A) return t.config(r);
        throw ContractViolation("simulation_cases: missing row");
    };
    return {{"T1-EL-A1", row(LoadPattern::Equal, 1), Method::DN, 101},
            {"T1-EL-A1", row(LoadPattern::Equal, 1), Method::TH1S, 102},
            {"T1-FL-A1", row(LoadPattern::FrontLoaded, 1), Method::TH, 103},
            {"T1-BL-A1", row(LoadPattern::BackLoaded, 1), Method::Opt, 104},
            {"T1-EL-A2", row(LoadPattern::Equal, 2), Method::DN1S, 105},
            {"T1-BL-A2", row(LoadPattern::BackLoaded, 2), Method::TH, 106}};
}

TabularPolicy build_policy(Method method, const ProblemConfig& config, const ArrivalModel& model,
                           const StateSpace& space) {
    switch (method) {
        case Method::Opt:
            return policy_iteration(do_nothing_policy(space), space, model, config).policy;
        case Method::DN:
            return do_nothing_policy(space);
        case Method::DN1S: {
            const TabularPolicy dn = do_nothing_policy(space);
            return improve_policy(evaluate_policy(dn, space, model, config), space, model, config);
        }
        case Method::TH:
        case Method::TH1S: {
            const TabularPolicy th = threshold_to_tabular(threshold_heuristic(config, model), space, config);
            if (method == Method::TH) return th;
            return improve_policy(evaluate_policy(th, space, model, config), space, model, config);
        }
    }
    throw ContractViolation("build_policy: unknown method");
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"monotone",     "convexity",  "never-early",
                                                "proposition1", "corollary1", "simulation",
                                                "kernel",       "policy-iteration"};
    return names;
}

SuiteReport verify_suite(std::string_view name, const SimOptions& sim) {
    if (name == "monotone") return monotone_suite();
    if (name == "convexity") return convexity_suite();
    if (name == "never-early") return never_early_suite();
    if (name == "proposition1") return corollary_suite(true);
    if (name == "corollary1") return corollary_suite(false);
    if (name == "simulation") return simulation_suite(sim);
    if (name == "kernel") return kernel_suite();
    if (name == "policy-iteration") return policy_iteration_suite();
    throw InvalidInput("unknown suite '" + std::string(name) + "'");
}

}  // namespace capalloc
