#include "capalloc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "capalloc/policies.hpp"

namespace capalloc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

ScenarioResult make_row(const std::string& id, const ProblemConfig& config, Method m) {
    ScenarioResult r;
    r.scenario = id;
    r.config = config;
    r.method = m;
    return r;
}

}  // namespace

std::vector<ScenarioResult> run_scenario(const std::string& id, const ProblemConfig& config,
                                         const std::vector<Method>& methods,
                                         const ExperimentOptions& options) {
    if (methods.empty()) throw InvalidInput("run_scenario: no methods requested");
    config.validate();
    const StateSpace space = enumerate_states(config);
    const ArrivalModel model = build_arrival_model(config);
    const SolverOptions& so = options.solver;

    std::vector<ScenarioResult> rows;
    for (Method m : kAllMethods) {
        if (std::find(methods.begin(), methods.end(), m) == methods.end()) continue;
        ScenarioResult row = make_row(id, config, m);
        const auto start = Clock::now();
        switch (m) {
            case Method::Opt: {
                const PolicyIterationResult pi =
                    policy_iteration(do_nothing_policy(space), space, model, config, so);
                row.avg_cost = pi.evaluation.g;
                row.iterations = pi.iterations;
                break;
            }
            case Method::DN:
                row.avg_cost = evaluate_policy(do_nothing_policy(space), space, model, config, so).g;
                break;
            case Method::DN1S: {
                const Evaluation dn = evaluate_policy(do_nothing_policy(space), space, model, config, so);
                const TabularPolicy improved = improve_policy(dn, space, model, config, options.ties);
                row.avg_cost = evaluate_policy(improved, space, model, config, so).g;
                break;
            }
            case Method::TH:
            case Method::TH1S: {
                const TabularPolicy th =
                    threshold_to_tabular(threshold_heuristic(config, model), space, config);
                Evaluation ev = evaluate_policy(th, space, model, config, so);
                if (m == Method::TH1S) {
                    const TabularPolicy improved = improve_policy(ev, space, model, config, options.ties);
                    ev = evaluate_policy(improved, space, model, config, so);
                }
                row.avg_cost = ev.g;
                break;
            }
        }
        row.runtime_sec = seconds_since(start);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<ScenarioResult> run_scenarios(const std::vector<Scenario>& scenarios,
                                          const std::vector<Method>& methods,
                                          const ExperimentOptions& options, int workers) {
    const std::size_t n = scenarios.size();
    std::vector<std::vector<ScenarioResult>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                slots[i] = run_scenario(scenarios[i].id, scenarios[i].config, methods, options);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int count = std::clamp(workers, 1, static_cast<int>(std::max<std::size_t>(n, 1)));
    if (count == 1) {
        work();
    } else {
        std::vector<std::thread> threads;
        for (int w = 0; w < count; ++w) threads.emplace_back(work);
        for (auto& t : threads) t.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::vector<ScenarioResult> rows;
    for (auto& s : slots)
        for (auto& r : s) rows.push_back(std::move(r));
    return rows;
}

int default_worker_count() {
    if (const char* env = std::getenv("CAPALLOC_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min(v, 256L));
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::string csv_header() {
    return "scenario,load,K,M,A,lambda,ce,co,method,avg_cost,runtime_sec,iterations";
}

std::string csv_row(const ScenarioResult& r) {
    const ProblemConfig& c = r.config;
    std::ostringstream os;
    os << r.scenario << ',' << to_string(c.load) << ',' << c.K << ',' << c.M << ',' << c.A << ','
       << c.lambda << ',' << c.ce << ',' << c.co << ',' << to_string(r.method) << ',' << std::fixed
       << std::setprecision(6) << r.avg_cost << ',' << r.runtime_sec << ',';
    if (r.iterations) os << *r.iterations;
    return os.str();
}

void write_csv(std::ostream& out, const std::vector<ScenarioResult>& results) {
    out << csv_header() << '\n';
    for (const auto& r : results) out << csv_row(r) << '\n';
}

double ReproductionReport::max_deviation() const {
    double worst = 0.0;
    for (const auto& c : cells) worst = std::max(worst, c.deviation);
    return worst;
}

int ReproductionReport::failures() const {
    return static_cast<int>(std::count_if(cells.begin(), cells.end(), [](const CellDeviation& c) {
        return !(c.deviation <= tolerance);
    }));
}

std::string ReproductionReport::summary() const {
    std::ostringstream os;
    os << "table " << table << '\n';
    for (const auto& s : skipped) os << "  " << s << '\n';
    os << std::fixed;
    for (const auto& c : cells) {
        os << "  " << to_string(c.load) << " A=" << c.A << ' ' << std::setw(4) << to_string(c.method)
           << "  published " << std::setprecision(2) << c.published << "  computed "
           << std::setprecision(6) << c.computed << "  |dev| " << c.deviation
           << (c.deviation <= tolerance ? "" : "  EXCEEDS 0.005") << '\n';
    }
    os << "  cells " << cells.size() << ", over tolerance " << failures() << ", max |dev| "
       << std::setprecision(6) << max_deviation() << '\n';
    return os.str();
}

ReproductionReport reproduce_table(int id, bool fast, const ExperimentOptions& options, int workers) {
    const ReferenceTable& table = reference_table(id);
    ReproductionReport report;
    report.table = id;
    std::vector<Scenario> scenarios;
    std::vector<const ReferenceRow*> rows;
    for (const ReferenceRow& row : table.rows) {
        const std::string name =
            "T" + std::to_string(id) + "-" + std::string(to_string(row.load)) + "-A" + std::to_string(row.A);
        if (row.load == LoadPattern::Arbitrary) {
            report.skipped.push_back(name + ": skipped: unpublished q");
            continue;
        }
        if (fast && is_long_cell(table, row)) {
            report.skipped.push_back(name + ": skipped: long cell (--fast)");
            continue;
        }
        scenarios.push_back({name, table.config(row)});
        rows.push_back(&row);
    }
    const std::vector<Method> methods(kAllMethods.begin(), kAllMethods.end());
    report.results = run_scenarios(scenarios, methods, options, workers);
    for (std::size_t k = 0; k < report.results.size(); ++k) {
        const ScenarioResult& r = report.results[k];
        const ReferenceRow& row = *rows[k / kAllMethods.size()];
        const double published = row.value(r.method);
        report.cells.push_back(
            {row.load, row.A, r.method, published, r.avg_cost, std::abs(r.avg_cost - published)});
    }
    return report;
}

}  // namespace capalloc
