#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "capalloc/model.hpp"
#include "capalloc/reference_tables.hpp"
#include "capalloc/solver.hpp"

namespace capalloc {

/// One row of a results table.
struct ScenarioResult {
    std::string scenario;
    ProblemConfig config;
    Method method = Method::Opt;
    double avg_cost = 0.0;
    double runtime_sec = 0.0;
    /// Policy-iteration iterations; set for opt only.
    std::optional<int> iterations;
};

struct ExperimentOptions {
    SolverOptions solver;
    /// Tie rule for the one-step improvements behind dn1s and th1s.
    TieBreak ties = TieBreak::Smallest;
};

struct Scenario {
    std::string id;
    ProblemConfig config;
};

/// Builds and evaluates each requested method, in kAllMethods order regardless of the
/// order in `methods`. Each method is timed from scratch.
std::vector<ScenarioResult> run_scenario(const std::string& id, const ProblemConfig& config,
                                         const std::vector<Method>& methods,
                                         const ExperimentOptions& options = {});

/// Runs the scenarios on up to `workers` threads. Rows come back in scenario order,
/// then method order.
std::vector<ScenarioResult> run_scenarios(const std::vector<Scenario>& scenarios,
                                          const std::vector<Method>& methods,
                                          const ExperimentOptions& options, int workers);

/// CAPALLOC_WORKERS if set to a positive integer, otherwise the hardware concurrency.
int default_worker_count();

std::string csv_header();
std::string csv_row(const ScenarioResult& result);
void write_csv(std::ostream& out, const std::vector<ScenarioResult>& results);

struct CellDeviation {
    LoadPattern load;
    int A;
    Method method;
    double published;
    double computed;
    double deviation;
};

struct ReproductionReport {
    int table = 0;
    std::vector<ScenarioResult> results;
    std::vector<CellDeviation> cells;
    /// Rows that were not run, with the reason.
    std::vector<std::string> skipped;

    static constexpr double tolerance = 0.005;
    double max_deviation() const;
    int failures() const;
    bool passed() const { return failures() == 0; }
    /// Human-readable per-cell listing.
    std::string summary() const;
};

/// Runs every EL/FL/BL row of a published table with lambda = 0.2 A. AL rows are
/// skipped; `fast` also skips long cells.
ReproductionReport reproduce_table(int id, bool fast, const ExperimentOptions& options = {},
                                   int workers = 1);

}  // namespace capalloc
