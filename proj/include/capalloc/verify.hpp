#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "capalloc/model.hpp"
#include "capalloc/reference_tables.hpp"
#include "capalloc/sim.hpp"
#include "capalloc/structure.hpp"

namespace capalloc {

/// Aggregated outcome of one verification suite.
struct SuiteReport {
    std::string suite;
    std::vector<CheckReport> reports;

    int instances() const { return static_cast<int>(reports.size()); }
    int failures() const;
    bool passed() const { return failures() == 0; }
    std::string summary(bool verbose = false) const;
};

/// (K, M, A) in {2,3} x {1,2} x {1,2}, (ce, co) in {(10,10), (20,10), (20,5)}, EL/FL/BL
/// loads, lambda = 0.2 A and 0.5 A.
std::vector<ProblemConfig> never_early_grid();
/// M = 1, K = 2, A in {1,2,3}, co/ce in {0.5,1,1.5,2,4} with ce = 10, lambda in
/// {0.2,0.4,1.0}, equal load.
std::vector<ProblemConfig> corollary_grid();
/// Seeded random two-period instances: A <= 3, M <= 3, random loads and costs.
std::vector<ProblemConfig> random_two_period_grid(int count, std::uint64_t seed);
std::vector<ProblemConfig> monotone_grid();   ///< 20 instances
std::vector<ProblemConfig> convexity_grid();  ///< 10 instances

struct SimulationCase {
    std::string name;
    ProblemConfig config;
    Method method;
    std::uint64_t seed;
};
/// Six (instance, method) pairs from the first published table.
std::vector<SimulationCase> simulation_cases();
inline constexpr int kConvexityHorizon = 20;

/// Suites: monotone, convexity, never-early, proposition1, corollary1, simulation,
/// kernel (row sums on every suite and reproduction instance), policy-iteration
/// (gain never increases and at most 50 iterations on the same instances).
/// Throws InvalidInput for unknown names.
SuiteReport verify_suite(std::string_view name, const SimOptions& sim = {});

const std::vector<std::string>& suite_names();

/// The tabular policy a method produces on an instance (opt from policy iteration).
TabularPolicy build_policy(Method method, const ProblemConfig& config, const ArrivalModel& model,
                           const StateSpace& space);

}  // namespace capalloc
