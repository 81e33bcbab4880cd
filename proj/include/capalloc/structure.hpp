#pragma once

#include <string>
#include <vector>

#include "capalloc/model.hpp"
#include "capalloc/policies.hpp"
#include "capalloc/solver.hpp"

namespace capalloc {

struct Violation {
    State state;
    double observed = 0.0;
    double expected = 0.0;
    std::string detail;
};

/// Outcome of one numerical structure check. Passing means no violations.
struct CheckReport {
    std::string check;
    std::string instance;
    std::vector<Violation> violations;
    std::string note;

    bool passed() const { return violations.empty(); }
};

/// Two-period policies only: y_1(x_0, x_1) must be non-decreasing in x_1 for every x_0.
CheckReport check_monotone_in_x1(const TabularPolicy& policy, const StateSpace& space);

/// Each table must be non-decreasing along e_1 + e_2 and convex along each coordinate,
/// wherever all compared points lie in the truncated domain. Slack is relative to the
/// table's largest magnitude.
CheckReport check_value_properties(const std::vector<ValueTable>& tables, double tolerance = 1e-9);

/// Closed-form single-server two-period threshold (any A): s_1 = 0, 1 or A from the
/// risk factor of p_0, compared against the policy-iteration optimum.
ThresholdPolicy two_period_threshold(const ProblemConfig& config, const ArrivalModel& model);

/// M = 1, K = 2, any A: the closed-form threshold policy attains the optimal gain within
/// `tolerance`. When the cost ratio sits on a branch boundary both neighbouring thresholds
/// are tried and the report says so.
CheckReport check_corollary1(const ProblemConfig& config, const ArrivalModel& model,
                             double tolerance = 1e-9);

/// check_corollary1 restricted to A = 2. Throws InvalidInput for other shapes.
CheckReport check_proposition1(const ProblemConfig& config, const ArrivalModel& model,
                               double tolerance = 1e-9);

/// Expected to hold when co <= ce: at every state the do-nothing action attains the
/// minimum of the optimality equation under `evaluation` (within `tolerance`).
CheckReport check_never_early(const TabularPolicy& policy, const Evaluation& evaluation,
                              const StateSpace& space, const ArrivalModel& model,
                              const ProblemConfig& config, double tolerance = 1e-9);

/// Every arrival row sums to 1 and is non-negative.
CheckReport check_arrival_rows(const ArrivalModel& model, double tolerance = 1e-12);

/// For every state and every feasible action, the transition row is positive, stays in
/// the space and sums to 1.
CheckReport check_kernel_rows(const ProblemConfig& config, const ArrivalModel& model,
                              const StateSpace& space, double tolerance = 1e-12);

}  // namespace capalloc
