#pragma once

#include <functional>
#include <vector>

#include "capalloc/model.hpp"
#include "capalloc/policies.hpp"

namespace capalloc {

/// Gain and bias of a stationary policy, with h pinned to 0 at the empty state.
struct Evaluation {
    double g = 0.0;
    Eigen::VectorXd h;
    /// max_x |u(x, pi(x)) + sum_x' P h(x') - h(x) - g|
    double residual = 0.0;
};

enum class EvaluationMethod {
    Auto,       ///< iterative, falling back to direct when it stalls and the kernel is small
    Direct,     ///< sparse LU on the bordered system
    Iterative,  ///< relative value iteration on the fixed policy
};

struct SolverOptions {
    EvaluationMethod method = EvaluationMethod::Auto;
    double residual_tolerance = 1e-9;
    /// Auto only falls back to the direct method for kernels up to this many nonzeros.
    Index direct_nonzero_limit = 3'000'000;
    int max_sweeps = 20'000;
    int max_policy_iterations = 1000;
};

/// Precomputed per-state stage cost and post-decision index of a policy.
struct PolicyKernel {
    Eigen::VectorXd cost;
    std::vector<Index> post;
};

PolicyKernel make_policy_kernel(const TabularPolicy& policy, const StateSpace& space,
                                const ProblemConfig& config);

/// Solves h(x) + g = u(x, pi(x)) + sum_x' P[x'|x, pi(x)] h(x'), h(empty) = 0.
/// Throws NumericalError when the residual cannot be brought below tolerance.
Evaluation evaluate_policy(const TabularPolicy& policy, const StateSpace& space,
                           const ArrivalModel& model, const ProblemConfig& config,
                           const SolverOptions& options = {});

/// Cost-proportional slack used when comparing action values.
double tie_tolerance(const ProblemConfig& config);

/// Which of several tied minimizers an improvement step keeps.
enum class TieBreak {
    Smallest,  ///< lexicographically smallest, i.e. idle before serving early
    Largest,   ///< lexicographically largest, i.e. serve early when it costs nothing extra
};

/// One-step improvement: per state, the action minimizing u(x,y) + E h(next); actions
/// within tie_tolerance of the minimum count as tied and `ties` picks among them.
TabularPolicy improve_policy(const Evaluation& evaluation, const StateSpace& space,
                             const ArrivalModel& model, const ProblemConfig& config,
                             TieBreak ties = TieBreak::Smallest);

/// Action values u(x,y) + E h(next) for every feasible y at state index i, in
/// feasible_actions order. `expectation` is arrival_expectation(h).
std::vector<double> action_values(Index i, const Eigen::VectorXd& expectation,
                                  const StateSpace& space, const ProblemConfig& config);

struct PolicyIterationResult {
    TabularPolicy policy;
    Evaluation evaluation;
    int iterations = 0;
    /// Gain of the policy evaluated at each iteration, starting with the initial one.
    std::vector<double> gains;
};

/// Evaluate/improve until the policy is stable. The improvement step keeps the
/// incumbent action whenever it ties with the best one, which rules out cycling.
PolicyIterationResult policy_iteration(const TabularPolicy& initial, const StateSpace& space,
                                       const ArrivalModel& model, const ProblemConfig& config,
                                       const SolverOptions& options = {});

/// Largest violation of the optimality equation by `policy` given its own evaluation:
/// max_x [value(x, pi(x)) - min_y value(x, y)]. Zero (up to rounding) at an optimum.
double optimality_gap(const TabularPolicy& policy, const Evaluation& evaluation,
                      const StateSpace& space, const ArrivalModel& model,
                      const ProblemConfig& config);

/// Finite-horizon values of a two-period system over x_0 <= 2A, x_1 <= A.
struct ValueTable {
    int n = 0;
    Eigen::MatrixXd V;       ///< V(x_0, x_1)
    Eigen::MatrixXi argmin;  ///< smallest minimizing y_1
};

/// Backward recursion from V_0 = 0. Throws InvalidInput unless K = 2.
ValueTable finite_horizon_values(int n, const ProblemConfig& config, const ArrivalModel& model);

/// V_0, V_1, ..., V_N.
std::vector<ValueTable> finite_horizon_sequence(int N, const ProblemConfig& config,
                                                const ArrivalModel& model);

}  // namespace capalloc
