#pragma once

#include <variant>
#include <vector>

#include "capalloc/model.hpp"

namespace capalloc {

/// S = (0, s_1, ..., s_{K-1}): serve early at lead time j only the excess above s_j,
/// nearest lead times first, while capacity remains.
struct ThresholdPolicy {
    Eigen::VectorXi s;

    int horizon() const { return static_cast<int>(s.size()); }
    /// s_0 = 0 and 0 <= s_j <= (K-j)A.
    void validate(const ProblemConfig& config) const;
    bool operator==(const ThresholdPolicy& other) const { return s == other.s; }
};

/// Stationary deterministic policy stored as one action per state index.
class TabularPolicy {
public:
    TabularPolicy() = default;
    explicit TabularPolicy(std::vector<Action> actions) : actions_(std::move(actions)) {}

    Index size() const { return static_cast<Index>(actions_.size()); }
    const Action& operator[](Index i) const { return actions_[static_cast<std::size_t>(i)]; }
    Action& operator[](Index i) { return actions_[static_cast<std::size_t>(i)]; }
    const std::vector<Action>& actions() const { return actions_; }

    /// Throws ContractViolation unless every entry is feasible for its state.
    void validate(const StateSpace& space, const ProblemConfig& config) const;
    bool operator==(const TabularPolicy& other) const;

private:
    std::vector<Action> actions_;
};

using AnyPolicy = std::variant<TabularPolicy, ThresholdPolicy>;

/// Serve only what is due now.
TabularPolicy do_nothing_policy(const StateSpace& space);

/// y_0 = x_0, then y_j = min((x_j - s_j)^+, remaining capacity) for j = 1..K-1.
Action apply_thresholds(const ThresholdPolicy& policy, const State& x, const ProblemConfig& config);

/// Overtime risk ratio (1 + p0 - p0 p1 - p0^2) / (1 - p0^2 - p0 p1) of a lead-time
/// distribution with p0 = P(0 arrivals), p1 = P(1 arrival). +inf when the denominator
/// vanishes (no arrivals at all).
double risk_factor(double p0, double p1);

/// Rolling closed-form thresholds for single-server systems: position j uses the
/// arrival distribution of lead time j-1.
ThresholdPolicy closed_form_thresholds(const ProblemConfig& config, const ArrivalModel& model);

/// (0, A(K-1), A(K-2), ..., A): thresholds at the positional maxima, never early.
ThresholdPolicy never_early_thresholds(const ProblemConfig& config);

/// Thresholds from K-1 auxiliary two-period problems. For position j+1 the
/// auxiliary chain draws due-now arrivals from p_j and due-next arrivals from p_{j+1};
/// threshold candidates are scanned from A downwards and the scan stops at the first
/// increase of the exact average cost.
ThresholdPolicy local_optimal_thresholds(const ProblemConfig& config, const ArrivalModel& model);

/// The TH heuristic: closed form when M = 1, local-optimal thresholds otherwise.
ThresholdPolicy threshold_heuristic(const ProblemConfig& config, const ArrivalModel& model);

TabularPolicy threshold_to_tabular(const ThresholdPolicy& policy, const StateSpace& space,
                                   const ProblemConfig& config);

}  // namespace capalloc
