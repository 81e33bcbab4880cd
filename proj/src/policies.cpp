#include "capalloc/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "capalloc/solver.hpp"

namespace capalloc {

void ThresholdPolicy::validate(const ProblemConfig& config) const {
    if (s.size() != config.K) throw InvalidInput("threshold vector must have length K");
    if (s[0] != 0) throw InvalidInput("threshold s_0 must be 0");
    for (int j = 1; j < config.K; ++j)
        if (s[j] < 0 || s[j] > (config.K - j) * config.A)
            throw InvalidInput("threshold s_" + std::to_string(j) + " out of range");
}

void TabularPolicy::validate(const StateSpace& space, const ProblemConfig& config) const {
    if (size() != space.size()) throw ContractViolation("policy size does not match the state space");
    for (Index i = 0; i < size(); ++i)
        if (!is_feasible(space.state(i), (*this)[i], config.M))
            throw ContractViolation("policy action at state " + std::to_string(i) + " is infeasible");
}

bool TabularPolicy::operator==(const TabularPolicy& other) const {
    if (size() != other.size()) return false;
    for (Index i = 0; i < size(); ++i)
        if ((*this)[i] != other[i]) return false;
    return true;
}

TabularPolicy do_nothing_policy(const StateSpace& space) {
    std::vector<Action> actions;
    actions.reserve(static_cast<std::size_t>(space.size()));
    for (Index i = 0; i < space.size(); ++i) {
        Action y = Action::Zero(space.horizon());
        y[0] = space.digit(i, 0);
        actions.push_back(std::move(y));
    }
    return TabularPolicy(std::move(actions));
}

Action apply_thresholds(const ThresholdPolicy& policy, const State& x, const ProblemConfig& config) {
    if (policy.s.size() != x.size())
        throw ContractViolation("apply_thresholds: threshold and state dimensions differ");
    Action y = Action::Zero(x.size());
    y[0] = x[0];
    int remaining = std::max(config.M - x[0], 0);
    for (Index j = 1; j < x.size() && remaining > 0; ++j) {
        y[j] = std::min(std::max(x[j] - policy.s[j], 0), remaining);
        remaining -= y[j];
    }
    return y;
}

double risk_factor(double p0, double p1) {
    const double denom = 1.0 - p0 * p0 - p0 * p1;
    if (denom <= 1e-12) return std::numeric_limits<double>::infinity();
    return (1.0 + p0 - p0 * p1 - p0 * p0) / denom;
}

ThresholdPolicy closed_form_thresholds(const ProblemConfig& config, const ArrivalModel& model) {
    ThresholdPolicy policy{Eigen::VectorXi::Zero(config.K)};
    for (int j = 1; j < config.K; ++j) {
        const double theta = risk_factor(model.p(j - 1, 0), model.p(j - 1, 1));
        if (std::isfinite(theta) && config.ce * theta <= config.co)
            policy.s[j] = 0;
        else if (config.ce <= config.co)
            policy.s[j] = 1;
        else
            policy.s[j] = config.A;
    }
    return policy;
}

ThresholdPolicy never_early_thresholds(const ProblemConfig& config) {
    ThresholdPolicy policy{Eigen::VectorXi::Zero(config.K)};
    for (int j = 1; j < config.K; ++j) policy.s[j] = (config.K - j) * config.A;
    return policy;
}

ThresholdPolicy local_optimal_thresholds(const ProblemConfig& config, const ArrivalModel& model) {
    ProblemConfig aux = config;
    aux.K = 2;
    aux.load = LoadPattern::Custom;
    aux.q = std::vector<double>{0.5, 0.5};
    aux.seed.reset();
    const StateSpace space(2, config.A);

    ThresholdPolicy result{Eigen::VectorXi::Zero(config.K)};
    for (int j = 0; j + 1 < config.K; ++j) {
        ArrivalModel pair;
        pair.q = model.q.segment(j, 2);
        pair.rates = model.rates.segment(j, 2);
        pair.p = model.p.middleRows(j, 2);

        double old_cost = std::numeric_limits<double>::infinity();
        int threshold = 0;
        for (int s = config.A; s >= 0; --s) {
            const ThresholdPolicy candidate{Eigen::Vector2i(0, s)};
            const double cost =
                evaluate_policy(threshold_to_tabular(candidate, space, aux), space, pair, aux).g;
            if (cost > old_cost + tie_tolerance(config)) {
                threshold = s + 1;
                break;
            }
            old_cost = cost;
        }
        result.s[j + 1] = threshold;
    }
    return result;
}

ThresholdPolicy threshold_heuristic(const ProblemConfig& config, const ArrivalModel& model) {
    return config.M == 1 ? closed_form_thresholds(config, model)
                         : local_optimal_thresholds(config, model);
}

TabularPolicy threshold_to_tabular(const ThresholdPolicy& policy, const StateSpace& space,
                                   const ProblemConfig& config) {
    std::vector<Action> actions;
    actions.reserve(static_cast<std::size_t>(space.size()));
    for (Index i = 0; i < space.size(); ++i)
        actions.push_back(apply_thresholds(policy, space.state(i), config));
    return TabularPolicy(std::move(actions));
}

}  // namespace capalloc
