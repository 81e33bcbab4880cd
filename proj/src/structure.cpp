#include "capalloc/structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace capalloc {

namespace {

State make_state(int x0, int x1) {
    State x(2);
    x << x0, x1;
    return x;
}

}  // namespace

CheckReport check_monotone_in_x1(const TabularPolicy& policy, const StateSpace& space) {
    if (space.horizon() != 2) throw InvalidInput("check_monotone_in_x1 needs K = 2");
    CheckReport report;
    report.check = "monotone-in-x1";
    for (int x0 = 0; x0 <= space.bound(0); ++x0) {
        for (int x1 = 0; x1 < space.bound(1); ++x1) {
            const int lo = policy[space.index(make_state(x0, x1))][1];
            const int hi = policy[space.index(make_state(x0, x1 + 1))][1];
            if (hi < lo)
                report.violations.push_back({make_state(x0, x1 + 1), static_cast<double>(hi),
                                             static_cast<double>(lo), "y_1 decreases in x_1"});
        }
    }
    return report;
}

CheckReport check_value_properties(const std::vector<ValueTable>& tables, double tolerance) {
    CheckReport report;
    report.check = "value-properties";
    for (const ValueTable& t : tables) {
        const Eigen::MatrixXd& V = t.V;
        const double slack = tolerance * std::max(1.0, V.cwiseAbs().maxCoeff());
        const int rows = static_cast<int>(V.rows());
        const int cols = static_cast<int>(V.cols());
        auto flag = [&](int x0, int x1, double obs, double exp, const char* what) {
            std::ostringstream os;
            os << "n=" << t.n << ": " << what;
            report.violations.push_back({make_state(x0, x1), obs, exp, os.str()});
        };
        for (int x0 = 0; x0 < rows; ++x0) {
            for (int x1 = 0; x1 < cols; ++x1) {
                if (x0 + 1 < rows && x1 + 1 < cols && V(x0, x1) > V(x0 + 1, x1 + 1) + slack)
                    flag(x0, x1, V(x0, x1), V(x0 + 1, x1 + 1), "decreases along e1+e2");
                if (x0 + 2 < rows && 2 * V(x0 + 1, x1) > V(x0, x1) + V(x0 + 2, x1) + slack)
                    flag(x0, x1, 2 * V(x0 + 1, x1), V(x0, x1) + V(x0 + 2, x1), "not convex in x0");
                if (x1 + 2 < cols && 2 * V(x0, x1 + 1) > V(x0, x1) + V(x0, x1 + 2) + slack)
                    flag(x0, x1, 2 * V(x0, x1 + 1), V(x0, x1) + V(x0, x1 + 2), "not convex in x1");
            }
        }
    }
    return report;
}

ThresholdPolicy two_period_threshold(const ProblemConfig& config, const ArrivalModel& model) {
    if (config.K != 2 || config.M != 1)
        throw InvalidInput("the closed-form two-period threshold needs M = 1 and K = 2");
    return closed_form_thresholds(config, model);
}

CheckReport check_corollary1(const ProblemConfig& config, const ArrivalModel& model,
                             double tolerance) {
    const ThresholdPolicy formula = two_period_threshold(config, model);
    const StateSpace space(2, config.A);
    CheckReport report;
    report.check = "corollary1";
    report.instance = config.fingerprint();

    const double theta = risk_factor(model.p(0, 0), model.p(0, 1));
    const double eps = 1e-12 * std::max(1.0, config.co);
    std::vector<int> candidates{formula.s[1]};
    auto add = [&](int s) {
        if (std::find(candidates.begin(), candidates.end(), s) == candidates.end())
            candidates.push_back(s);
    };
    if (std::isfinite(theta) && std::abs(config.ce * theta - config.co) <= eps) {
        add(0);
        add(1);
    }
    if (std::abs(config.co - config.ce) <= eps) {
        add(1);
        add(config.A);
    }
    const bool tie = candidates.size() > 1;

    const PolicyIterationResult opt = policy_iteration(do_nothing_policy(space), space, model, config);
    double best = std::numeric_limits<double>::infinity();
    std::ostringstream note;
    note << "g*=" << opt.evaluation.g;
    for (int s : candidates) {
        const ThresholdPolicy candidate{Eigen::Vector2i(0, s)};
        const double g =
            evaluate_policy(threshold_to_tabular(candidate, space, config), space, model, config).g;
        note << " g(0," << s << ")=" << g;
        best = std::min(best, g);
        if (!tie && std::abs(g - opt.evaluation.g) > tolerance)
            report.violations.push_back({make_state(0, s), g, opt.evaluation.g,
                                         "threshold gain differs from the optimum"});
    }
    if (tie) {
        note << " tie: both thresholds optimal";
        if (std::abs(best - opt.evaluation.g) > tolerance)
            report.violations.push_back({make_state(0, formula.s[1]), best, opt.evaluation.g,
                                         "no boundary threshold attains the optimum"});
    }
    report.note = note.str();
    return report;
}

CheckReport check_proposition1(const ProblemConfig& config, const ArrivalModel& model,
                               double tolerance) {
    if (config.M != 1 || config.K != 2 || config.A != 2)
        throw InvalidInput("check_proposition1 needs M = 1, K = 2, A = 2");
    CheckReport report = check_corollary1(config, model, tolerance);
    report.check = "proposition1";
    return report;
}

CheckReport check_never_early(const TabularPolicy& policy, const Evaluation& evaluation,
                              const StateSpace& space, const ArrivalModel& model,
                              const ProblemConfig& config, double tolerance) {
    CheckReport report;
    report.check = "never-early";
    report.instance = config.fingerprint();
    const Eigen::VectorXd e = arrival_expectation(evaluation.h, model, space);
    Index early_states = 0;
    for (Index i = 0; i < space.size(); ++i) {
        if ((policy[i].tail(space.horizon() - 1).array() != 0).any()) ++early_states;
        // The do-nothing action is always enumerated first.
        const std::vector<double> values = action_values(i, e, space, config);
        const double best = *std::min_element(values.begin(), values.end());
        if (values.front() > best + tolerance)
            report.violations.push_back({space.state(i), values.front(), best,
                                         "idling is worse than serving early"});
    }
    report.note = "states where the policy serves early: " + std::to_string(early_states);
    return report;
}

CheckReport check_arrival_rows(const ArrivalModel& model, double tolerance) {
    CheckReport report;
    report.check = "arrival-rows";
    for (int j = 0; j < model.horizon(); ++j) {
        const double sum = model.p.row(j).sum();
        State where = State::Constant(1, j);
        if (std::abs(sum - 1.0) > tolerance)
            report.violations.push_back({where, sum, 1.0, "row does not sum to 1"});
        if ((model.p.row(j).array() < 0.0).any())
            report.violations.push_back({where, model.p.row(j).minCoeff(), 0.0, "negative entry"});
    }
    return report;
}

CheckReport check_kernel_rows(const ProblemConfig& config, const ArrivalModel& model,
                              const StateSpace& space, double tolerance) {
    CheckReport report;
    report.check = "kernel-rows";
    report.instance = config.fingerprint();
    Index rows = 0;
    for (Index i = 0; i < space.size(); ++i) {
        const State x = space.state(i);
        for (const Action& y : feasible_actions(x, config)) {
            ++rows;
            const auto dist = transition_distribution(x, y, model, space);
            double sum = 0.0;
            for (const auto& [next, prob] : dist) {
                if (!(prob > 0.0) || next < 0 || next >= space.size())
                    report.violations.push_back({x, prob, 0.0, "bad entry"});
                sum += prob;
            }
            if (std::abs(sum - 1.0) > tolerance)
                report.violations.push_back({x, sum, 1.0, "row does not sum to 1"});
        }
    }
    report.note = "rows checked: " + std::to_string(rows);
    return report;
}

}  // namespace capalloc
