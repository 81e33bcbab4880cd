#include "capalloc/solver.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace capalloc {

namespace {

// Index offsets and probabilities of every arrival vector with positive probability.
std::vector<std::pair<Index, double>> arrival_offsets(const ArrivalModel& model,
                                                      const StateSpace& space) {
    const int K = space.horizon();
    const int A = space.max_arrivals();
    std::vector<std::pair<Index, double>> out;
    std::vector<int> a(K, 0);
    while (true) {
        double prob = 1.0;
        Index offset = 0;
        for (int j = 0; j < K; ++j) {
            prob *= model.p(j, a[j]);
            offset += a[j] * space.stride(j);
        }
        if (prob > 0.0) out.emplace_back(offset, prob);
        int j = 0;
        while (j < K && a[j] == A) a[j++] = 0;
        if (j == K) break;
        ++a[j];
    }
    return out;
}

Index base_post_index(const State& x, const StateSpace& space) {
    Index i = 0;
    for (int j = 0; j + 1 < space.horizon(); ++j) i += x[j + 1] * space.stride(j);
    return i;
}

double fixed_policy_residual(const PolicyKernel& kernel, const Eigen::VectorXd& h, double g,
                             const ArrivalModel& model, const StateSpace& space) {
    const Eigen::VectorXd e = arrival_expectation(h, model, space);
    double worst = 0.0;
    for (Index i = 0; i < space.size(); ++i) {
        const double r = kernel.cost[i] + e[kernel.post[i]] - h[i] - g;
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

Evaluation evaluate_direct(const PolicyKernel& kernel, const StateSpace& space,
                           const ArrivalModel& model, const SolverOptions& options) {
    const Index n = space.size();
    const auto offsets = arrival_offsets(model, space);

    // Bordered system: column 0 carries the gain since h(empty) = 0.
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(n) * (offsets.size() + 2));
    for (Index i = 0; i < n; ++i) {
        triplets.emplace_back(i, 0, 1.0);
        if (i != 0) triplets.emplace_back(i, i, 1.0);
        for (const auto& [offset, prob] : offsets) {
            const Index col = kernel.post[i] + offset;
            if (col != 0) triplets.emplace_back(i, col, -prob);
        }
    }
    Eigen::SparseMatrix<double> B(n, n);
    B.setFromTriplets(triplets.begin(), triplets.end());
    B.makeCompressed();

    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(B);
    if (lu.info() != Eigen::Success)
        throw NumericalError("evaluate_policy: sparse factorization failed: " + lu.lastErrorMessage());

    Eigen::VectorXd w = lu.solve(kernel.cost);
    if (lu.info() != Eigen::Success) throw NumericalError("evaluate_policy: sparse solve failed");

    Evaluation ev;
    auto unpack = [&](const Eigen::VectorXd& sol) {
        ev.g = sol[0];
        ev.h = sol;
        ev.h[0] = 0.0;
        ev.residual = fixed_policy_residual(kernel, ev.h, ev.g, model, space);
    };
    unpack(w);
    for (int refine = 0; refine < 3 && ev.residual > options.residual_tolerance * 1e-3; ++refine) {
        const Eigen::VectorXd r = kernel.cost - B * w;
        w += lu.solve(r);
        unpack(w);
    }
    return ev;
}

Evaluation evaluate_iterative(const PolicyKernel& kernel, const StateSpace& space,
                              const ArrivalModel& model, const SolverOptions& options) {
    const Index n = space.size();
    Eigen::VectorXd h = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd next(n);
    Evaluation ev;
    for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
        const Eigen::VectorXd e = arrival_expectation(h, model, space);
        for (Index i = 0; i < n; ++i) next[i] = kernel.cost[i] + e[kernel.post[i]];
        const double g = next[0];
        next.array() -= g;
        // next - h equals the evaluation-equation residual of h with gain g.
        const double residual = (next - h).cwiseAbs().maxCoeff();
        h.swap(next);
        if (residual <= options.residual_tolerance * 1e-3) break;
    }
    ev.h = h;
    ev.h[0] = 0.0;
    const Eigen::VectorXd e = arrival_expectation(ev.h, model, space);
    ev.g = kernel.cost[0] + e[kernel.post[0]];
    ev.residual = fixed_policy_residual(kernel, ev.h, ev.g, model, space);
    return ev;
}

// Walks the feasible actions of x in lexicographic order, reporting each one's
// stage cost and post-decision index.
template <typename Visit>
void for_each_action(const State& x, const StateSpace& space, const ProblemConfig& config,
                     Visit&& visit) {
    const int K = space.horizon();
    const double overtime = config.co * std::max(x[0] - config.M, 0);
    const Index base = base_post_index(x, space);
    Action y = Action::Zero(K);
    y[0] = x[0];
    auto rec = [&](auto&& self, int j, int remaining, double early, Index post) -> void {
        if (j == K) {
            visit(y, overtime + config.ce * early, post);
            return;
        }
        const int top = std::min(x[j], remaining);
        for (int k = 0; k <= top; ++k) {
            y[j] = k;
            self(self, j + 1, remaining - k, early + static_cast<double>(j) * k,
                 post - k * space.stride(j - 1));
        }
        y[j] = 0;
    };
    rec(rec, 1, std::max(config.M - x[0], 0), 0.0, base);
}

TabularPolicy improve_with_incumbent(const Evaluation& evaluation, const StateSpace& space,
                                     const ArrivalModel& model, const ProblemConfig& config,
                                     const TabularPolicy* incumbent, TieBreak ties) {
    const Eigen::VectorXd e = arrival_expectation(evaluation.h, model, space);
    const double tol = tie_tolerance(config);
    std::vector<Action> actions(static_cast<std::size_t>(space.size()));
    std::vector<double> values;
    std::vector<Action> candidates;
    for (Index i = 0; i < space.size(); ++i) {
        const State x = space.state(i);
        values.clear();
        candidates.clear();
        for_each_action(x, space, config, [&](const Action& y, double cost, Index post) {
            candidates.push_back(y);
            values.push_back(cost + e[post]);
        });
        const double best = *std::min_element(values.begin(), values.end());
        std::size_t pick = 0;
        if (ties == TieBreak::Smallest) {
            while (values[pick] > best + tol) ++pick;
        } else {
            pick = values.size() - 1;
            while (values[pick] > best + tol) --pick;
        }
        if (incumbent != nullptr) {
            const Action& current = (*incumbent)[i];
            for (std::size_t k = 0; k < candidates.size(); ++k) {
                if (candidates[k] == current) {
                    if (values[k] <= best + tol) pick = k;
                    break;
                }
            }
        }
        actions[static_cast<std::size_t>(i)] = candidates[pick];
    }
    return TabularPolicy(std::move(actions));
}

}  // namespace

PolicyKernel make_policy_kernel(const TabularPolicy& policy, const StateSpace& space,
                                const ProblemConfig& config) {
    if (policy.size() != space.size())
        throw ContractViolation("policy size does not match the state space");
    PolicyKernel kernel;
    kernel.cost.resize(space.size());
    kernel.post.resize(static_cast<std::size_t>(space.size()));
    for (Index i = 0; i < space.size(); ++i) {
        const State x = space.state(i);
        const Action& y = policy[i];
        kernel.cost[i] = stage_cost(x, y, config);
        Index post = 0;
        for (int j = 0; j + 1 < space.horizon(); ++j) post += (x[j + 1] - y[j + 1]) * space.stride(j);
        kernel.post[static_cast<std::size_t>(i)] = post;
    }
    return kernel;
}

Evaluation evaluate_policy(const TabularPolicy& policy, const StateSpace& space,
                           const ArrivalModel& model, const ProblemConfig& config,
                           const SolverOptions& options) {
    const PolicyKernel kernel = make_policy_kernel(policy, space, config);
    Evaluation ev;
    switch (options.method) {
        case EvaluationMethod::Direct:
            ev = evaluate_direct(kernel, space, model, options);
            break;
        case EvaluationMethod::Iterative:
            ev = evaluate_iterative(kernel, space, model, options);
            break;
        case EvaluationMethod::Auto:
            ev = evaluate_iterative(kernel, space, model, options);
            if (!(ev.residual <= options.residual_tolerance) &&
                static_cast<double>(space.size()) * std::pow(space.max_arrivals() + 1.0, space.horizon()) <=
                    static_cast<double>(options.direct_nonzero_limit))
                ev = evaluate_direct(kernel, space, model, options);
            break;
    }
    if (!(ev.residual <= options.residual_tolerance)) {
        std::ostringstream os;
        os << "evaluate_policy: residual " << ev.residual << " exceeds tolerance "
           << options.residual_tolerance;
        throw NumericalError(os.str(), ev.residual);
    }
    return ev;
}

double tie_tolerance(const ProblemConfig& config) {
    return 1e-10 * std::max(config.ce, config.co);
}

TabularPolicy improve_policy(const Evaluation& evaluation, const StateSpace& space,
                             const ArrivalModel& model, const ProblemConfig& config,
                             TieBreak ties) {
    return improve_with_incumbent(evaluation, space, model, config, nullptr, ties);
}

std::vector<double> action_values(Index i, const Eigen::VectorXd& expectation,
                                  const StateSpace& space, const ProblemConfig& config) {
    std::vector<double> values;
    for_each_action(space.state(i), space, config, [&](const Action&, double cost, Index post) {
        values.push_back(cost + expectation[post]);
    });
    return values;
}

PolicyIterationResult policy_iteration(const TabularPolicy& initial, const StateSpace& space,
                                       const ArrivalModel& model, const ProblemConfig& config,
                                       const SolverOptions& options) {
    PolicyIterationResult result;
    result.policy = initial;
    result.evaluation = evaluate_policy(initial, space, model, config, options);
    result.gains.push_back(result.evaluation.g);
    for (int it = 1; it <= options.max_policy_iterations; ++it) {
        TabularPolicy next =
            improve_with_incumbent(result.evaluation, space, model, config, &result.policy,
                                   TieBreak::Smallest);
        result.iterations = it;
        if (next == result.policy) return result;
        result.policy = std::move(next);
        result.evaluation = evaluate_policy(result.policy, space, model, config, options);
        result.gains.push_back(result.evaluation.g);
    }
    throw NumericalError("policy_iteration: no convergence within " +
                         std::to_string(options.max_policy_iterations) + " iterations");
}

double optimality_gap(const TabularPolicy& policy, const Evaluation& evaluation,
                      const StateSpace& space, const ArrivalModel& model,
                      const ProblemConfig& config) {
    const Eigen::VectorXd e = arrival_expectation(evaluation.h, model, space);
    double worst = 0.0;
    for (Index i = 0; i < space.size(); ++i) {
        const State x = space.state(i);
        double best = std::numeric_limits<double>::infinity();
        double chosen = std::numeric_limits<double>::quiet_NaN();
        for_each_action(x, space, config, [&](const Action& y, double cost, Index post) {
            const double v = cost + e[post];
            best = std::min(best, v);
            if (y == policy[i]) chosen = v;
        });
        if (std::isnan(chosen)) throw ContractViolation("optimality_gap: infeasible policy action");
        worst = std::max(worst, chosen - best);
    }
    return worst;
}

namespace {

ValueTable finite_horizon_step(const ValueTable& prev, const ProblemConfig& config,
                               const ArrivalModel& model) {
    const int A = config.A;
    const int M = config.M;
    const double tol = tie_tolerance(config);
    // W(z) = E V_{n-1}(a_0 + z, a_1) for z = x_1 - y_1 in [0, A]
    Eigen::VectorXd W = Eigen::VectorXd::Zero(A + 1);
    for (int z = 0; z <= A; ++z)
        for (int a0 = 0; a0 <= A; ++a0)
            for (int a1 = 0; a1 <= A; ++a1)
                W[z] += model.p(0, a0) * model.p(1, a1) * prev.V(a0 + z, a1);

    ValueTable next;
    next.n = prev.n + 1;
    next.V.resize(2 * A + 1, A + 1);
    next.argmin.resize(2 * A + 1, A + 1);
    for (int x0 = 0; x0 <= 2 * A; ++x0) {
        for (int x1 = 0; x1 <= A; ++x1) {
            const int top = std::min(x1, std::max(M - x0, 0));
            double best = std::numeric_limits<double>::infinity();
            for (int y1 = 0; y1 <= top; ++y1) best = std::min(best, config.ce * y1 + W[x1 - y1]);
            int pick = 0;
            while (config.ce * pick + W[x1 - pick] > best + tol) ++pick;
            next.V(x0, x1) = config.co * std::max(x0 - M, 0) + best;
            next.argmin(x0, x1) = pick;
        }
    }
    return next;
}

ValueTable zero_table(int A) {
    ValueTable t;
    t.n = 0;
    t.V = Eigen::MatrixXd::Zero(2 * A + 1, A + 1);
    t.argmin = Eigen::MatrixXi::Zero(2 * A + 1, A + 1);
    return t;
}

}  // namespace

std::vector<ValueTable> finite_horizon_sequence(int N, const ProblemConfig& config,
                                                const ArrivalModel& model) {
    if (config.K != 2) throw InvalidInput("finite_horizon_values supports K = 2 only");
    if (N < 0) throw InvalidInput("finite_horizon_values needs n >= 0");
    std::vector<ValueTable> seq;
    seq.reserve(static_cast<std::size_t>(N) + 1);
    seq.push_back(zero_table(config.A));
    for (int n = 1; n <= N; ++n) seq.push_back(finite_horizon_step(seq.back(), config, model));
    return seq;
}

ValueTable finite_horizon_values(int n, const ProblemConfig& config, const ArrivalModel& model) {
    return finite_horizon_sequence(n, config, model).back();
}

}  // namespace capalloc
