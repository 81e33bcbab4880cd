#include <doctest.h>

#include "capalloc/experiment.hpp"
#include "capalloc/solver.hpp"
#include "oracle.hpp"

using namespace capalloc;

namespace {

ProblemConfig make(int K, int M, int A, double lambda, double ce, double co,
                   LoadPattern load = LoadPattern::Equal) {
    ProblemConfig c;
    c.K = K;
    c.M = M;
    c.A = A;
    c.lambda = lambda;
    c.ce = ce;
    c.co = co;
    c.load = load;
    return c;
}

oracle::Instance mirror(const ProblemConfig& c) {
    const ArrivalModel m = build_arrival_model(c);
    oracle::Instance in{c.K, c.M, c.A, c.ce, c.co, {}};
    for (int j = 0; j < c.K; ++j) in.p.push_back(oracle::poisson_row(m.rates[j], c.A));
    return in;
}

oracle::Policy as_oracle(const TabularPolicy& policy, const StateSpace& space) {
    return [&policy, &space](const oracle::Vec& x) {
        const Action& y = policy[space.index(Eigen::Map<const Eigen::VectorXi>(x.data(), static_cast<Index>(x.size())))];
        return oracle::Vec(y.data(), y.data() + y.size());
    };
}

}  // namespace

TEST_CASE("policy evaluation matches the stationary distribution") {
    for (const ProblemConfig& c : {make(2, 1, 2, 0.7, 5, 20), make(3, 1, 1, 0.4, 10, 20, LoadPattern::BackLoaded),
                                   make(3, 2, 2, 1.3, 3, 7, LoadPattern::FrontLoaded)}) {
        const StateSpace space = enumerate_states(c);
        const ArrivalModel model = build_arrival_model(c);
        const oracle::Instance in = mirror(c);
        const ThresholdPolicy eager{Eigen::VectorXi::Zero(c.K)};
        for (const TabularPolicy& pi : {do_nothing_policy(space), threshold_to_tabular(eager, space, c)}) {
            const double ref = oracle::gain(in, as_oracle(pi, space));
            for (auto method : {EvaluationMethod::Direct, EvaluationMethod::Iterative, EvaluationMethod::Auto}) {
                SolverOptions opt;
                opt.method = method;
                const Evaluation ev = evaluate_policy(pi, space, model, c, opt);
                CHECK(ev.g == doctest::Approx(ref).epsilon(1e-10));
                CHECK(ev.residual <= 1e-9);
                CHECK(ev.h[StateSpace::empty_index()] == 0.0);
            }
        }
    }
}

TEST_CASE("do-nothing gain equals the overtime of the convolved load") {
    for (const ProblemConfig& c : {make(4, 1, 2, 0.4, 5, 20), make(5, 1, 2, 0.4, 5, 20, LoadPattern::BackLoaded),
                                   make(5, 1, 2, 0.4, 5, 20, LoadPattern::FrontLoaded),
                                   make(4, 5, 3, 0.6, 10, 20)}) {
        const StateSpace space = enumerate_states(c);
        const double g = evaluate_policy(do_nothing_policy(space), space, build_arrival_model(c), c).g;
        CHECK(g == doctest::Approx(oracle::do_nothing_gain_by_convolution(mirror(c))).epsilon(1e-10));
    }
}

TEST_CASE("policy iteration finds the exhaustive optimum") {
    for (const ProblemConfig& c : {make(2, 1, 1, 0.5, 5, 20), make(2, 2, 1, 1.5, 4, 9), make(2, 1, 2, 0.8, 10, 20),
                                   make(3, 1, 1, 0.6, 5, 20, LoadPattern::BackLoaded)}) {
        const StateSpace space = enumerate_states(c);
        const ArrivalModel model = build_arrival_model(c);
        const PolicyIterationResult pi = policy_iteration(do_nothing_policy(space), space, model, c);
        CHECK(pi.evaluation.g == doctest::Approx(oracle::best_gain_exhaustive(mirror(c))).epsilon(1e-9));
        CHECK(optimality_gap(pi.policy, pi.evaluation, space, model, c) <= 1e-9);
        for (std::size_t k = 1; k < pi.gains.size(); ++k) CHECK(pi.gains[k] <= pi.gains[k - 1] + 1e-12);
        CHECK(pi.gains.size() == static_cast<std::size_t>(pi.iterations));
    }
}

TEST_CASE("improvement never makes a policy worse") {
    const ProblemConfig c = make(4, 1, 2, 0.4, 10, 20, LoadPattern::BackLoaded);
    const StateSpace space = enumerate_states(c);
    const ArrivalModel model = build_arrival_model(c);
    const TabularPolicy dn = do_nothing_policy(space);
    const Evaluation base = evaluate_policy(dn, space, model, c);
    for (TieBreak ties : {TieBreak::Smallest, TieBreak::Largest}) {
        const TabularPolicy better = improve_policy(base, space, model, c, ties);
        CHECK_NOTHROW(better.validate(space, c));
        CHECK(evaluate_policy(better, space, model, c).g <= base.g + 1e-12);
    }
}

TEST_CASE("tie rules pick the extreme minimizers") {
    // ce = co makes serving one job a period early exactly as costly as overtime.
    const ProblemConfig c = make(2, 1, 1, 0.6, 10, 10);
    const StateSpace space = enumerate_states(c);
    const ArrivalModel model = build_arrival_model(c);
    const Evaluation ev = evaluate_policy(do_nothing_policy(space), space, model, c);
    const Eigen::VectorXd e = arrival_expectation(ev.h, model, space);
    const TabularPolicy lo = improve_policy(ev, space, model, c, TieBreak::Smallest);
    const TabularPolicy hi = improve_policy(ev, space, model, c, TieBreak::Largest);
    for (Index i = 0; i < space.size(); ++i) {
        const auto values = action_values(i, e, space, c);
        const auto actions = feasible_actions(space.state(i), c);
        const double best = *std::min_element(values.begin(), values.end());
        std::size_t first = values.size(), last = 0;
        for (std::size_t k = 0; k < values.size(); ++k)
            if (values[k] <= best + tie_tolerance(c)) {
                first = std::min(first, k);
                last = k;
            }
        CHECK(lo[i] == actions[first]);
        CHECK(hi[i] == actions[last]);
    }
}

TEST_CASE("scaling both costs scales the gain and keeps the policy") {
    const ProblemConfig c = make(3, 1, 2, 0.4, 10, 20, LoadPattern::FrontLoaded);
    ProblemConfig scaled = c;
    scaled.ce *= 3.5;
    scaled.co *= 3.5;
    const StateSpace space = enumerate_states(c);
    const ArrivalModel model = build_arrival_model(c);
    const auto a = policy_iteration(do_nothing_policy(space), space, model, c);
    const auto b = policy_iteration(do_nothing_policy(space), space, model, scaled);
    CHECK(b.evaluation.g == doctest::Approx(3.5 * a.evaluation.g).epsilon(1e-10));
    CHECK(a.policy == b.policy);
}

TEST_CASE("zero arrivals cost nothing") {
    const ProblemConfig c = make(3, 1, 2, 0.0, 10, 20);
    for (const ScenarioResult& r : run_scenario("zero", c, {kAllMethods.begin(), kAllMethods.end()}))
        CHECK(r.avg_cost == 0.0);
}

TEST_CASE("iteration cap raises a numerical error") {
    const ProblemConfig c = make(3, 1, 2, 0.4, 5, 20);
    const StateSpace space = enumerate_states(c);
    SolverOptions opt;
    opt.max_policy_iterations = 1;
    CHECK_THROWS_AS(policy_iteration(do_nothing_policy(space), space, build_arrival_model(c), c, opt),
                    NumericalError);
}

TEST_CASE("finite-horizon recursion") {
    const ProblemConfig c = make(2, 1, 2, 0.5, 5, 20);
    const ArrivalModel model = build_arrival_model(c);
    const ValueTable v0 = finite_horizon_values(0, c, model);
    CHECK(v0.V.isZero());
    CHECK(v0.V.rows() == 5);
    CHECK(v0.V.cols() == 3);
    // One period left: only the immediate cost matters, so idling is best.
    const ValueTable v1 = finite_horizon_values(1, c, model);
    for (int x0 = 0; x0 <= 4; ++x0)
        for (int x1 = 0; x1 <= 2; ++x1) {
            CHECK(v1.V(x0, x1) == doctest::Approx(20.0 * std::max(x0 - 1, 0)));
            CHECK(v1.argmin(x0, x1) == 0);
        }
    const auto seq = finite_horizon_sequence(6, c, model);
    REQUIRE(seq.size() == 7);
    CHECK(seq[6].V.isApprox(finite_horizon_values(6, c, model).V));
    for (std::size_t n = 1; n < seq.size(); ++n) CHECK((seq[n].V.array() >= seq[n - 1].V.array() - 1e-12).all());
    CHECK_THROWS_AS(finite_horizon_values(2, make(3, 1, 1, 0.2, 5, 20), model), InvalidInput);
}
