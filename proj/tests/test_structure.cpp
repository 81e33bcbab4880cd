#include <doctest.h>

#include "capalloc/structure.hpp"
#include "oracle.hpp"

using namespace capalloc;

namespace {

ProblemConfig two_period(int A, double lambda, double ce, double co, int M = 1) {
    ProblemConfig c;
    c.K = 2;
    c.M = M;
    c.A = A;
    c.lambda = lambda;
    c.ce = ce;
    c.co = co;
    return c;
}

}  // namespace

TEST_CASE("monotone check flags a decreasing early-service count") {
    const ProblemConfig c = two_period(2, 0.4, 5, 20, 2);
    const StateSpace space = enumerate_states(c);
    TabularPolicy policy = do_nothing_policy(space);
    CHECK(check_monotone_in_x1(policy, space).passed());
    State x(2);
    x << 0, 1;
    policy[space.index(x)] = (Action(2) << 0, 1).finished();
    const CheckReport r = check_monotone_in_x1(policy, space);
    REQUIRE_FALSE(r.passed());
    CHECK(r.violations.front().state == (State(2) << 0, 2).finished());
}

TEST_CASE("monotone check holds for the smallest optimal policy") {
    for (int M : {1, 2, 3}) {
        const ProblemConfig c = two_period(3, 1.2, 6, 25, M);
        const StateSpace space = enumerate_states(c);
        const ArrivalModel model = build_arrival_model(c);
        const auto opt = policy_iteration(do_nothing_policy(space), space, model, c);
        CHECK(check_monotone_in_x1(improve_policy(opt.evaluation, space, model, c), space).passed());
    }
}

TEST_CASE("value-property scan") {
    ValueTable t;
    t.n = 1;
    t.V = Eigen::MatrixXd(3, 3);
    t.V << 0, 1, 4, 1, 2, 5, 4, 5, 8;
    CHECK(check_value_properties({t}).passed());
    t.V(1, 1) = 9;
    const CheckReport bad = check_value_properties({t});
    CHECK_FALSE(bad.passed());

    const ProblemConfig c = two_period(2, 0.8, 5, 20);
    CHECK(check_value_properties(finite_horizon_sequence(12, c, build_arrival_model(c))).passed());
}

TEST_CASE("two-period closed-form threshold is optimal") {
    for (int A : {1, 2, 3})
        for (double ratio : {0.5, 1.5, 3.0}) {
            const ProblemConfig c = two_period(A, 0.5, 10, 10 * ratio);
            const ArrivalModel model = build_arrival_model(c);
            const CheckReport r = check_corollary1(c, model);
            CHECK_MESSAGE(r.passed(), r.instance);
            const ThresholdPolicy s = two_period_threshold(c, model);
            const StateSpace space = enumerate_states(c);
            const oracle::Instance in{2, 1, A, c.ce, c.co, {oracle::poisson_row(model.rates[0], A),
                                                             oracle::poisson_row(model.rates[1], A)}};
            const double g = oracle::gain(in, [&](const oracle::Vec& x) {
                oracle::Vec y{x[0], 0};
                if (x[0] == 0) y[1] = std::min(std::max(x[1] - s.s[1], 0), 1);
                return y;
            });
            CHECK(g == doctest::Approx(oracle::best_gain_exhaustive(in)).epsilon(1e-9));
        }
    CHECK_THROWS_AS(two_period_threshold(two_period(1, 0.2, 1, 1, 2), build_arrival_model(two_period(1, 0.2, 1, 1, 2))),
                    InvalidInput);
}

TEST_CASE("boundary cost ratio is reported as a tie") {
    const ProblemConfig c = two_period(2, 0.4, 10, 10);
    const CheckReport r = check_proposition1(c, build_arrival_model(c));
    CHECK(r.passed());
    CHECK(r.note.find("tie") != std::string::npos);
    CHECK_THROWS_AS(check_proposition1(two_period(3, 0.4, 10, 10), build_arrival_model(c)), InvalidInput);
}

TEST_CASE("never-early check") {
    ProblemConfig c = two_period(2, 0.8, 20, 10, 2);
    c.K = 3;
    const StateSpace space = enumerate_states(c);
    const ArrivalModel model = build_arrival_model(c);
    const auto opt = policy_iteration(do_nothing_policy(space), space, model, c);
    const CheckReport r = check_never_early(opt.policy, opt.evaluation, space, model, c);
    CHECK(r.passed());
    CHECK(r.note == "states where the policy serves early: 0");

    // Cheap early service: idling is strictly worse somewhere.
    ProblemConfig cheap = c;
    cheap.ce = 1;
    cheap.co = 30;
    const auto opt2 = policy_iteration(do_nothing_policy(space), space, model, cheap);
    CHECK_FALSE(check_never_early(opt2.policy, opt2.evaluation, space, model, cheap).passed());
}

TEST_CASE("arrival and kernel rows normalize") {
    ProblemConfig c = two_period(3, 1.7, 5, 20, 2);
    c.K = 3;
    const ArrivalModel model = build_arrival_model(c);
    CHECK(check_arrival_rows(model).passed());
    const CheckReport k = check_kernel_rows(c, model, enumerate_states(c));
    CHECK(k.passed());
    ArrivalModel broken = model;
    broken.p(1, 0) += 1e-6;
    CHECK_FALSE(check_arrival_rows(broken).passed());
}
