#include <doctest.h>

#include <algorithm>
#include <set>

#include "capalloc/model.hpp"
#include "oracle.hpp"

using namespace capalloc;

namespace {

ProblemConfig make(int K, int M, int A, double lambda, LoadPattern load = LoadPattern::Equal) {
    ProblemConfig c;
    c.K = K;
    c.M = M;
    c.A = A;
    c.lambda = lambda;
    c.ce = 5;
    c.co = 20;
    c.load = load;
    return c;
}

oracle::Vec to_vec(const Eigen::VectorXi& v) { return oracle::Vec(v.data(), v.data() + v.size()); }

}  // namespace

TEST_CASE("load profiles") {
    ProblemConfig c = make(4, 1, 1, 0.2);
    CHECK(load_profile(c).isApprox(Eigen::Vector4d::Constant(0.25)));
    c.load = LoadPattern::FrontLoaded;
    CHECK(load_profile(c).isApprox(Eigen::Vector4d(16, 9, 4, 1) / 30.0));
    c.load = LoadPattern::BackLoaded;
    CHECK(load_profile(c).isApprox(Eigen::Vector4d(1, 4, 9, 16) / 30.0));

    c.load = LoadPattern::Arbitrary;
    c.seed = 7;
    const Eigen::VectorXd q1 = load_profile(c);
    CHECK(q1.sum() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(q1.minCoeff() > 0.0);
    CHECK(q1 == load_profile(c));
    c.seed = 8;
    CHECK(q1 != load_profile(c));
}

TEST_CASE("truncated poisson matches the normalized pmf") {
    for (double rate : {0.05, 0.2, 1.0, 3.7}) {
        for (int A : {1, 2, 5, 10}) {
            const Eigen::VectorXd p = truncated_poisson(rate, A);
            const std::vector<double> ref = oracle::poisson_row(rate, A);
            REQUIRE(p.size() == A + 1);
            for (int a = 0; a <= A; ++a) CHECK(p[a] == doctest::Approx(ref[a]).epsilon(1e-13));
            CHECK(std::abs(p.sum() - 1.0) <= 1e-12);
        }
    }
    const Eigen::VectorXd zero = truncated_poisson(0.0, 3);
    CHECK(zero == Eigen::Vector4d(1, 0, 0, 0));
}

TEST_CASE("arrival model rows") {
    const ProblemConfig c = make(3, 1, 2, 0.4, LoadPattern::BackLoaded);
    const ArrivalModel m = build_arrival_model(c);
    CHECK(m.horizon() == 3);
    CHECK(m.max_arrivals() == 2);
    CHECK(m.rates.isApprox(load_profile(c) * 0.4));
    for (int j = 0; j < 3; ++j) CHECK(std::abs(m.p.row(j).sum() - 1.0) <= 1e-12);
}

TEST_CASE("config validation") {
    CHECK_NOTHROW(make(2, 1, 1, 0.0).validate());
    CHECK_THROWS_AS(make(1, 1, 1, 0.2).validate(), InvalidInput);
    CHECK_THROWS_AS(make(2, 0, 1, 0.2).validate(), InvalidInput);
    CHECK_THROWS_AS(make(2, 1, 0, 0.2).validate(), InvalidInput);
    CHECK_THROWS_AS(make(2, 1, 1, -0.1).validate(), InvalidInput);

    ProblemConfig c = make(3, 1, 1, 0.2, LoadPattern::Custom);
    CHECK_THROWS_AS(c.validate(), InvalidInput);
    c.q = std::vector<double>{0.2, 0.3, 0.5};
    CHECK_NOTHROW(c.validate());
    c.q = std::vector<double>{0.2, 0.3, 0.6};
    CHECK_THROWS_AS(c.validate(), InvalidInput);
    c.q = std::vector<double>{0.5, 0.5};
    CHECK_THROWS_AS(c.validate(), InvalidInput);
    c.q = std::vector<double>{0.0, 0.5, 0.5};
    CHECK_THROWS_AS(c.validate(), InvalidInput);

    ProblemConfig al = make(3, 1, 1, 0.2, LoadPattern::Arbitrary);
    CHECK_THROWS_AS(al.validate(), InvalidInput);
    al.seed = 1;
    CHECK_NOTHROW(al.validate());

    CHECK(parse_load("bl") == LoadPattern::BackLoaded);
    CHECK_THROWS_AS(parse_load("xl"), InvalidInput);
}

TEST_CASE("state space enumeration") {
    for (int K : {2, 3, 4})
        for (int A : {1, 2, 3}) {
            const StateSpace space(K, A);
            Index expected = 1;
            for (int j = 1; j <= K; ++j) expected *= j * A + 1;
            CHECK(space.size() == expected);
            for (Index i = 0; i < space.size(); ++i) {
                const State x = space.state(i);
                REQUIRE(space.contains(x));
                REQUIRE(space.index(x) == i);
            }
        }
    const StateSpace space(3, 2);
    CHECK(space.state(StateSpace::empty_index()).isZero());
    CHECK(space.bound(0) == 6);
    CHECK(space.bound(2) == 2);
    State x(3);
    x << 1, 0, 0;
    CHECK(space.index(x) == 1);
    x << 0, 0, 1;
    CHECK(space.index(x) == 7 * 5);
    x << 0, 0, 3;
    CHECK_FALSE(space.contains(x));
    CHECK_THROWS_AS(StateSpace(40, 10), CapacityError);
}

TEST_CASE("feasible actions agree with brute force") {
    for (int K : {2, 3})
        for (int M : {1, 2, 3})
            for (int A : {1, 2}) {
                const ProblemConfig c = make(K, M, A, 0.2);
                const oracle::Instance in = oracle::make_instance(K, M, A, 0.2, 5, 20, oracle::equal_q(K));
                const StateSpace space = enumerate_states(c);
                for (Index i = 0; i < space.size(); ++i) {
                    const State x = space.state(i);
                    const std::vector<Action> ys = feasible_actions(x, c);
                    const std::vector<oracle::Vec> ref = oracle::actions(in, to_vec(x));
                    REQUIRE(ys.size() == ref.size());
                    std::set<oracle::Vec> got;
                    for (const Action& y : ys) {
                        got.insert(to_vec(y));
                        CHECK(is_feasible(x, y, M));
                    }
                    CHECK(got == std::set<oracle::Vec>(ref.begin(), ref.end()));
                    CHECK(ys.front() == (Action(K) << x[0], Eigen::VectorXi::Zero(K - 1)).finished());
                    CHECK(std::is_sorted(ys.begin(), ys.end(), [](const Action& a, const Action& b) {
                        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
                    }));
                }
            }
}

TEST_CASE("stage cost and post-decision state") {
    const ProblemConfig c = make(3, 1, 2, 0.4);
    State x(3);
    x << 3, 2, 1;
    Action y(3);
    y << 3, 0, 0;
    CHECK(stage_cost(x, y, c) == doctest::Approx(40.0));
    x << 0, 2, 1;
    y << 0, 0, 1;
    CHECK(stage_cost(x, y, c) == doctest::Approx(10.0));
    CHECK(post_decision_state(x, y) == Eigen::Vector3i(2, 0, 0));
    y << 0, 1, 1;
    CHECK_THROWS_AS(stage_cost(x, y, c), ContractViolation);
    y << 1, 0, 0;
    CHECK_THROWS_AS(stage_cost(x, y, c), ContractViolation);
}

TEST_CASE("transition rows agree with brute force") {
    for (int K : {2, 3}) {
        const ProblemConfig c = make(K, 2, 2, 0.9, LoadPattern::FrontLoaded);
        const ArrivalModel model = build_arrival_model(c);
        const StateSpace space = enumerate_states(c);
        oracle::Instance in{K, 2, 2, 5, 20, {}};
        for (int j = 0; j < K; ++j) in.p.push_back(oracle::poisson_row(model.rates[j], 2));
        for (Index i = 0; i < space.size(); i += 3) {
            const State x = space.state(i);
            for (const Action& y : feasible_actions(x, c)) {
                const auto row = transition_distribution(x, y, model, space);
                const auto ref = oracle::transition(in, to_vec(x), to_vec(y));
                REQUIRE(row.size() == ref.size());
                double sum = 0.0;
                for (const auto& [next, pr] : row) {
                    CHECK(pr > 0.0);
                    CHECK(pr == doctest::Approx(ref.at(to_vec(space.state(next)))).epsilon(1e-12));
                    sum += pr;
                }
                CHECK(std::abs(sum - 1.0) <= 1e-12);
                CHECK(std::is_sorted(row.begin(), row.end()));
            }
        }
    }
}

TEST_CASE("empty state, idle action, A = 1 has 2^K outcomes") {
    const ProblemConfig c = make(3, 1, 1, 0.6, LoadPattern::BackLoaded);
    const ArrivalModel model = build_arrival_model(c);
    const StateSpace space = enumerate_states(c);
    const State x = State::Zero(3);
    const auto row = transition_distribution(x, Action::Zero(3), model, space);
    REQUIRE(row.size() == 8);
    for (const auto& [next, pr] : row) {
        const State s = space.state(next);
        double expected = 1.0;
        for (int j = 0; j < 3; ++j) expected *= model.p(j, s[j]);
        CHECK(pr == doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("arrival expectation equals the explicit sum") {
    const ProblemConfig c = make(3, 1, 2, 1.1, LoadPattern::Custom);
    ProblemConfig cc = c;
    cc.q = std::vector<double>{0.5, 0.3, 0.2};
    const ArrivalModel model = build_arrival_model(cc);
    const StateSpace space = enumerate_states(cc);
    Eigen::VectorXd v(space.size());
    for (Index i = 0; i < v.size(); ++i) v[i] = std::sin(0.37 * i) + 0.01 * i;
    const Eigen::VectorXd e = arrival_expectation(v, model, space);
    for (Index i = 0; i < space.size(); ++i) {
        const State x = space.state(i);
        for (const Action& y : feasible_actions(x, cc)) {
            double direct = 0.0;
            for (const auto& [next, pr] : transition_distribution(x, y, model, space)) direct += pr * v[next];
            const State z = post_decision_state(x, y);
            CHECK(e[space.index(z)] == doctest::Approx(direct).epsilon(1e-12));
        }
    }
}
