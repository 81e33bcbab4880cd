#include "capalloc/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace capalloc {

std::string_view to_string(LoadPattern load) {
    switch (load) {
        case LoadPattern::Equal: return "EL";
        case LoadPattern::FrontLoaded: return "FL";
        case LoadPattern::BackLoaded: return "BL";
        case LoadPattern::Arbitrary: return "AL";
        case LoadPattern::Custom: return "CUSTOM";
    }
    return "?";
}

LoadPattern parse_load(std::string_view name) {
    std::string upper(name);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (upper == "EL") return LoadPattern::Equal;
    if (upper == "FL") return LoadPattern::FrontLoaded;
    if (upper == "BL") return LoadPattern::BackLoaded;
    if (upper == "AL") return LoadPattern::Arbitrary;
    if (upper == "CUSTOM") return LoadPattern::Custom;
    throw InvalidInput("unknown load pattern '" + std::string(name) + "'");
}

void ProblemConfig::validate() const {
    if (K < 2) throw InvalidInput("K must be >= 2");
    if (M < 1) throw InvalidInput("M must be >= 1");
    if (A < 1) throw InvalidInput("A must be >= 1");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidInput("lambda must be >= 0");
    if (!(ce >= 0.0) || !std::isfinite(ce)) throw InvalidInput("ce must be >= 0");
    if (!(co >= 0.0) || !std::isfinite(co)) throw InvalidInput("co must be >= 0");
    if (q) {
        if (load != LoadPattern::Custom)
            throw InvalidInput("q is only accepted together with load CUSTOM");
        if (static_cast<int>(q->size()) != K)
            throw InvalidInput("q must have length K");
        double sum = 0.0;
        for (double v : *q) {
            if (!(v > 0.0)) throw InvalidInput("q entries must be > 0");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-12) throw InvalidInput("q must sum to 1");
    } else if (load == LoadPattern::Custom) {
        throw InvalidInput("load CUSTOM requires q");
    }
    if (load == LoadPattern::Arbitrary && !seed)
        throw InvalidInput("load AL requires a seed");
}

std::string ProblemConfig::fingerprint() const {
    std::ostringstream os;
    os << "K=" << K << ",M=" << M << ",A=" << A << ",lambda=" << lambda << ",ce=" << ce
       << ",co=" << co << ",load=" << to_string(load);
    if (seed) os << ",seed=" << *seed;
    return os.str();
}

Eigen::VectorXd load_profile(const ProblemConfig& config) {
    const int K = config.K;
    Eigen::VectorXd q(K);
    double squares = 0.0;
    for (int i = 1; i <= K; ++i) squares += static_cast<double>(i) * i;
    switch (config.load) {
        case LoadPattern::Equal:
            q.setConstant(1.0 / K);
            break;
        case LoadPattern::FrontLoaded:
            for (int j = 0; j < K; ++j) q[j] = static_cast<double>(K - j) * (K - j) / squares;
            break;
        case LoadPattern::BackLoaded:
            for (int j = 0; j < K; ++j) q[j] = static_cast<double>(j + 1) * (j + 1) / squares;
            break;
        case LoadPattern::Arbitrary: {
            if (!config.seed) throw InvalidInput("load AL requires a seed");
            constexpr double eps = 1e-6;
            std::mt19937_64 rng(*config.seed);
            for (int j = 0; j < K; ++j) {
                const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
                q[j] = eps + (1.0 - eps) * u;
            }
            q /= q.sum();
            break;
        }
        case LoadPattern::Custom:
            if (!config.q) throw InvalidInput("load CUSTOM requires q");
            q = Eigen::Map<const Eigen::VectorXd>(config.q->data(), K);
            break;
    }
    return q;
}

Eigen::VectorXd truncated_poisson(double rate, int A) {
    Eigen::VectorXd w(A + 1);
    if (rate <= 0.0) {
        w.setZero();
        w[0] = 1.0;
        return w;
    }
    w[0] = 1.0;
    for (int a = 1; a <= A; ++a) w[a] = w[a - 1] * rate / a;
    return w / w.sum();
}

ArrivalModel build_arrival_model(const ProblemConfig& config) {
    config.validate();
    ArrivalModel model;
    model.q = load_profile(config);
    model.rates = model.q * config.lambda;
    model.p.resize(config.K, config.A + 1);
    for (int j = 0; j < config.K; ++j)
        model.p.row(j) = truncated_poisson(model.rates[j], config.A).transpose();
    return model;
}

StateSpace::StateSpace(int K, int A) : K_(K), A_(A), radices_(K), strides_(K) {
    if (K < 1) throw InvalidInput("state space needs K >= 1");
    if (A < 0) throw InvalidInput("state space needs A >= 0");
    // Sparse storage indices are int, so that is the effective capacity.
    constexpr Index limit = std::numeric_limits<int>::max();
    Index total = 1;
    for (int j = 0; j < K; ++j) {
        const Index radix = static_cast<Index>(K - j) * A + 1;
        if (radix > limit) throw CapacityError("state space radix overflows the index type");
        radices_[j] = static_cast<int>(radix);
        strides_[j] = total;
        if (total > limit / radix)
            throw CapacityError("state space for K=" + std::to_string(K) + ", A=" +
                                std::to_string(A) + " exceeds the index capacity");
        total *= radix;
    }
    size_ = total;
}

State StateSpace::state(Index index) const {
    State x(K_);
    for (int j = 0; j < K_; ++j) {
        x[j] = static_cast<int>(index % radices_[j]);
        index /= radices_[j];
    }
    return x;
}

Index StateSpace::index(const State& x) const {
    Index i = 0;
    for (int j = 0; j < K_; ++j) i += x[j] * strides_[j];
    return i;
}

bool StateSpace::contains(const State& x) const {
    if (x.size() != K_) return false;
    for (int j = 0; j < K_; ++j)
        if (x[j] < 0 || x[j] > bound(j)) return false;
    return true;
}

StateSpace enumerate_states(const ProblemConfig& config) {
    config.validate();
    return StateSpace(config.K, config.A);
}

namespace {

void enumerate_early(const State& x, int j, int remaining, Action& y, std::vector<Action>& out) {
    if (j == x.size()) {
        out.push_back(y);
        return;
    }
    const int top = std::min(x[j], remaining);
    for (int k = 0; k <= top; ++k) {
        y[j] = k;
        enumerate_early(x, j + 1, remaining - k, y, out);
    }
    y[j] = 0;
}

}  // namespace

std::vector<Action> feasible_actions(const State& x, const ProblemConfig& config) {
    std::vector<Action> out;
    Action y = Action::Zero(x.size());
    y[0] = x[0];
    enumerate_early(x, 1, std::max(config.M - x[0], 0), y, out);
    return out;
}

bool is_feasible(const State& x, const Action& y, int M) {
    if (x.size() != y.size() || x.size() == 0) return false;
    if (y[0] != x[0]) return false;
    int early = 0;
    for (Index j = 1; j < x.size(); ++j) {
        if (y[j] < 0 || y[j] > x[j]) return false;
        early += y[j];
    }
    return early <= std::max(M - x[0], 0);
}

double stage_cost(const State& x, const Action& y, const ProblemConfig& config) {
    if (!is_feasible(x, y, config.M)) throw ContractViolation("stage_cost: infeasible action");
    return stage_cost_unchecked(y, config);
}

State post_decision_state(const State& x, const Action& y) {
    const Index K = x.size();
    State z = State::Zero(K);
    for (Index j = 0; j + 1 < K; ++j) z[j] = x[j + 1] - y[j + 1];
    return z;
}

std::vector<std::pair<Index, double>> transition_distribution(const State& x, const Action& y,
                                                              const ArrivalModel& model,
                                                              const StateSpace& space) {
    const int K = space.horizon();
    const int A = space.max_arrivals();
    // The kernel does not see M, so only availability (y_0 = x_0, y <= x) is checked.
    if (!space.contains(x) || !is_feasible(x, y, std::numeric_limits<int>::max()))
        throw ContractViolation("transition_distribution: infeasible action");
    const State z = post_decision_state(x, y);
    const Index base = space.index(z);

    std::vector<std::pair<Index, double>> out;
    std::vector<int> a(K, 0);
    while (true) {
        double prob = 1.0;
        Index offset = 0;
        for (int j = 0; j < K && prob > 0.0; ++j) {
            prob *= model.p(j, a[j]);
            offset += a[j] * space.stride(j);
        }
        if (prob > 0.0) {
            for (int j = 0; j < K; ++j)
                if (z[j] + a[j] > space.bound(j))
                    throw ContractViolation("transition_distribution: next state leaves the space");
            out.emplace_back(base + offset, prob);
        }
        int j = 0;
        while (j < K && a[j] == A) a[j++] = 0;
        if (j == K) break;
        ++a[j];
    }
    return out;
}

Eigen::VectorXd arrival_expectation(const Eigen::VectorXd& v, const ArrivalModel& model,
                                    const StateSpace& space) {
    const int K = space.horizon();
    const int A = space.max_arrivals();
    const Index n = space.size();
    Eigen::VectorXd cur = v;
    Eigen::VectorXd next(n);
    for (int j = 0; j < K; ++j) {
        const Index stride = space.stride(j);
        const int bound = space.bound(j);
        for (Index i = 0; i < n; ++i) {
            const int digit = space.digit(i, j);
            const int top = std::min(A, bound - digit);
            double acc = 0.0;
            for (int a = 0; a <= top; ++a) acc += model.p(j, a) * cur[i + a * stride];
            next[i] = acc;
        }
        cur.swap(next);
    }
    return cur;
}

}  // namespace capalloc
