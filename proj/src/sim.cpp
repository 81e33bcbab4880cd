#include "capalloc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <thread>

#include "capalloc/solver.hpp"

namespace capalloc {

std::uint64_t replication_seed(std::uint64_t root, int replication) {
    std::uint64_t z = root + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(replication) + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

namespace {

struct Sampler {
    Eigen::MatrixXd cdf;

    explicit Sampler(const ArrivalModel& model) : cdf(model.p.rows(), model.p.cols()) {
        for (Index j = 0; j < model.p.rows(); ++j) {
            double acc = 0.0;
            for (Index a = 0; a < model.p.cols(); ++a) {
                acc += model.p(j, a);
                cdf(j, a) = acc;
            }
            cdf(j, model.p.cols() - 1) = std::numeric_limits<double>::infinity();
        }
    }

    int draw(Index j, double u) const {
        int a = 0;
        while (u >= cdf(j, a)) ++a;
        return a;
    }
};

double run_replication(const PolicyKernel& kernel, const StateSpace& space, const Sampler& sampler,
                       const SimOptions& options, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const int K = space.horizon();
    Index state = StateSpace::empty_index();
    double total = 0.0;
    for (std::int64_t t = 0; t < options.horizon; ++t) {
        if (t >= options.warmup) total += kernel.cost[state];
        Index next = kernel.post[static_cast<std::size_t>(state)];
        for (int j = 0; j < K; ++j) {
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            const int a = sampler.draw(j, u);
            if (space.digit(next, j) + a > space.bound(j))
                throw ContractViolation("simulated state left the truncated state space");
            next += a * space.stride(j);
        }
        state = next;
    }
    return total / static_cast<double>(options.horizon - options.warmup);
}

}  // namespace

SimResult simulate(const AnyPolicy& policy, const ProblemConfig& config, const ArrivalModel& model,
                   const SimOptions& options) {
    config.validate();
    if (options.warmup < 0 || options.horizon <= options.warmup)
        throw InvalidInput("simulate: need horizon > warmup >= 0");
    if (options.replications < 1) throw InvalidInput("simulate: need at least one replication");

    const StateSpace space = enumerate_states(config);
    TabularPolicy table;
    if (const auto* threshold = std::get_if<ThresholdPolicy>(&policy)) {
        threshold->validate(config);
        table = threshold_to_tabular(*threshold, space, config);
    } else {
        table = std::get<TabularPolicy>(policy);
        table.validate(space, config);
    }
    const PolicyKernel kernel = make_policy_kernel(table, space, config);
    const Sampler sampler(model);

    const int R = options.replications;
    std::vector<double> means(static_cast<std::size_t>(R));
    const int workers = std::clamp(options.workers, 1, R);
    auto work = [&](int first) {
        for (int r = first; r < R; r += workers)
            means[static_cast<std::size_t>(r)] =
                run_replication(kernel, space, sampler, options, replication_seed(options.seed, r));
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
        std::vector<std::thread> threads;
        for (int w = 0; w < workers; ++w)
            threads.emplace_back([&, w] {
                try {
                    work(w);
                } catch (...) {
                    errors[static_cast<std::size_t>(w)] = std::current_exception();
                }
            });
        for (auto& th : threads) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    SimResult result;
    result.horizon = options.horizon;
    result.warmup = options.warmup;
    result.replications = R;
    result.seed = options.seed;
    double sum = 0.0;
    for (double m : means) sum += m;
    result.mean_cost = sum / R;
    if (R < 2) {
        result.std_error = std::numeric_limits<double>::quiet_NaN();
    } else {
        double ss = 0.0;
        for (double m : means) ss += (m - result.mean_cost) * (m - result.mean_cost);
        result.std_error = std::sqrt(ss / (R - 1) / R);
    }
    return result;
}

}  // namespace capalloc
