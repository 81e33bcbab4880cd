#pragma once

#include <cstdint>

#include "capalloc/model.hpp"
#include "capalloc/policies.hpp"

namespace capalloc {

struct SimOptions {
    std::int64_t horizon = 200'000;  ///< periods per replication, warmup included
    std::int64_t warmup = 10'000;
    int replications = 20;
    std::uint64_t seed = 1;
    int workers = 1;
};

struct SimResult {
    double mean_cost = 0.0;
    /// Standard error across replications; NaN with a single replication.
    double std_error = 0.0;
    std::int64_t horizon = 0;
    std::int64_t warmup = 0;
    int replications = 0;
    std::uint64_t seed = 0;
};

/// splitmix64 finalizer applied to the root seed advanced by the replication index.
std::uint64_t replication_seed(std::uint64_t root, int replication);

/// Monte Carlo estimate of the long-run average cost. Every replication starts empty
/// and draws arrivals by inverse transform on p(j, .). Replications may run on
/// `options.workers` threads; the result does not depend on the thread count.
SimResult simulate(const AnyPolicy& policy, const ProblemConfig& config, const ArrivalModel& model,
                   const SimOptions& options);

}  // namespace capalloc
