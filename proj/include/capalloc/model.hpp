#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "capalloc/errors.hpp"

namespace capalloc {

using Index = Eigen::Index;

/// Distribution of requested lead times over the planning horizon.
enum class LoadPattern { Equal, FrontLoaded, BackLoaded, Arbitrary, Custom };

std::string_view to_string(LoadPattern load);
/// Accepts EL/FL/BL/AL/CUSTOM (case-insensitive).
LoadPattern parse_load(std::string_view name);

/// One problem instance.
struct ProblemConfig {
    int K = 2;            ///< planning horizon, lead times 0..K-1
    int M = 1;            ///< servers per period
    int A = 1;            ///< max arrivals per lead time per period
    double lambda = 0.0;  ///< overall arrival rate per period
    double ce = 0.0;      ///< early-service cost per job per period of earliness
    double co = 0.0;      ///< overtime cost per job
    LoadPattern load = LoadPattern::Equal;
    std::optional<std::vector<double>> q;
    std::optional<std::uint64_t> seed;

    /// Throws InvalidInput when an invariant does not hold.
    void validate() const;
    /// Short human-readable identifier, stable across runs.
    std::string fingerprint() const;
};

/// x_j = jobs due j periods ahead.
using State = Eigen::VectorXi;
/// y_j = jobs due j periods ahead that are served now.
using Action = Eigen::VectorXi;

struct ArrivalModel {
    Eigen::VectorXd q;      ///< lead-time preference probabilities
    Eigen::VectorXd rates;  ///< lambda_j = q_j * lambda
    Eigen::MatrixXd p;      ///< p(j, a): probability of a arrivals at lead time j

    int horizon() const { return static_cast<int>(p.rows()); }
    int max_arrivals() const { return static_cast<int>(p.cols()) - 1; }
};

/// Lead-time preference vector for a load pattern.
Eigen::VectorXd load_profile(const ProblemConfig& config);

/// Truncated Poisson weights rate^a / a! for a = 0..A, normalized.
Eigen::VectorXd truncated_poisson(double rate, int A);

ArrivalModel build_arrival_model(const ProblemConfig& config);

/// Mixed-radix enumeration of queue states with 0 <= x_j <= (K-j)A.
/// Lead time 0 is the least significant digit, so the empty queue is index 0.
class StateSpace {
public:
    StateSpace(int K, int A);

    int horizon() const { return K_; }
    int max_arrivals() const { return A_; }
    Index size() const { return size_; }
    int radix(int j) const { return radices_[j]; }
    int bound(int j) const { return radices_[j] - 1; }
    Index stride(int j) const { return strides_[j]; }
    const Eigen::VectorXi& radices() const { return radices_; }

    State state(Index index) const;
    Index index(const State& x) const;
    int digit(Index index, int j) const {
        return static_cast<int>((index / strides_[j]) % radices_[j]);
    }
    bool contains(const State& x) const;

    static constexpr Index empty_index() { return 0; }

private:
    int K_;
    int A_;
    Eigen::VectorXi radices_;
    std::vector<Index> strides_;
    Index size_;
};

StateSpace enumerate_states(const ProblemConfig& config);

/// All y with y_0 = x_0, y_j <= x_j and sum_{j>=1} y_j <= (M - x_0)^+, in
/// ascending lexicographic order. The first entry is the do-nothing action.
std::vector<Action> feasible_actions(const State& x, const ProblemConfig& config);

bool is_feasible(const State& x, const Action& y, int M);

/// u(x, y) = co (y_0 - M)^+ + ce sum_j j y_j. Throws ContractViolation for
/// infeasible y.
double stage_cost(const State& x, const Action& y, const ProblemConfig& config);

/// Unchecked stage cost of a known-feasible action.
inline double stage_cost_unchecked(const Action& y, const ProblemConfig& config) {
    double early = 0.0;
    for (Index j = 1; j < y.size(); ++j) early += static_cast<double>(j * y[j]);
    const int over = y[0] > config.M ? y[0] - config.M : 0;
    return config.co * over + config.ce * early;
}

/// Queue before arrivals: z_j = x_{j+1} - y_{j+1}, z_{K-1} = 0.
State post_decision_state(const State& x, const Action& y);

/// Strictly positive entries of P[. | x, y], ordered by next-state index.
std::vector<std::pair<Index, double>> transition_distribution(const State& x, const Action& y,
                                                              const ArrivalModel& model,
                                                              const StateSpace& space);

/// E(z) = sum_a prod_j p_j(a_j) v(z + a), computed one lead time at a time.
/// Entries are exact for post-decision states (z_{K-1} = 0 and every
/// z_j <= (K-j-1)A); elsewhere the sum runs over the arrivals that stay in
/// range.
Eigen::VectorXd arrival_expectation(const Eigen::VectorXd& v, const ArrivalModel& model,
                                    const StateSpace& space);

}  // namespace capalloc
