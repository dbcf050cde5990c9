#pragma once

// Exact expected hitting times of the optimum for small instances.
//
// Both the +-1 (1+1) EA and fixed-step RLS (velocity frozen at 1) are Markov
// chains on the distance vector d = |a - x|: a coordinate at distance 0 moves
// to distance 1 whichever way it steps, any other coordinate moves to d - 1 or
// d + 1 with probability 1/2 each. Because selection is elitist, the sum of d
// never increases, so the set {d : sum(d) <= n * max_distance} is closed and
// contains every start with components <= max_distance. On it we solve
//
//   E[T | d] = 1 + sum_{d'} P(d -> d') E[T | d'],   E[T | 0] = 0.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace zopt {

enum class ChainAlgorithm { kEaPm1, kRlsFixedStep };

struct ChainSpec {
  std::size_t n = 1;
  std::uint64_t max_distance = 1;
  ChainAlgorithm algorithm = ChainAlgorithm::kEaPm1;
};

using DistanceState = std::vector<std::uint64_t>;

inline constexpr std::size_t kMaxChainStates = 1'000'000;
inline constexpr std::size_t kMaxChainDimension = 6;

class HittingTimeOracle {
 public:
  /// Enumerates the state space, builds the transient system and solves it.
  /// Throws ContractViolation for oversized specs and std::runtime_error if
  /// the system is singular.
  explicit HittingTimeOracle(ChainSpec spec);

  const ChainSpec& spec() const noexcept { return spec_; }
  std::size_t state_count() const noexcept { return states_.size(); }
  std::uint64_t distance_budget() const noexcept { return budget_; }

  /// Requires start.size() == n and sum(start) <= distance_budget().
  double expected_time(std::span<const std::uint64_t> start) const;

  /// Outgoing transition probabilities of `d`, self-loop included.
  std::vector<std::pair<DistanceState, double>> transition_row(
      std::span<const std::uint64_t> d) const;

 private:
  std::size_t index_of(std::span<const std::uint64_t> d) const;

  ChainSpec spec_;
  std::uint64_t budget_ = 0;
  std::vector<DistanceState> states_;
  std::vector<double> expected_;
};

/// Number of states of the closed chain for `spec`.
std::size_t chain_state_count(const ChainSpec& spec);

/// One-shot helper around HittingTimeOracle.
double exact_hitting_time(const ChainSpec& spec,
                          std::span<const std::uint64_t> start);

}  // namespace zopt
