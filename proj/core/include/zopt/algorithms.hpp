#pragma once

// The two optimizers on Z^n, both started from the all-0 string:
//
//  * (1+1) EA: every position is mutated independently with probability 1/n
//    by a step operator; the offspring replaces the parent iff f(y) <= f(x).
//  * RLS with self-adjusting velocities: one uniformly chosen position i moves
//    by +-floor(v_i); v_i grows by alpha on strict improvement and shrinks to
//    max(1, beta * v_i) otherwise; replacement iff f(y) <= f(x).
//
// Every iteration evaluates exactly one offspring. The initial point is free.

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "zopt/heavy_tailed.hpp"
#include "zopt/lattice.hpp"
#include "zopt/rng.hpp"

namespace zopt {

/// Per-coordinate mutation: +-1, or heavy-tailed with a shared sampler.
class StepOperator {
 public:
  static StepOperator plus_minus_one() { return StepOperator{nullptr}; }
  static StepOperator heavy_tailed(
      std::shared_ptr<const HeavyTailedSampler> sampler);

  Coord apply(Coord x, Rng& rng) const {
    return sampler_ ? sampler_->step(x, rng) : pm1_step(x, rng);
  }
  bool is_heavy_tailed() const noexcept { return sampler_ != nullptr; }
  const HeavyTailedSampler* sampler() const noexcept { return sampler_.get(); }

 private:
  explicit StepOperator(std::shared_ptr<const HeavyTailedSampler> sampler)
      : sampler_(std::move(sampler)) {}

  std::shared_ptr<const HeavyTailedSampler> sampler_;
};

struct RunBudget {
  std::uint64_t max_evaluations = 1'000'000'000;
  /// When set, offspring coordinates are clamped into [0, box_bound].
  std::optional<Coord> box_bound;

  void validate() const;
};

/// Clamps every component into [0, r]. Requires r >= 1.
SearchPoint apply_box_clamp(SearchPoint y, Coord r);

inline Coord clamp_to_box(Coord v, Coord r) noexcept {
  return v < 0 ? 0 : (v > r ? r : v);
}

struct EaState {
  std::vector<Coord> x;
  Fitness fitness = 0;
  std::uint64_t evaluations = 0;
  StepOperator step = StepOperator::plus_minus_one();

  /// x = 0^n with its fitness evaluated (not counted).
  static EaState initial(const TargetVector& target, StepOperator step);
  /// Arbitrary start, e.g. for oracle comparisons.
  static EaState at(const TargetVector& target, std::vector<Coord> x,
                    StepOperator step);

  // Scratch space reused across iterations: (position, offspring value).
  std::vector<std::pair<std::size_t, Coord>> pending;
};

struct RlsState {
  std::vector<Coord> x;
  Fitness fitness = 0;
  std::vector<double> velocity;
  double alpha = 1.7;
  double beta = 0.9;
  std::uint64_t evaluations = 0;

  /// x = 0^n, v = 1^n. Requires alpha >= 1 and 0 < beta <= 1.
  static RlsState initial(const TargetVector& target, double alpha,
                          double beta);
  static RlsState at(const TargetVector& target, std::vector<Coord> x,
                     std::vector<double> velocity, double alpha, double beta);
};

/// What happened in one iteration.
struct IterationRecord {
  std::size_t mutated_positions = 0;
  bool accepted = false;
  bool improved = false;
  Fitness offspring_fitness = 0;
};

IterationRecord ea_iterate(EaState& state, const TargetVector& target,
                           Rng& rng, std::optional<Coord> box_bound = {});

IterationRecord rls_iterate(RlsState& state, const TargetVector& target,
                            Rng& rng, std::optional<Coord> box_bound = {});

struct RunOutcome {
  std::uint64_t evaluations = 0;
  bool success = false;
  Fitness final_fitness = 0;
};

/// Iterates until fitness <= threshold or the budget is spent.
RunOutcome run_until(EaState& state, const TargetVector& target,
                     const RunBudget& budget, Fitness threshold, Rng& rng);
RunOutcome run_until(RlsState& state, const TargetVector& target,
                     const RunBudget& budget, Fitness threshold, Rng& rng);

inline RunOutcome run_to_optimum(EaState& state, const TargetVector& target,
                                 const RunBudget& budget, Rng& rng) {
  return run_until(state, target, budget, 0, rng);
}
inline RunOutcome run_to_optimum(RlsState& state, const TargetVector& target,
                                 const RunBudget& budget, Rng& rng) {
  return run_until(state, target, budget, 0, rng);
}

struct EaPm1Config {};
struct EaHeavyConfig {
  HeavyTailedParams params;
};
struct RlsConfig {
  double alpha = 1.7;
  double beta = 0.9;
};

using AlgorithmConfig = std::variant<EaPm1Config, EaHeavyConfig, RlsConfig>;

/// "ea_pm1", "ea_heavy" or "rls".
std::string algorithm_label(const AlgorithmConfig& config);
/// (epsilon, log_base) for ea_heavy, (alpha, beta) for rls, (0, 0) for ea_pm1.
std::pair<double, double> algorithm_params(const AlgorithmConfig& config);

/// Owns everything a configuration needs that is expensive to build (the
/// heavy-tailed sampler) and is safe to share between concurrent trials.
class Optimizer {
 public:
  explicit Optimizer(AlgorithmConfig config);

  const AlgorithmConfig& config() const noexcept { return config_; }
  std::string label() const { return algorithm_label(config_); }
  const HeavyTailedSampler* sampler() const noexcept { return sampler_.get(); }

  /// From the all-0 string until fitness <= threshold or budget exhaustion.
  RunOutcome run(const TargetVector& target, const RunBudget& budget,
                 Rng& rng, Fitness threshold = 0) const;

  EaState initial_ea_state(const TargetVector& target) const;

 private:
  AlgorithmConfig config_;
  std::shared_ptr<const HeavyTailedSampler> sampler_;
};

}  // namespace zopt
