#include "zopt/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace zopt {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_dimension(const TargetVector& target, std::size_t n) {
  if (n != target.dimension()) {
    throw ContractViolation("state dimension does not match target dimension");
  }
}

void check_rls_factors(double alpha, double beta) {
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) {
    throw ContractViolation("RLS alpha must be >= 1");
  }
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw ContractViolation("RLS beta must lie in (0, 1]");
  }
}

Coord velocity_to_step(double v) noexcept {
  constexpr double kLimit = 9.2e18;
  if (v >= kLimit) return std::numeric_limits<Coord>::max();
  return static_cast<Coord>(std::floor(v));
}

// Fitness of the parent with the listed coordinates replaced.
Fitness offspring_fitness(const TargetVector& target,
                          const std::vector<Coord>& x, Fitness parent_fitness,
                          std::span<const std::pair<std::size_t, Coord>> changes) {
  if (parent_fitness == kFitnessCeiling) {
    Fitness total = 0;
    std::size_t next = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      Coord v = x[i];
      if (next < changes.size() && changes[next].first == i) {
        v = changes[next++].second;
      }
      total = saturating_add(total, abs_diff(target[i], v));
    }
    return total;
  }
  // The parent sum is exact, so removing terms cannot underflow.
  Fitness removed = 0;
  Fitness added = 0;
  for (const auto& [i, v] : changes) {
    removed += abs_diff(target[i], x[i]);
    added = saturating_add(added, abs_diff(target[i], v));
  }
  return saturating_add(parent_fitness - removed, added);
}

}  // namespace

StepOperator StepOperator::heavy_tailed(
    std::shared_ptr<const HeavyTailedSampler> sampler) {
  if (!sampler) throw ContractViolation("heavy-tailed operator needs a sampler");
  return StepOperator{std::move(sampler)};
}

void RunBudget::validate() const {
  if (max_evaluations < 1) {
    throw ContractViolation("evaluation budget must be >= 1");
  }
  if (box_bound && *box_bound < 1) {
    throw ContractViolation("box bound must be >= 1");
  }
}

SearchPoint apply_box_clamp(SearchPoint y, Coord r) {
  if (r < 1) throw ContractViolation("box bound must be >= 1");
  for (Coord& v : y.components) v = clamp_to_box(v, r);
  y.cached_fitness.reset();
  return y;
}

EaState EaState::initial(const TargetVector& target, StepOperator step) {
  return at(target, std::vector<Coord>(target.dimension(), 0),
            std::move(step));
}

EaState EaState::at(const TargetVector& target, std::vector<Coord> x,
                    StepOperator step) {
  check_dimension(target, x.size());
  EaState s;
  s.fitness = eval_fitness(target, x);
  s.x = std::move(x);
  s.step = std::move(step);
  s.pending.reserve(8);
  return s;
}

RlsState RlsState::initial(const TargetVector& target, double alpha,
                           double beta) {
  return at(target, std::vector<Coord>(target.dimension(), 0),
            std::vector<double>(target.dimension(), 1.0), alpha, beta);
}

RlsState RlsState::at(const TargetVector& target, std::vector<Coord> x,
                      std::vector<double> velocity, double alpha,
                      double beta) {
  check_dimension(target, x.size());
  check_rls_factors(alpha, beta);
  if (velocity.size() != x.size()) {
    throw ContractViolation("velocity dimension does not match target");
  }
  if (std::any_of(velocity.begin(), velocity.end(),
                  [](double v) { return !(v >= 1.0); })) {
    throw ContractViolation("RLS velocities must be >= 1");
  }
  RlsState s;
  s.fitness = eval_fitness(target, x);
  s.x = std::move(x);
  s.velocity = std::move(velocity);
  s.alpha = alpha;
  s.beta = beta;
  return s;
}

IterationRecord ea_iterate(EaState& state, const TargetVector& target,
                           Rng& rng, std::optional<Coord> box_bound) {
  const std::size_t n = state.x.size();
  auto& changes = state.pending;
  changes.clear();

  // Positions mutated with probability 1/n each, sampled by geometric gaps.
  if (n == 1) {
    changes.emplace_back(0, state.x[0]);
  } else {
    std::geometric_distribution<std::uint64_t> gap(1.0 / static_cast<double>(n));
    for (std::uint64_t pos = gap(rng); pos < n; pos += 1 + gap(rng)) {
      changes.emplace_back(static_cast<std::size_t>(pos), state.x[pos]);
    }
  }
  for (auto& [i, v] : changes) {
    v = state.step.apply(v, rng);
    if (box_bound) v = clamp_to_box(v, *box_bound);
  }

  IterationRecord rec;
  rec.mutated_positions = changes.size();
  rec.offspring_fitness =
      offspring_fitness(target, state.x, state.fitness, changes);
  ++state.evaluations;
  rec.improved = rec.offspring_fitness < state.fitness;
  if (rec.offspring_fitness <= state.fitness) {
    rec.accepted = true;
    for (const auto& [i, v] : changes) state.x[i] = v;
    state.fitness = rec.offspring_fitness;
  }
  return rec;
}

IterationRecord rls_iterate(RlsState& state, const TargetVector& target,
                            Rng& rng, std::optional<Coord> box_bound) {
  const std::size_t n = state.x.size();
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  const std::size_t i = pick(rng);
  const Coord s = velocity_to_step(state.velocity[i]);
  Coord y = saturating_offset(state.x[i], fair_coin(rng) ? -s : s);
  if (box_bound) y = clamp_to_box(y, *box_bound);

  const std::pair<std::size_t, Coord> change{i, y};
  IterationRecord rec;
  rec.mutated_positions = 1;
  rec.offspring_fitness = offspring_fitness(
      target, state.x, state.fitness, std::span(&change, 1));
  ++state.evaluations;

  rec.improved = rec.offspring_fitness < state.fitness;
  if (rec.improved) {
    state.velocity[i] *= state.alpha;
  } else {
    state.velocity[i] = std::max(1.0, state.beta * state.velocity[i]);
  }
  if (rec.offspring_fitness <= state.fitness) {
    rec.accepted = true;
    state.x[i] = y;
    state.fitness = rec.offspring_fitness;
  }
  return rec;
}

namespace {

template <class State, class Iterate>
RunOutcome run_loop(State& state, const TargetVector& target,
                    const RunBudget& budget, Fitness threshold, Rng& rng,
                    Iterate iterate) {
  budget.validate();
  check_dimension(target, state.x.size());
  while (state.fitness > threshold) {
    if (state.evaluations >= budget.max_evaluations) {
      return RunOutcome{state.evaluations, false, state.fitness};
    }
    iterate(state, target, rng, budget.box_bound);
  }
  return RunOutcome{state.evaluations, true, state.fitness};
}

}  // namespace

RunOutcome run_until(EaState& state, const TargetVector& target,
                     const RunBudget& budget, Fitness threshold, Rng& rng) {
  return run_loop(state, target, budget, threshold, rng, ea_iterate);
}

RunOutcome run_until(RlsState& state, const TargetVector& target,
                     const RunBudget& budget, Fitness threshold, Rng& rng) {
  return run_loop(state, target, budget, threshold, rng, rls_iterate);
}

std::string algorithm_label(const AlgorithmConfig& config) {
  return std::visit(Overloaded{
                        [](const EaPm1Config&) { return std::string("ea_pm1"); },
                        [](const EaHeavyConfig&) { return std::string("ea_heavy"); },
                        [](const RlsConfig&) { return std::string("rls"); },
                    },
                    config);
}

std::pair<double, double> algorithm_params(const AlgorithmConfig& config) {
  return std::visit(
      Overloaded{
          [](const EaPm1Config&) { return std::pair{0.0, 0.0}; },
          [](const EaHeavyConfig& c) {
            return std::pair{c.params.epsilon, c.params.log_base};
          },
          [](const RlsConfig& c) { return std::pair{c.alpha, c.beta}; },
      },
      config);
}

Optimizer::Optimizer(AlgorithmConfig config) : config_(std::move(config)) {
  if (const auto* heavy = std::get_if<EaHeavyConfig>(&config_)) {
    sampler_ = std::make_shared<const HeavyTailedSampler>(heavy->params);
  } else if (const auto* rls = std::get_if<RlsConfig>(&config_)) {
    check_rls_factors(rls->alpha, rls->beta);
  }
}

EaState Optimizer::initial_ea_state(const TargetVector& target) const {
  if (std::holds_alternative<RlsConfig>(config_)) {
    throw ContractViolation("RLS configuration has no EA state");
  }
  return EaState::initial(target, sampler_ ? StepOperator::heavy_tailed(sampler_)
                                           : StepOperator::plus_minus_one());
}

RunOutcome Optimizer::run(const TargetVector& target, const RunBudget& budget,
                          Rng& rng, Fitness threshold) const {
  if (const auto* rls = std::get_if<RlsConfig>(&config_)) {
    RlsState state = RlsState::initial(target, rls->alpha, rls->beta);
    return run_until(state, target, budget, threshold, rng);
  }
  EaState state = initial_ea_state(target);
  return run_until(state, target, budget, threshold, rng);
}

}  // namespace zopt
