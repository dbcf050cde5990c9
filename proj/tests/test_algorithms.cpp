#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "zopt/algorithms.hpp"

namespace zopt {
namespace {

// Mean and standard error of `runs` hitting times from `make_state`.
template <class MakeState>
std::pair<double, double> mean_hitting_time(MakeState make_state,
                                            const TargetVector& a, int runs,
                                            std::uint64_t seed) {
  double sum = 0.0, sum_sq = 0.0;
  RunBudget budget;
  for (int k = 0; k < runs; ++k) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(k)}));
    auto state = make_state();
    const RunOutcome o = run_to_optimum(state, a, budget, rng);
    EXPECT_TRUE(o.success);
    const double t = static_cast<double>(o.evaluations);
    sum += t;
    sum_sq += t * t;
  }
  const double mean = sum / runs;
  const double var = (sum_sq - runs * mean * mean) / (runs - 1);
  return {mean, std::sqrt(var / runs)};
}

TEST(EaIterate, SinglePositionAlwaysMutates) {
  const TargetVector a({1000});
  EaState s = EaState::initial(a, StepOperator::plus_minus_one());
  Rng rng(1);
  for (int k = 0; k < 1000; ++k) {
    EXPECT_EQ(ea_iterate(s, a, rng).mutated_positions, 1u);
  }
  EXPECT_EQ(s.evaluations, 1000u);
}

TEST(EaIterate, TwoStateChainMeanIsTwo) {
  const TargetVector a({1});
  const auto [mean, se] = mean_hitting_time(
      [&] { return EaState::initial(a, StepOperator::plus_minus_one()); }, a,
      10'000, 11);
  EXPECT_NEAR(mean, 2.0, 0.1);
  (void)se;
}

TEST(EaIterate, DistanceFiveMeanIsTen) {
  const TargetVector a({5});
  const auto [mean, se] = mean_hitting_time(
      [&] { return EaState::initial(a, StepOperator::plus_minus_one()); }, a,
      10'000, 12);
  EXPECT_NEAR(mean, 10.0, 0.5);
  (void)se;
}

TEST(EaIterate, FitnessNeverIncreases) {
  const auto sampler = std::make_shared<const HeavyTailedSampler>(HeavyTailedParams{});
  const TargetVector a({7, -3, 12, 0, 4});
  for (auto step : {StepOperator::plus_minus_one(), StepOperator::heavy_tailed(sampler)}) {
    EaState s = EaState::initial(a, step);
    Rng rng(4);
    for (int k = 0; k < 20'000; ++k) {
      const Fitness before = s.fitness;
      const IterationRecord rec = ea_iterate(s, a, rng);
      EXPECT_LE(s.fitness, before);
      EXPECT_EQ(s.fitness, eval_fitness(a, s.x));
      EXPECT_EQ(rec.accepted, rec.offspring_fitness <= before);
    }
  }
}

TEST(EaIterate, MutationCountIsBinomial) {
  const TargetVector a = TargetVector::all_equal(10, 1'000'000);
  EaState s = EaState::initial(a, StepOperator::plus_minus_one());
  Rng rng(99);
  constexpr int kIterations = 100'000;
  double sum = 0.0;
  for (int k = 0; k < kIterations; ++k) {
    sum += static_cast<double>(ea_iterate(s, a, rng).mutated_positions);
  }
  // Binomial(10, 1/10): mean 1, variance 0.9.
  const double se = std::sqrt(0.9 / kIterations);
  EXPECT_LE(std::abs(sum / kIterations - 1.0), 4.0 * se);
}

TEST(EaIterate, ZeroMutationCostsAnEvaluation) {
  const TargetVector a = TargetVector::all_equal(50, 3);
  EaState s = EaState::initial(a, StepOperator::plus_minus_one());
  Rng rng(6);
  bool seen = false;
  for (int k = 0; k < 1000 && !seen; ++k) {
    const auto before = s.evaluations;
    const IterationRecord rec = ea_iterate(s, a, rng);
    EXPECT_EQ(s.evaluations, before + 1);
    if (rec.mutated_positions == 0) {
      seen = true;
      EXPECT_TRUE(rec.accepted);
      EXPECT_FALSE(rec.improved);
    }
  }
  EXPECT_TRUE(seen);
}

TEST(RlsIterate, FloorOfVelocityIsTheStep) {
  const TargetVector a({100});
  RlsState s = RlsState::at(a, {50}, {1.7}, 1.7, 0.9);
  Rng rng(2);
  for (int k = 0; k < 100; ++k) {
    RlsState t = s;
    const IterationRecord rec = rls_iterate(t, a, rng);
    // Offspring 51 or 49, at distance 49 or 51.
    EXPECT_TRUE(rec.offspring_fitness == 49 || rec.offspring_fitness == 51);
  }
}

TEST(RlsIterate, VelocityUpdates) {
  const TargetVector a({100});
  Rng rng(3);
  for (int k = 0; k < 200; ++k) {
    RlsState s = RlsState::at(a, {50}, {1.0}, 1.7, 0.9);
    const IterationRecord rec = rls_iterate(s, a, rng);
    if (rec.improved) {
      EXPECT_DOUBLE_EQ(s.velocity[0], 1.7);
      EXPECT_EQ(s.x[0], 51);
    } else {
      EXPECT_DOUBLE_EQ(s.velocity[0], 1.0);  // max(1, 0.9)
      EXPECT_EQ(s.x[0], 50);
    }
  }
}

TEST(RlsIterate, TieShrinksVelocityAndIsInstalled) {
  // d = 2, step 4: 2 -> 2 (tie) or 2 -> 6.
  const TargetVector a({2});
  Rng rng(5);
  for (int k = 0; k < 100; ++k) {
    RlsState s = RlsState::at(a, {0}, {4.5}, 1.7, 0.9);
    const IterationRecord rec = rls_iterate(s, a, rng);
    EXPECT_FALSE(rec.improved);
    EXPECT_DOUBLE_EQ(s.velocity[0], 0.9 * 4.5);
    if (rec.accepted) {
      EXPECT_EQ(s.x[0], 4);
    } else {
      EXPECT_EQ(s.x[0], 0);
    }
  }
}

TEST(RlsIterate, LocalityAndVelocityFloor) {
  const TargetVector a({40, -7, 1000, 3});
  RlsState s = RlsState::initial(a, 1.7, 0.9);
  Rng rng(8);
  for (int k = 0; k < 20'000; ++k) {
    const auto parent = s.x;
    const Fitness before = s.fitness;
    rls_iterate(s, a, rng);
    int changed = 0;
    for (std::size_t i = 0; i < parent.size(); ++i) changed += parent[i] != s.x[i];
    EXPECT_LE(changed, 1);
    EXPECT_LE(s.fitness, before);
    for (double v : s.velocity) EXPECT_GE(v, 1.0);
  }
}

TEST(RlsIterate, TwoStateChainMeanIsTwo) {
  const TargetVector a({1});
  const auto [mean, se] = mean_hitting_time(
      [&] { return RlsState::initial(a, 1.7, 0.9); }, a, 10'000, 13);
  EXPECT_NEAR(mean, 2.0, 0.1);
  (void)se;
}

TEST(RlsState, RejectsBadParameters) {
  const TargetVector a({1, 2});
  EXPECT_THROW(RlsState::initial(a, 0.5, 0.9), ContractViolation);
  EXPECT_THROW(RlsState::initial(a, 1.7, 0.0), ContractViolation);
  EXPECT_THROW(RlsState::initial(a, 1.7, 1.5), ContractViolation);
  EXPECT_THROW(RlsState::at(a, {0, 0}, {1.0, 0.5}, 1.7, 0.9), ContractViolation);
  EXPECT_NO_THROW(RlsState::initial(a, 2.0, 0.5));
}

TEST(RunToOptimum, StartAtOptimumCostsNothing) {
  const TargetVector a({3, 4});
  EaState ea = EaState::at(a, {3, 4}, StepOperator::plus_minus_one());
  RlsState rls = RlsState::at(a, {3, 4}, {1.0, 1.0}, 1.7, 0.9);
  Rng rng(0);
  RunBudget budget;
  const RunOutcome o1 = run_to_optimum(ea, a, budget, rng);
  const RunOutcome o2 = run_to_optimum(rls, a, budget, rng);
  EXPECT_TRUE(o1.success);
  EXPECT_EQ(o1.evaluations, 0u);
  EXPECT_TRUE(o2.success);
  EXPECT_EQ(o2.evaluations, 0u);
}

TEST(RunToOptimum, NeedsAtLeastDistanceSteps) {
  const TargetVector a({1, 1});
  EaState s = EaState::initial(a, StepOperator::plus_minus_one());
  Rng rng(21);
  RunBudget budget;
  budget.max_evaluations = 1'000'000;
  const RunOutcome o = run_to_optimum(s, a, budget, rng);
  EXPECT_TRUE(o.success);
  EXPECT_GE(o.evaluations, 2u);
}

TEST(RunToOptimum, ZeroBudgetIsRejected) {
  const TargetVector a({1});
  EaState s = EaState::initial(a, StepOperator::plus_minus_one());
  Rng rng(1);
  RunBudget budget;
  budget.max_evaluations = 0;
  EXPECT_THROW(run_to_optimum(s, a, budget, rng), ContractViolation);
}

TEST(RunToOptimum, ExhaustedBudgetReportsFailure) {
  const TargetVector a({1'000'000});
  EaState s = EaState::initial(a, StepOperator::plus_minus_one());
  Rng rng(1);
  RunBudget budget;
  budget.max_evaluations = 500;
  const RunOutcome o = run_to_optimum(s, a, budget, rng);
  EXPECT_FALSE(o.success);
  EXPECT_EQ(o.evaluations, 500u);
}

TEST(Optimizer, DeterministicPerSeed) {
  const TargetVector a = TargetVector::all_equal(5, 300);
  HeavyTailedParams heavy;
  heavy.epsilon = 0.1;
  for (const AlgorithmConfig& config :
       {AlgorithmConfig{EaPm1Config{}}, AlgorithmConfig{EaHeavyConfig{heavy}},
        AlgorithmConfig{RlsConfig{}}}) {
    const Optimizer opt(config);
    Rng r1(42), r2(42);
    const RunOutcome x = opt.run(a, RunBudget{}, r1);
    const RunOutcome y = opt.run(a, RunBudget{}, r2);
    EXPECT_TRUE(x.success);
    EXPECT_EQ(x.evaluations, y.evaluations) << opt.label();
  }
}

TEST(Optimizer, LabelsAndParams) {
  HeavyTailedParams heavy;
  EXPECT_EQ(algorithm_label(EaPm1Config{}), "ea_pm1");
  EXPECT_EQ(algorithm_label(EaHeavyConfig{heavy}), "ea_heavy");
  EXPECT_EQ(algorithm_label(RlsConfig{}), "rls");
  EXPECT_EQ(algorithm_params(EaPm1Config{}), (std::pair{0.0, 0.0}));
  EXPECT_EQ(algorithm_params(EaHeavyConfig{heavy}), (std::pair{0.001, 2.0}));
  EXPECT_EQ(algorithm_params(RlsConfig{2.0, 0.5}), (std::pair{2.0, 0.5}));
}

TEST(BoxClamp, Examples) {
  const SearchPoint y{{-3, 5}, std::nullopt};
  const SearchPoint c = apply_box_clamp(y, 4);
  EXPECT_EQ(c.components, (std::vector<Coord>{0, 4}));
  const SearchPoint inside{{0, 2, 4}, std::nullopt};
  EXPECT_EQ(apply_box_clamp(inside, 4).components, inside.components);
  EXPECT_EQ(apply_box_clamp(apply_box_clamp(y, 4), 4).components, c.components);
  EXPECT_THROW(apply_box_clamp(y, 0), ContractViolation);
}

TEST(BoxClamp, RunsStayInsideTheBox) {
  const TargetVector a = TargetVector::all_equal(4, 20);
  const auto sampler = std::make_shared<const HeavyTailedSampler>(HeavyTailedParams{});
  EaState s = EaState::initial(a, StepOperator::heavy_tailed(sampler));
  Rng rng(17);
  for (int k = 0; k < 5000; ++k) {
    ea_iterate(s, a, rng, Coord{20});
    for (Coord v : s.x) {
      EXPECT_GE(v, 0);
      EXPECT_LE(v, 20);
    }
  }
}

// Capping steps at S_max > 2 n r never changes a selection decision. The
// reference evaluates the uncapped step in 128-bit arithmetic.
TEST(SaturationSafety, CappedDecisionMatchesExactReference) {
  HeavyTailedParams params;
  params.epsilon = 0.1;
  params.table_limit = 12;
  params.saturation_step = 1024;
  const HeavyTailedSampler sampler(params);

  Rng rng(123);
  std::uniform_int_distribution<std::size_t> dim(1, 4);
  std::uniform_int_distribution<Coord> coord(1, 100);
  std::uniform_int_distribution<int> exponent(2, 90);
  for (int trial = 0; trial < 20'000; ++trial) {
    const std::size_t n = dim(rng);
    std::vector<Coord> a(n), x(n);
    for (auto& c : a) c = coord(rng);
    for (auto& c : x) c = coord(rng) - 1;
    const TargetVector target(a);
    const Fitness parent = eval_fitness(target, x);

    std::vector<Coord> capped = x;
    __int128 exact_fitness = 0;
    for (std::size_t i = 0; i < n; ++i) {
      __int128 exact = x[i];
      if (fair_coin(rng)) {
        const int e = exponent(rng);
        const bool sign = fair_coin(rng);
        const __int128 step = static_cast<__int128>(1) << (e - 2);
        exact += sign ? step : -step;
        const Coord cap = sampler.step_size({e, e > params.table_limit});
        capped[i] = x[i] + (sign ? cap : -cap);
      }
      const __int128 diff = exact - a[i];
      exact_fitness += diff < 0 ? -diff : diff;
    }
    const bool exact_accept = exact_fitness <= static_cast<__int128>(parent);
    const bool capped_accept = eval_fitness(target, capped) <= parent;
    ASSERT_EQ(exact_accept, capped_accept) << "trial " << trial;
  }
}

}  // namespace
}  // namespace zopt
