#pragma once

// Step operators for a single lattice coordinate: the +-1 operator and the
// heavy-tailed operator that moves by +-2^(I-2) with
//
//   P(I = i) = 1 / (c_eps * i * (log i)^(1+eps)),   i >= 2,
//   c_eps    = sum_{i>=2} 1 / (i * (log i)^(1+eps)).
//
// The exponent distribution is tabulated exactly for I <= table_limit. All
// remaining mass (the tail) maps to one saturated step of size
// saturation_step. A step that large can never be accepted while the current
// distance is below saturation_step / 2, so capping it does not change any
// selection decision the optimizers make.

#include <cstdint>
#include <span>
#include <vector>

#include "zopt/lattice.hpp"
#include "zopt/rng.hpp"

namespace zopt {

struct HeavyTailedParams {
  double epsilon = 0.001;
  double log_base = 2.0;
  /// Largest exponent I that is tabulated (I_max).
  int table_limit = 64;
  /// Step-size cap (S_max). Must not exceed 2^(table_limit - 2).
  Coord saturation_step = Coord{1} << 62;

  /// Throws ContractViolation on an invalid combination.
  void validate() const;
};

/// Unnormalized weight 1 / (i * (log_base i)^(1+eps)). Requires i >= 2.
double pmf_numerator(std::int64_t i, double epsilon, double log_base);

/// Closed form of the tail integral from m to infinity of
/// dx / (x * (log_base x)^(1+eps)), i.e. (ln base / eps) * (log_base m)^-eps.
double tail_integral(double m, double epsilon, double log_base);

struct CEpsilon {
  double value = 0.0;  // midpoint of [lower, upper]
  double lower = 0.0;
  double upper = 0.0;
  std::uint64_t partial_sum_limit = 0;
  double tolerance = 0.0;
  bool tolerance_met = false;

  double width() const noexcept { return upper - lower; }
};

inline constexpr std::uint64_t kDefaultPartialSumLimit = 10'000'000;
inline constexpr double kDefaultCEpsilonTolerance = 1e-8;

/// Partial sum up to `partial_sum_limit` plus an integral bracket for the
/// remaining tail. Never fails silently: a bracket wider than `tolerance`
/// comes back with tolerance_met == false.
CEpsilon compute_c_epsilon(const HeavyTailedParams& params,
                           std::uint64_t partial_sum_limit = kDefaultPartialSumLimit,
                           double tolerance = kDefaultCEpsilonTolerance);

/// Outcome of one exponent draw. `tail_saturated` means I > table_limit.
struct ExponentDraw {
  int exponent = 0;
  bool tail_saturated = false;

  friend bool operator==(const ExponentDraw&, const ExponentDraw&) = default;
};

/// Immutable after construction; share one instance across trials.
class HeavyTailedSampler {
 public:
  /// Throws std::runtime_error when c_eps cannot be bracketed to `tolerance`.
  explicit HeavyTailedSampler(
      HeavyTailedParams params,
      std::uint64_t partial_sum_limit = kDefaultPartialSumLimit,
      double tolerance = kDefaultCEpsilonTolerance);

  const HeavyTailedParams& params() const noexcept { return params_; }
  const CEpsilon& c_epsilon() const noexcept { return c_eps_; }

  /// Cumulative P(I <= i) for i = 2..table_limit (entry k is i = k + 2).
  std::span<const double> cdf_table() const noexcept { return cdf_; }
  double cdf(int exponent) const;
  double probability(int exponent) const;
  double tail_mass() const noexcept { return tail_mass_; }

  /// min(2^(exponent-2), saturation_step); the saturated step for the tail.
  Coord step_size(const ExponentDraw& draw) const noexcept;

  /// Inverse-transform draw from one uniform variate.
  ExponentDraw sample_exponent(Rng& rng) const;
  Coord sample_step_size(Rng& rng) const { return step_size(sample_exponent(rng)); }

  /// x +- step with a fair sign; saturates at the Coord range.
  Coord step(Coord x, Rng& rng) const;

 private:
  HeavyTailedParams params_;
  CEpsilon c_eps_;
  std::vector<double> cdf_;
  double tail_mass_ = 0.0;
};

inline Coord heavy_tailed_step(const HeavyTailedSampler& sampler, Coord x,
                               Rng& rng) {
  return sampler.step(x, rng);
}

/// x + 1 or x - 1 with probability 1/2 each; saturates at the Coord range.
inline Coord pm1_step(Coord x, Rng& rng) {
  return saturating_offset(x, fair_coin(rng) ? Coord{1} : Coord{-1});
}

}  // namespace zopt
