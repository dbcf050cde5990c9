#pragma once

// Potential functions from the run-time proofs, Monte-Carlo drift estimates
// against them, and approximation-time measurement.

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "zopt/algorithms.hpp"
#include "zopt/lattice.hpp"
#include "zopt/rng.hpp"

namespace zopt {

/// sum_i (omega^d_i - 1). Throws std::range_error if the value overflows and
/// ContractViolation unless omega > 1.
double potential_exp_omega(std::span<const Fitness> distances, double omega);
double potential_exp_omega(const TargetVector& target, std::span<const Coord> x,
                           double omega);

/// omega - 1 - e (omega - 1)^2. Positive exactly where the exp-omega potential
/// has multiplicative drift under the +-1 EA.
double drift_constant_check(double omega);

/// (c / (2 omega n)) * g with c = drift_constant_check(omega) / e.
double exp_omega_drift_bound(double omega, std::size_t n, double potential);

/// Constants of the velocity-aware RLS potential.
struct RlsPotentialConstants {
  double alpha = 1.7;
  double beta = 0.9;
  double c = 0.001;
  double p = 0.01;
};

struct ConstraintReport {
  std::vector<std::string> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// Checks 1 < alpha <= 2, 1/2 < beta <= 0.9, 2 alpha beta - beta - alpha > 0,
/// alpha + beta > 2, alpha^2 beta > 1, 8 alpha beta c + 2p + 4c/beta <= 1/16,
/// p > 8c((alpha + beta)/2 - 1) and p > 4(alpha - 1)c > 0.
ConstraintReport check_rls_constants(const RlsPotentialConstants& k);

/// g_i(d, v) = 0 for d = 0, otherwise
///   d + c d max(2v/d, d/(2v)) + (v > 2 beta d ? p d : 0).
double rls_potential_term(std::uint64_t d, double v,
                          const RlsPotentialConstants& k);
double rls_potential(std::span<const Fitness> distances,
                     std::span<const double> velocity,
                     const RlsPotentialConstants& k);

struct ExpOmegaPotential {
  double omega = 1.2;
};
struct RlsCpPotential {
  RlsPotentialConstants constants;
};

class PotentialSpec {
 public:
  /// Throws ContractViolation unless omega > 1.
  static PotentialSpec exp_omega(double omega);
  /// Throws ContractViolation listing every violated constraint.
  static PotentialSpec rls_cp(const RlsPotentialConstants& constants);

  const std::variant<ExpOmegaPotential, RlsCpPotential>& kind() const noexcept {
    return kind_;
  }
  std::string describe() const;

  /// Velocity is ignored by exp-omega and required by rls-cp.
  double evaluate(std::span<const Fitness> distances,
                  std::span<const double> velocity) const;

 private:
  explicit PotentialSpec(std::variant<ExpOmegaPotential, RlsCpPotential> kind)
      : kind_(kind) {}

  std::variant<ExpOmegaPotential, RlsCpPotential> kind_;
};

/// A state to estimate drift from. `velocity` is used only by RLS and
/// defaults to all-1 when empty.
struct DriftSnapshot {
  std::vector<Coord> x;
  std::vector<double> velocity;
};

struct DriftReport {
  std::string state;
  double potential = 0.0;
  double mean = 0.0;
  double standard_error = 0.0;
  std::uint64_t samples = 0;
  /// The proof's lower bound for (+-1 EA, exp-omega); 0 otherwise, in which
  /// case only positivity is checked.
  double lower_bound = 0.0;

  /// mean >= lower_bound - z * standard_error.
  bool consistent_with_bound(double z = 4.0) const noexcept {
    return mean >= lower_bound - z * standard_error;
  }
};

inline constexpr std::uint64_t kMinDriftSamples = 1000;

/// Monte-Carlo estimate of E[g(before) - g(after)] over independent one-step
/// transitions from `snapshot`. Requires samples >= kMinDriftSamples.
DriftReport estimate_drift(const TargetVector& target,
                           const DriftSnapshot& snapshot,
                           const Optimizer& optimizer,
                           const PotentialSpec& potential,
                           std::uint64_t samples, Rng& rng);

/// First evaluation count with f(x) <= floor(approx_ratio * |a|_1).
/// Requires 0 < approx_ratio <= 1.
RunOutcome time_to_approximation(const Optimizer& optimizer,
                                 const TargetVector& target,
                                 double approx_ratio, const RunBudget& budget,
                                 Rng& rng);

/// floor(approx_ratio * |a|_1), the fitness threshold used above.
Fitness approximation_threshold(const TargetVector& target, double approx_ratio);

}  // namespace zopt
