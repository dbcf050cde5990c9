#include <cmath>
#include <sstream>

#include "zopt/analysis.hpp"

namespace zopt {
namespace {

// Welford accumulator for mean and sample variance.
class RunningMoments {
 public:
  void add(double x) noexcept {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }
  double mean() const noexcept { return mean_; }
  double standard_error() const noexcept {
    if (count_ < 2) return 0.0;
    const double var = m2_ / static_cast<double>(count_ - 1);
    return std::sqrt(var / static_cast<double>(count_));
  }

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

std::string describe_state(const TargetVector& target,
                           const DriftSnapshot& snapshot) {
  std::ostringstream out;
  out << "a=" << target.to_string() << " x=(";
  for (std::size_t i = 0; i < snapshot.x.size(); ++i) {
    out << (i ? "," : "") << snapshot.x[i];
  }
  out << ')';
  if (!snapshot.velocity.empty()) {
    out << " v=(";
    for (std::size_t i = 0; i < snapshot.velocity.size(); ++i) {
      out << (i ? "," : "") << snapshot.velocity[i];
    }
    out << ')';
  }
  return out.str();
}

}  // namespace

DriftReport estimate_drift(const TargetVector& target,
                           const DriftSnapshot& snapshot,
                           const Optimizer& optimizer,
                           const PotentialSpec& potential,
                           std::uint64_t samples, Rng& rng) {
  if (samples < kMinDriftSamples) {
    throw ContractViolation("drift estimation needs at least " +
                            std::to_string(kMinDriftSamples) + " samples");
  }
  const std::size_t n = target.dimension();
  std::vector<double> velocity = snapshot.velocity;
  if (velocity.empty()) velocity.assign(n, 1.0);

  DriftReport report;
  report.state = describe_state(target, snapshot);
  report.samples = samples;
  report.potential =
      potential.evaluate(distance_vector(target, snapshot.x), velocity);

  const auto* exp_omega = std::get_if<ExpOmegaPotential>(&potential.kind());
  const bool pm1_ea = std::holds_alternative<EaPm1Config>(optimizer.config());
  if (exp_omega && pm1_ea) {
    report.lower_bound =
        exp_omega_drift_bound(exp_omega->omega, n, report.potential);
  }

  RunningMoments moments;
  if (const auto* rls = std::get_if<RlsConfig>(&optimizer.config())) {
    const RlsState start =
        RlsState::at(target, snapshot.x, velocity, rls->alpha, rls->beta);
    for (std::uint64_t s = 0; s < samples; ++s) {
      RlsState next = start;
      rls_iterate(next, target, rng);
      const double after =
          potential.evaluate(distance_vector(target, next.x), next.velocity);
      moments.add(report.potential - after);
    }
  } else {
    EaState start = optimizer.initial_ea_state(target);
    start = EaState::at(target, snapshot.x, start.step);
    for (std::uint64_t s = 0; s < samples; ++s) {
      EaState next = start;
      ea_iterate(next, target, rng);
      const double after =
          potential.evaluate(distance_vector(target, next.x), velocity);
      moments.add(report.potential - after);
    }
  }
  report.mean = moments.mean();
  report.standard_error = moments.standard_error();
  return report;
}

Fitness approximation_threshold(const TargetVector& target,
                                double approx_ratio) {
  if (!(approx_ratio > 0.0 && approx_ratio <= 1.0)) {
    throw ContractViolation("approximation ratio must lie in (0, 1]");
  }
  if (approx_ratio == 1.0) return target.l1();
  const long double t = static_cast<long double>(approx_ratio) *
                        static_cast<long double>(target.l1());
  return static_cast<Fitness>(std::floor(t));
}

RunOutcome time_to_approximation(const Optimizer& optimizer,
                                 const TargetVector& target,
                                 double approx_ratio, const RunBudget& budget,
                                 Rng& rng) {
  return optimizer.run(target, budget, rng,
                       approximation_threshold(target, approx_ratio));
}

}  // namespace zopt
