#include "zopt/heavy_tailed.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace zopt {
namespace {

double log_in_base(double x, double base) {
  return base == 2.0 ? std::log2(x) : std::log(x) / std::log(base);
}

// Neumaier's compensated summation.
class CompensatedSum {
 public:
  void add(double term) noexcept {
    const double t = sum_ + term;
    if (std::abs(sum_) >= std::abs(term)) {
      comp_ += (sum_ - t) + term;
    } else {
      comp_ += (term - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

void HeavyTailedParams::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ContractViolation("heavy-tailed epsilon must be a positive number");
  }
  if (!(log_base > 1.0) || !std::isfinite(log_base)) {
    throw ContractViolation("heavy-tailed log base must be > 1");
  }
  if (table_limit < 2) {
    throw ContractViolation("heavy-tailed table limit must be >= 2");
  }
  if (saturation_step < 1) {
    throw ContractViolation("heavy-tailed saturation step must be >= 1");
  }
  // 2^(table_limit - 2) >= saturation_step; exponents >= 65 always pass.
  if (table_limit - 2 < 63 &&
      (Coord{1} << (table_limit - 2)) < saturation_step) {
    throw ContractViolation(
        "heavy-tailed table limit too small: 2^(I_max-2) must reach the "
        "saturation step");
  }
}

double pmf_numerator(std::int64_t i, double epsilon, double log_base) {
  if (i < 2) {
    throw ContractViolation("heavy-tailed exponent must be >= 2, got " +
                            std::to_string(i));
  }
  const double x = static_cast<double>(i);
  return 1.0 / (x * std::pow(log_in_base(x, log_base), 1.0 + epsilon));
}

double tail_integral(double m, double epsilon, double log_base) {
  return std::log(log_base) / epsilon *
         std::pow(log_in_base(m, log_base), -epsilon);
}

CEpsilon compute_c_epsilon(const HeavyTailedParams& params,
                           std::uint64_t partial_sum_limit, double tolerance) {
  params.validate();
  if (partial_sum_limit < 2) {
    throw ContractViolation("c_eps partial sum limit must be >= 2");
  }
  if (!(tolerance > 0.0)) {
    throw ContractViolation("c_eps tolerance must be positive");
  }

  // Sum small terms first.
  CompensatedSum partial;
  for (std::uint64_t i = partial_sum_limit; i >= 2; --i) {
    partial.add(pmf_numerator(static_cast<std::int64_t>(i), params.epsilon,
                              params.log_base));
  }
  const double s = partial.value();
  const double n = static_cast<double>(partial_sum_limit);

  // The summand is decreasing, so the tail sum over i > N lies between the
  // integrals from N + 1 and from N.
  CEpsilon out;
  out.lower = s + tail_integral(n + 1.0, params.epsilon, params.log_base);
  out.upper = s + tail_integral(n, params.epsilon, params.log_base);
  out.value = 0.5 * (out.lower + out.upper);
  out.partial_sum_limit = partial_sum_limit;
  out.tolerance = tolerance;
  out.tolerance_met = out.width() <= tolerance;
  return out;
}

HeavyTailedSampler::HeavyTailedSampler(HeavyTailedParams params,
                                       std::uint64_t partial_sum_limit,
                                       double tolerance)
    : params_(params),
      c_eps_(compute_c_epsilon(params_, partial_sum_limit, tolerance)) {
  if (!c_eps_.tolerance_met) {
    throw std::runtime_error(
        "c_eps bracket width " + std::to_string(c_eps_.width()) +
        " exceeds tolerance " + std::to_string(tolerance) + " at limit " +
        std::to_string(partial_sum_limit));
  }
  cdf_.reserve(static_cast<std::size_t>(params_.table_limit - 1));
  CompensatedSum running;
  for (int i = 2; i <= params_.table_limit; ++i) {
    running.add(pmf_numerator(i, params_.epsilon, params_.log_base));
    cdf_.push_back(running.value() / c_eps_.value);
  }
  tail_mass_ = std::max(0.0, 1.0 - cdf_.back());
}

double HeavyTailedSampler::cdf(int exponent) const {
  if (exponent < 2 || exponent > params_.table_limit) {
    throw ContractViolation("exponent outside the tabulated range");
  }
  return cdf_[static_cast<std::size_t>(exponent - 2)];
}

double HeavyTailedSampler::probability(int exponent) const {
  if (exponent < 2 || exponent > params_.table_limit) {
    throw ContractViolation("exponent outside the tabulated range");
  }
  return pmf_numerator(exponent, params_.epsilon, params_.log_base) /
         c_eps_.value;
}

Coord HeavyTailedSampler::step_size(const ExponentDraw& draw) const noexcept {
  if (draw.tail_saturated || draw.exponent - 2 >= 63) {
    return params_.saturation_step;
  }
  return std::min(Coord{1} << (draw.exponent - 2), params_.saturation_step);
}

ExponentDraw HeavyTailedSampler::sample_exponent(Rng& rng) const {
  const double u = uniform01(rng);
  if (u >= cdf_.back()) return ExponentDraw{params_.table_limit + 1, true};
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return ExponentDraw{static_cast<int>(it - cdf_.begin()) + 2, false};
}

Coord HeavyTailedSampler::step(Coord x, Rng& rng) const {
  const Coord s = sample_step_size(rng);
  return saturating_offset(x, fair_coin(rng) ? s : -s);
}

}  // namespace zopt
