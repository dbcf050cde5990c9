#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "zopt/analysis.hpp"

namespace zopt {

double potential_exp_omega(std::span<const Fitness> distances, double omega) {
  if (!(omega > 1.0) || !std::isfinite(omega)) {
    throw ContractViolation("exp-omega potential needs omega > 1");
  }
  double g = 0.0;
  for (Fitness d : distances) {
    // expm1 keeps the small terms exact.
    const double term = std::expm1(static_cast<double>(d) * std::log(omega));
    g += term;
    if (!std::isfinite(g)) {
      throw std::range_error("exp-omega potential overflows at distance " +
                             std::to_string(d));
    }
  }
  return g;
}

double potential_exp_omega(const TargetVector& target, std::span<const Coord> x,
                           double omega) {
  const auto d = distance_vector(target, x);
  return potential_exp_omega(d, omega);
}

double drift_constant_check(double omega) {
  const double w = omega - 1.0;
  return w - std::numbers::e * w * w;
}

double exp_omega_drift_bound(double omega, std::size_t n, double potential) {
  const double c = drift_constant_check(omega) / std::numbers::e;
  return c / (2.0 * omega * static_cast<double>(n)) * potential;
}

ConstraintReport check_rls_constants(const RlsPotentialConstants& k) {
  ConstraintReport report;
  auto require = [&](bool holds, const char* what) {
    if (!holds) report.violations.emplace_back(what);
  };
  const double a = k.alpha;
  const double b = k.beta;
  require(a > 1.0 && a <= 2.0, "1 < alpha <= 2");
  require(b > 0.5 && b <= 0.9, "1/2 < beta <= 0.9");
  require(2.0 * a * b - b - a > 0.0, "2 alpha beta - beta - alpha > 0");
  require(a + b > 2.0, "alpha + beta > 2");
  require(a * a * b > 1.0, "alpha^2 beta > 1");
  require(8.0 * a * b * k.c + 2.0 * k.p + 4.0 * k.c / b <= 1.0 / 16.0,
          "8 alpha beta c + 2p + 4c/beta <= 1/16");
  require(k.p > 8.0 * k.c * ((a + b) / 2.0 - 1.0),
          "p > 8c((alpha + beta)/2 - 1)");
  require(k.p > 4.0 * (a - 1.0) * k.c && 4.0 * (a - 1.0) * k.c > 0.0,
          "p > 4(alpha - 1)c > 0");
  return report;
}

double rls_potential_term(std::uint64_t d, double v,
                          const RlsPotentialConstants& k) {
  if (d == 0) return 0.0;
  const double dd = static_cast<double>(d);
  double g = dd + k.c * dd * std::max(2.0 * v / dd, dd / (2.0 * v));
  if (v > 2.0 * k.beta * dd) g += k.p * dd;
  return g;
}

double rls_potential(std::span<const Fitness> distances,
                     std::span<const double> velocity,
                     const RlsPotentialConstants& k) {
  if (distances.size() != velocity.size()) {
    throw ContractViolation("RLS potential needs one velocity per position");
  }
  double g = 0.0;
  for (std::size_t i = 0; i < distances.size(); ++i) {
    g += rls_potential_term(distances[i], velocity[i], k);
  }
  return g;
}

PotentialSpec PotentialSpec::exp_omega(double omega) {
  if (!(omega > 1.0) || !std::isfinite(omega)) {
    throw ContractViolation("exp-omega potential needs omega > 1");
  }
  return PotentialSpec(ExpOmegaPotential{omega});
}

PotentialSpec PotentialSpec::rls_cp(const RlsPotentialConstants& constants) {
  const ConstraintReport report = check_rls_constants(constants);
  if (!report.ok()) {
    std::string msg = "RLS potential constants violate:";
    for (const auto& v : report.violations) msg += " [" + v + "]";
    throw ContractViolation(msg);
  }
  return PotentialSpec(RlsCpPotential{constants});
}

std::string PotentialSpec::describe() const {
  std::ostringstream out;
  if (const auto* e = std::get_if<ExpOmegaPotential>(&kind_)) {
    out << "exp_omega(omega=" << e->omega << ")";
  } else {
    const auto& k = std::get<RlsCpPotential>(kind_).constants;
    out << "rls_cp(alpha=" << k.alpha << ",beta=" << k.beta << ",c=" << k.c
        << ",p=" << k.p << ")";
  }
  return out.str();
}

double PotentialSpec::evaluate(std::span<const Fitness> distances,
                               std::span<const double> velocity) const {
  if (const auto* e = std::get_if<ExpOmegaPotential>(&kind_)) {
    return potential_exp_omega(distances, e->omega);
  }
  return rls_potential(distances, velocity,
                       std::get<RlsCpPotential>(kind_).constants);
}

}  // namespace zopt
