#include "zopt/lattice.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace zopt {

TargetVector::TargetVector(std::vector<Coord> components)
    : components_(std::move(components)) {
  if (components_.empty()) {
    throw ContractViolation("target vector must have dimension >= 1");
  }
  l1_ = norm_l1(components_);
  linf_ = norm_linf(components_);
  hamming_ = norm_hamming(components_);
  if (hamming_ == 0) {
    throw ContractViolation("target vector must have a non-zero component");
  }
}

TargetVector TargetVector::all_equal(std::size_t n, Coord r) {
  return TargetVector(std::vector<Coord>(n, r));
}

std::string TargetVector::to_string() const {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (i) out << ',';
    out << components_[i];
  }
  out << ')';
  return out.str();
}

Fitness eval_fitness(const TargetVector& target, std::span<const Coord> x,
                     Fitness ceiling) {
  if (x.size() != target.dimension()) {
    throw ContractViolation("search point dimension " +
                            std::to_string(x.size()) +
                            " does not match target dimension " +
                            std::to_string(target.dimension()));
  }
  Fitness total = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    total = saturating_add(total, abs_diff(target[i], x[i]), ceiling);
  }
  return total;
}

Fitness norm_l1(std::span<const Coord> v) noexcept {
  Fitness total = 0;
  for (Coord c : v) total = saturating_add(total, abs_diff(c, 0));
  return total;
}

Fitness norm_linf(std::span<const Coord> v) noexcept {
  Fitness best = 0;
  for (Coord c : v) best = std::max(best, abs_diff(c, 0));
  return best;
}

std::size_t norm_hamming(std::span<const Coord> v) noexcept {
  return static_cast<std::size_t>(
      std::count_if(v.begin(), v.end(), [](Coord c) { return c != 0; }));
}

std::vector<Fitness> distance_vector(const TargetVector& target,
                                     std::span<const Coord> x) {
  if (x.size() != target.dimension()) {
    throw ContractViolation("search point dimension does not match target");
  }
  std::vector<Fitness> d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = abs_diff(target[i], x[i]);
  return d;
}

}  // namespace zopt
