#pragma once

// Search-space primitives on the integer lattice Z^n: targets, search points,
// the L1-distance fitness family and the norms used to state run-time bounds.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace zopt {

using Coord = std::int64_t;
using Fitness = std::uint64_t;

inline constexpr Fitness kFitnessCeiling = std::numeric_limits<Fitness>::max();

/// Thrown when a caller breaks a documented precondition.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Saturating unsigned addition, clamped at `ceiling`.
constexpr Fitness saturating_add(Fitness lhs, Fitness rhs,
                                 Fitness ceiling = kFitnessCeiling) noexcept {
  if (lhs >= ceiling || rhs >= ceiling - lhs) return ceiling;
  return lhs + rhs;
}

/// Exact |a - b| for any pair of 64-bit signed integers.
constexpr Fitness abs_diff(Coord a, Coord b) noexcept {
  return a >= b ? static_cast<Fitness>(a) - static_cast<Fitness>(b)
                : static_cast<Fitness>(b) - static_cast<Fitness>(a);
}

/// x + delta, clamped into the representable Coord range instead of wrapping.
constexpr Coord saturating_offset(Coord x, Coord delta) noexcept {
  constexpr Coord kMax = std::numeric_limits<Coord>::max();
  constexpr Coord kMin = std::numeric_limits<Coord>::min();
  if (delta > 0 && x > kMax - delta) return kMax;
  if (delta < 0 && x < kMin - delta) return kMin;
  return x + delta;
}

/// The optimum a of f_a. Non-empty and non-zero; norms are cached.
class TargetVector {
 public:
  explicit TargetVector(std::vector<Coord> components);

  /// The all-r string of length n.
  static TargetVector all_equal(std::size_t n, Coord r);

  std::size_t dimension() const noexcept { return components_.size(); }
  std::span<const Coord> components() const noexcept { return components_; }
  Coord operator[](std::size_t i) const noexcept { return components_[i]; }

  Fitness l1() const noexcept { return l1_; }
  Fitness linf() const noexcept { return linf_; }
  std::size_t hamming() const noexcept { return hamming_; }

  std::string to_string() const;

 private:
  std::vector<Coord> components_;
  Fitness l1_ = 0;
  Fitness linf_ = 0;
  std::size_t hamming_ = 0;
};

/// A point x of Z^n with an optional fitness cache.
struct SearchPoint {
  std::vector<Coord> components;
  std::optional<Fitness> cached_fitness;

  static SearchPoint origin(std::size_t n) {
    return SearchPoint{std::vector<Coord>(n, 0), std::nullopt};
  }
  std::size_t dimension() const noexcept { return components.size(); }
};

/// f_a(x) = sum_i |x_i - a_i|, saturating at `ceiling`.
/// Throws ContractViolation when dimensions differ.
Fitness eval_fitness(const TargetVector& target, std::span<const Coord> x,
                     Fitness ceiling = kFitnessCeiling);

inline Fitness eval_fitness(const TargetVector& target, const SearchPoint& x,
                            Fitness ceiling = kFitnessCeiling) {
  return eval_fitness(target, x.components, ceiling);
}

Fitness norm_l1(std::span<const Coord> v) noexcept;
Fitness norm_linf(std::span<const Coord> v) noexcept;
std::size_t norm_hamming(std::span<const Coord> v) noexcept;

inline Fitness norm_l1(const TargetVector& a) noexcept { return a.l1(); }
inline Fitness norm_linf(const TargetVector& a) noexcept { return a.linf(); }
inline std::size_t norm_hamming(const TargetVector& a) noexcept {
  return a.hamming();
}

/// Per-component distances d_i = |a_i - x_i|.
std::vector<Fitness> distance_vector(const TargetVector& target,
                                     std::span<const Coord> x);

}  // namespace zopt
