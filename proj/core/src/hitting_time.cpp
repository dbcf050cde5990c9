#include "zopt/hitting_time.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "zopt/lattice.hpp"

namespace zopt {
namespace {

constexpr double kRowSumTolerance = 1e-12;

std::uint64_t total(std::span<const std::uint64_t> d) {
  return std::accumulate(d.begin(), d.end(), std::uint64_t{0});
}

// All d in N^n with sum(d) <= budget, in lexicographic order.
void enumerate(std::size_t n, std::uint64_t budget, DistanceState& prefix,
               std::vector<DistanceState>& out) {
  if (prefix.size() == n) {
    out.push_back(prefix);
    return;
  }
  for (std::uint64_t v = 0; v <= budget; ++v) {
    prefix.push_back(v);
    enumerate(n, budget - v, prefix, out);
    prefix.pop_back();
  }
}

// C(budget + n, n) without overflow for the sizes we accept.
double simplex_size(std::size_t n, std::uint64_t budget) {
  double c = 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    c = c * static_cast<double>(budget + k) / static_cast<double>(k);
  }
  return c;
}

std::uint64_t moved(std::uint64_t d, bool toward) {
  if (d == 0) return 1;
  return toward ? d - 1 : d + 1;
}

void validate(const ChainSpec& spec) {
  if (spec.n < 1 || spec.n > kMaxChainDimension) {
    throw ContractViolation("exact oracle supports 1 <= n <= " +
                            std::to_string(kMaxChainDimension));
  }
  if (spec.max_distance < 1) {
    throw ContractViolation("exact oracle needs max_distance >= 1");
  }
  if (chain_state_count(spec) > kMaxChainStates) {
    throw ContractViolation("exact oracle state space exceeds " +
                            std::to_string(kMaxChainStates) + " states");
  }
}

}  // namespace

std::size_t chain_state_count(const ChainSpec& spec) {
  const double c = simplex_size(spec.n, spec.n * spec.max_distance);
  return c > 1e18 ? static_cast<std::size_t>(-1) : static_cast<std::size_t>(std::llround(c));
}

std::vector<std::pair<DistanceState, double>> HittingTimeOracle::transition_row(
    std::span<const std::uint64_t> d) const {
  const std::size_t n = spec_.n;
  if (d.size() != n) throw ContractViolation("distance state has wrong dimension");
  const std::uint64_t parent = total(d);

  std::map<DistanceState, double> row;
  DistanceState next(d.begin(), d.end());
  const DistanceState self(d.begin(), d.end());

  auto add_offspring = [&](std::uint32_t subset, double subset_prob) {
    const int k = std::popcount(subset);
    const double sign_prob = subset_prob / static_cast<double>(1u << k);
    for (std::uint32_t signs = 0; signs < (1u << k); ++signs) {
      next.assign(d.begin(), d.end());
      int bit = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (!(subset >> i & 1u)) continue;
        next[i] = moved(d[i], (signs >> bit++ & 1u) != 0);
      }
      row[total(next) <= parent ? next : self] += sign_prob;
    }
  };

  if (spec_.algorithm == ChainAlgorithm::kEaPm1) {
    const double p = 1.0 / static_cast<double>(n);
    for (std::uint32_t subset = 0; subset < (1u << n); ++subset) {
      const int k = std::popcount(subset);
      const double prob = std::pow(p, k) * std::pow(1.0 - p, static_cast<int>(n) - k);
      if (prob > 0.0) add_offspring(subset, prob);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      add_offspring(1u << i, 1.0 / static_cast<double>(n));
    }
  }

  double sum = 0.0;
  for (const auto& [_, prob] : row) sum += prob;
  if (std::abs(sum - 1.0) > kRowSumTolerance) {
    throw std::logic_error("transition row does not sum to 1");
  }
  return {row.begin(), row.end()};
}

HittingTimeOracle::HittingTimeOracle(ChainSpec spec) : spec_(spec) {
  validate(spec_);
  budget_ = spec_.n * spec_.max_distance;
  DistanceState prefix;
  enumerate(spec_.n, budget_, prefix, states_);

  // states_[0] is the absorbing all-zero state; unknowns are states 1..N-1.
  const auto unknowns = static_cast<Eigen::Index>(states_.size() - 1);
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t s = 1; s < states_.size(); ++s) {
    const auto row = static_cast<Eigen::Index>(s - 1);
    triplets.emplace_back(row, row, 1.0);
    for (const auto& [target, prob] : transition_row(states_[s])) {
      const std::size_t t = index_of(target);
      if (t == 0) continue;
      triplets.emplace_back(row, static_cast<Eigen::Index>(t - 1), -prob);
    }
  }
  Eigen::SparseMatrix<double> system(unknowns, unknowns);
  system.setFromTriplets(triplets.begin(), triplets.end());
  system.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(system);
  if (lu.info() != Eigen::Success) {
    throw std::runtime_error("hitting-time system is singular: " +
                             lu.lastErrorMessage());
  }
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(unknowns);
  const Eigen::VectorXd solution = lu.solve(ones);
  if (lu.info() != Eigen::Success || !solution.allFinite()) {
    throw std::runtime_error("hitting-time system could not be solved");
  }
  expected_.assign(states_.size(), 0.0);
  for (Eigen::Index i = 0; i < unknowns; ++i) {
    expected_[static_cast<std::size_t>(i) + 1] = solution[i];
  }
}

std::size_t HittingTimeOracle::index_of(std::span<const std::uint64_t> d) const {
  // states_ is sorted lexicographically.
  const auto it = std::lower_bound(
      states_.begin(), states_.end(), d,
      [](const DistanceState& a, std::span<const std::uint64_t> b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(),
                                            b.end());
      });
  if (it == states_.end() || !std::equal(it->begin(), it->end(), d.begin(), d.end())) {
    throw ContractViolation("distance state outside the oracle state space");
  }
  return static_cast<std::size_t>(it - states_.begin());
}

double HittingTimeOracle::expected_time(std::span<const std::uint64_t> start) const {
  if (start.size() != spec_.n) {
    throw ContractViolation("start vector has wrong dimension");
  }
  return expected_[index_of(start)];
}

double exact_hitting_time(const ChainSpec& spec,
                          std::span<const std::uint64_t> start) {
  return HittingTimeOracle(spec).expected_time(start);
}

}  // namespace zopt
