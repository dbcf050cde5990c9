#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "zopt/algorithms.hpp"
#include "zopt/lattice.hpp"

namespace zopt {

/// One run's outcome plus the configuration that produced it.
struct TrialResult {
  std::string algorithm;
  std::size_t n = 0;
  Coord r = 0;
  double param1 = 0.0;
  double param2 = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t evaluations = 0;
  bool success = false;
  /// Diagnostic only; excluded from every reproducibility guarantee.
  double wall_time_s = 0.0;
};

/// A run matrix over (n, r, repetition) with the all-r target.
struct ExperimentConfig {
  AlgorithmConfig algorithm = EaPm1Config{};
  std::vector<std::size_t> n_values;
  std::vector<Coord> r_values;
  std::uint64_t repetitions = 20;
  RunBudget budget;
  std::uint64_t base_seed = 0;
  /// Trial CSV destination; empty means results are only returned.
  std::filesystem::path output;
  unsigned workers = 1;

  /// Throws ContractViolation.
  void validate() const;
  std::size_t trial_count() const noexcept {
    return n_values.size() * r_values.size() * repetitions;
  }
};

/// Per-trial stream seed; depends only on its arguments.
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t n, Coord r,
                         std::uint64_t repetition);

/// One run from 0^n towards the all-r string of length n.
TrialResult run_trial(const Optimizer& optimizer, std::size_t n, Coord r,
                      std::uint64_t seed, const RunBudget& budget);

/// Runs every (n, r, repetition) trial, in parallel when workers > 1.
/// Results are written to `config.output` (if set) and passed to `on_result`
/// as soon as all earlier trials in (n, r, repetition) order have finished,
/// so the output never depends on scheduling. An unwritable output path
/// fails before any trial starts.
std::vector<TrialResult> run_matrix(
    const ExperimentConfig& config,
    const std::function<void(const TrialResult&)>& on_result = {});

/// Integer list syntax used for n and r: comma-separated items, each either
/// a literal, "10^k", or an inclusive range "lo:hi:step" (values lo, lo+step,
/// ... up to hi). Throws ContractViolation on malformed input.
std::vector<std::int64_t> parse_int_list(std::string_view text);

}  // namespace zopt
