#include "zopt/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>
#include <tuple>

#include "zopt/results_csv.hpp"
#include "zopt/rng.hpp"

namespace zopt {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::int64_t parse_literal(std::string_view text) {
  text = trim(text);
  std::int64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ContractViolation("not an integer: '" + std::string(text) + "'");
  }
  return value;
}

// "b^k" or a plain literal.
std::int64_t parse_scalar(std::string_view text) {
  text = trim(text);
  const auto caret = text.find('^');
  if (caret == std::string_view::npos) return parse_literal(text);
  const std::int64_t base = parse_literal(text.substr(0, caret));
  const std::int64_t exponent = parse_literal(text.substr(caret + 1));
  if (exponent < 0) {
    throw ContractViolation("negative exponent in '" + std::string(text) + "'");
  }
  std::int64_t value = 1;
  for (std::int64_t k = 0; k < exponent; ++k) {
    if (base != 0 && std::abs(value) > std::numeric_limits<std::int64_t>::max() /
                                           std::abs(base)) {
      throw ContractViolation("'" + std::string(text) + "' overflows 64 bits");
    }
    value *= base;
  }
  return value;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n_values.empty()) throw ContractViolation("n_values must not be empty");
  if (r_values.empty()) throw ContractViolation("r_values must not be empty");
  for (std::size_t n : n_values) {
    if (n < 1) throw ContractViolation("every n must be >= 1");
  }
  for (Coord r : r_values) {
    if (r < 1) throw ContractViolation("every r must be >= 1");
  }
  if (repetitions < 1) throw ContractViolation("repetitions must be >= 1");
  if (workers < 1) throw ContractViolation("workers must be >= 1");
  budget.validate();
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t n, Coord r,
                         std::uint64_t repetition) {
  return derive_seed(base_seed, {static_cast<std::uint64_t>(n),
                                 static_cast<std::uint64_t>(r), repetition});
}

TrialResult run_trial(const Optimizer& optimizer, std::size_t n, Coord r,
                      std::uint64_t seed, const RunBudget& budget) {
  const TargetVector target = TargetVector::all_equal(n, r);
  Rng rng(seed);
  const auto start = std::chrono::steady_clock::now();
  const RunOutcome outcome = optimizer.run(target, budget, rng);
  const auto stop = std::chrono::steady_clock::now();

  TrialResult result;
  result.algorithm = optimizer.label();
  result.n = n;
  result.r = r;
  std::tie(result.param1, result.param2) = algorithm_params(optimizer.config());
  result.seed = seed;
  result.evaluations = outcome.evaluations;
  result.success = outcome.success;
  result.wall_time_s = std::chrono::duration<double>(stop - start).count();
  return result;
}

std::vector<TrialResult> run_matrix(
    const ExperimentConfig& config,
    const std::function<void(const TrialResult&)>& on_result) {
  config.validate();
  std::unique_ptr<TrialCsvWriter> writer;
  if (!config.output.empty()) {
    writer = std::make_unique<TrialCsvWriter>(config.output);
  }
  const Optimizer optimizer(config.algorithm);

  struct TrialKey {
    std::size_t n;
    Coord r;
    std::uint64_t repetition;
  };
  std::vector<TrialKey> keys;
  keys.reserve(config.trial_count());
  for (std::size_t n : config.n_values) {
    for (Coord r : config.r_values) {
      for (std::uint64_t rep = 0; rep < config.repetitions; ++rep) {
        keys.push_back({n, r, rep});
      }
    }
  }

  std::vector<std::optional<TrialResult>> slots(keys.size());
  std::mutex emit_mutex;
  std::size_t next_to_emit = 0;
  std::atomic<std::size_t> next_trial{0};
  std::exception_ptr failure;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next_trial.fetch_add(1);
      if (i >= keys.size()) return;
      try {
        const auto& k = keys[i];
        TrialResult result = run_trial(
            optimizer, k.n, k.r,
            trial_seed(config.base_seed, k.n, k.r, k.repetition), config.budget);
        std::lock_guard lock(emit_mutex);
        slots[i] = std::move(result);
        while (next_to_emit < slots.size() && slots[next_to_emit]) {
          if (writer) writer->write(*slots[next_to_emit]);
          if (on_result) on_result(*slots[next_to_emit]);
          ++next_to_emit;
        }
      } catch (...) {
        std::lock_guard lock(emit_mutex);
        if (!failure) failure = std::current_exception();
        next_trial.store(keys.size());
        return;
      }
    }
  };

  const unsigned threads =
      static_cast<unsigned>(std::min<std::size_t>(config.workers, keys.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<TrialResult> results;
  results.reserve(slots.size());
  for (auto& slot : slots) results.push_back(std::move(*slot));
  return results;
}

std::vector<std::int64_t> parse_int_list(std::string_view text) {
  std::vector<std::int64_t> values;
  while (true) {
    const auto comma = text.find(',');
    const std::string_view item = trim(text.substr(0, comma));
    if (item.empty()) throw ContractViolation("empty item in integer list");

    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      values.push_back(parse_scalar(item));
    } else {
      const auto second = item.find(':', colon + 1);
      if (second == std::string_view::npos) {
        throw ContractViolation("range must be lo:hi:step, got '" +
                                std::string(item) + "'");
      }
      const std::int64_t lo = parse_scalar(item.substr(0, colon));
      const std::int64_t hi = parse_scalar(item.substr(colon + 1, second - colon - 1));
      const std::int64_t step = parse_scalar(item.substr(second + 1));
      if (step <= 0) throw ContractViolation("range step must be positive");
      if (lo > hi) throw ContractViolation("range lower end exceeds upper end");
      for (std::int64_t v = lo; v <= hi; v += step) {
        values.push_back(v);
        if (v > std::numeric_limits<std::int64_t>::max() - step) break;
      }
    }
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return values;
}

}  // namespace zopt
