#include "zopt/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

namespace zopt {

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw ContractViolation("quantile of empty data");
  if (!(p >= 0.0 && p <= 1.0)) throw ContractViolation("quantile p outside [0, 1]");
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

BoxStats box_statistics(std::span<const double> data) {
  if (data.empty()) throw ContractViolation("box statistics of empty data");
  std::vector<double> sorted(data.begin(), data.end());
  std::sort(sorted.begin(), sorted.end());

  BoxStats s;
  s.count = sorted.size();
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) /
           static_cast<double>(sorted.size());
  s.q1 = quantile_sorted(sorted, 0.25);
  s.median = quantile_sorted(sorted, 0.5);
  s.q3 = quantile_sorted(sorted, 0.75);

  const double iqr = s.q3 - s.q1;
  const double low_fence = s.q1 - 1.5 * iqr;
  const double high_fence = s.q3 + 1.5 * iqr;
  s.whisker_low = *std::find_if(sorted.begin(), sorted.end(),
                                [&](double v) { return v >= low_fence; });
  s.whisker_high = *std::find_if(sorted.rbegin(), sorted.rend(),
                                 [&](double v) { return v <= high_fence; });
  s.outliers = static_cast<std::size_t>(std::count_if(
      sorted.begin(), sorted.end(),
      [&](double v) { return v < low_fence || v > high_fence; }));
  return s;
}

double failure_rate(std::span<const TrialResult> group) {
  if (group.empty()) throw ContractViolation("failure rate of an empty group");
  const auto failures = std::count_if(group.begin(), group.end(),
                                      [](const TrialResult& t) { return !t.success; });
  return static_cast<double>(failures) / static_cast<double>(group.size());
}

std::vector<SummaryRow> summarize(std::span<const TrialResult> results) {
  using Key = std::tuple<std::string, double, double, std::size_t, Coord>;
  std::map<Key, std::vector<TrialResult>> groups;
  for (const auto& t : results) {
    groups[{t.algorithm, t.param1, t.param2, t.n, t.r}].push_back(t);
  }

  std::vector<SummaryRow> rows;
  rows.reserve(groups.size());
  for (const auto& [key, group] : groups) {
    std::vector<double> evaluations;
    evaluations.reserve(group.size());
    for (const auto& t : group) {
      evaluations.push_back(static_cast<double>(t.evaluations));
    }
    SummaryRow row;
    std::tie(row.algorithm, row.param1, row.param2, row.n, row.r) = key;
    row.stats = box_statistics(evaluations);
    row.failure_rate = failure_rate(group);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace zopt
