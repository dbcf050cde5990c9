#pragma once

// Box-plot summaries of run times. Quartiles interpolate linearly between
// order statistics (position (N - 1) p, zero-based). Whiskers reach the most
// extreme data points within 1.5 IQR of the box; anything beyond is an
// outlier.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "zopt/experiment.hpp"

namespace zopt {

struct BoxStats {
  std::size_t count = 0;
  double mean = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double whisker_low = 0.0;
  double whisker_high = 0.0;
  std::size_t outliers = 0;
};

/// Linear-interpolation quantile of already sorted data. 0 <= p <= 1.
double quantile_sorted(std::span<const double> sorted, double p);

/// Requires non-empty data.
BoxStats box_statistics(std::span<const double> data);

/// Fraction of unsuccessful trials. Requires a non-empty group.
double failure_rate(std::span<const TrialResult> group);

struct SummaryRow {
  std::string algorithm;
  double param1 = 0.0;
  double param2 = 0.0;
  std::size_t n = 0;
  Coord r = 0;
  BoxStats stats;  // over evaluations; failed runs count at their budget
  double failure_rate = 0.0;
};

/// Groups by (algorithm, param1, param2, n, r), sorted by that key.
std::vector<SummaryRow> summarize(std::span<const TrialResult> results);

}  // namespace zopt
