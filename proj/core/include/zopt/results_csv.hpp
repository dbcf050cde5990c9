#pragma once

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "zopt/experiment.hpp"
#include "zopt/statistics.hpp"

namespace zopt {

inline constexpr std::string_view kTrialCsvHeader =
    "algorithm,n,r,param1,param2,seed,evaluations,success,wall_time_s";

inline constexpr std::string_view kSummaryCsvHeader =
    "algorithm,param1,param2,n,r,count,mean,q1,median,q3,whisker_low,"
    "whisker_high,outliers,failure_rate";

/// Reals use the shortest representation that reads back exactly.
std::string format_trial_row(const TrialResult& result);
std::string format_summary_row(const SummaryRow& row);

/// Parses one data row. Throws std::runtime_error on malformed input.
TrialResult parse_trial_row(std::string_view line);

/// Opens (truncating) the file and writes the header immediately, so a bad
/// path is reported at construction. Throws std::runtime_error.
class TrialCsvWriter {
 public:
  explicit TrialCsvWriter(const std::filesystem::path& path);
  void write(const TrialResult& result);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

void write_trial_csv(std::ostream& out, const std::vector<TrialResult>& results);
std::vector<TrialResult> read_trial_csv(std::istream& in);
std::vector<TrialResult> read_trial_csv(const std::filesystem::path& path);

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

}  // namespace zopt
