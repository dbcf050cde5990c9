#include "zopt/results_csv.hpp"

#include <fmt/core.h>

#include <charconv>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace zopt {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  while (true) {
    const auto comma = line.find(',');
    fields.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return fields;
}

template <class T>
T parse_number(std::string_view field, const char* column) {
  T value{};
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
    throw std::runtime_error(fmt::format("bad value '{}' in column {}", field, column));
  }
  return value;
}

// libstdc++ 11 has no floating-point from_chars.
double parse_real(std::string_view field, const char* column) {
  const std::string copy(field);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(copy, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != copy.size() || copy.empty()) {
    throw std::runtime_error(fmt::format("bad value '{}' in column {}", field, column));
  }
  return value;
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

std::string format_trial_row(const TrialResult& t) {
  return fmt::format("{},{},{},{},{},{},{},{},{:.6f}", t.algorithm, t.n, t.r,
                     t.param1, t.param2, t.seed, t.evaluations,
                     t.success ? "true" : "false", t.wall_time_s);
}

std::string format_summary_row(const SummaryRow& row) {
  const BoxStats& s = row.stats;
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{}", row.algorithm,
                     row.param1, row.param2, row.n, row.r, s.count, s.mean,
                     s.q1, s.median, s.q3, s.whisker_low, s.whisker_high,
                     s.outliers, row.failure_rate);
}

TrialResult parse_trial_row(std::string_view line) {
  const auto f = split_fields(strip_cr(line));
  if (f.size() != 9) {
    throw std::runtime_error(
        fmt::format("expected 9 columns, got {} in '{}'", f.size(), line));
  }
  TrialResult t;
  t.algorithm = std::string(f[0]);
  t.n = parse_number<std::size_t>(f[1], "n");
  t.r = parse_number<Coord>(f[2], "r");
  t.param1 = parse_real(f[3], "param1");
  t.param2 = parse_real(f[4], "param2");
  t.seed = parse_number<std::uint64_t>(f[5], "seed");
  t.evaluations = parse_number<std::uint64_t>(f[6], "evaluations");
  if (f[7] == "true") {
    t.success = true;
  } else if (f[7] == "false") {
    t.success = false;
  } else {
    throw std::runtime_error(fmt::format("bad value '{}' in column success", f[7]));
  }
  t.wall_time_s = parse_real(f[8], "wall_time_s");
  return t;
}

TrialCsvWriter::TrialCsvWriter(const std::filesystem::path& path)
    : path_(path), out_(path, std::ios::out | std::ios::trunc) {
  if (!out_) {
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  }
  out_ << kTrialCsvHeader << '\n';
  out_.flush();
  if (!out_) throw std::runtime_error("cannot write to '" + path.string() + "'");
}

void TrialCsvWriter::write(const TrialResult& result) {
  out_ << format_trial_row(result) << '\n';
  out_.flush();
  if (!out_) throw std::runtime_error("write to '" + path_.string() + "' failed");
}

void write_trial_csv(std::ostream& out, const std::vector<TrialResult>& results) {
  out << kTrialCsvHeader << '\n';
  for (const auto& t : results) out << format_trial_row(t) << '\n';
}

std::vector<TrialResult> read_trial_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != kTrialCsvHeader) {
    throw std::runtime_error("trial CSV header mismatch; expected '" +
                             std::string(kTrialCsvHeader) + "'");
  }
  std::vector<TrialResult> results;
  while (std::getline(in, line)) {
    if (strip_cr(line).empty()) continue;
    results.push_back(parse_trial_row(line));
  }
  return results;
}

std::vector<TrialResult> read_trial_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return read_trial_csv(in);
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << kSummaryCsvHeader << '\n';
  for (const auto& row : rows) out << format_summary_row(row) << '\n';
}

}  // namespace zopt
