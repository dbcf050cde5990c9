// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <fmt/core.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "zopt/algorithms.hpp"
#include "zopt/analysis.hpp"
#include "zopt/experiment.hpp"
#include "zopt/heavy_tailed.hpp"
#include "zopt/hitting_time.hpp"
#include "zopt/results_csv.hpp"
#include "zopt/statistics.hpp"

namespace {

using namespace zopt;

struct Verdict {
  bool pass = true;
  std::string detail;
};

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

class Moments {
 public:
  void add(double x) {
    ++n_;
    sum_ += x;
    sum_sq_ += x * x;
  }
  MeanSe result() const {
    const double n = static_cast<double>(n_);
    const double mean = sum_ / n;
    const double var = (sum_sq_ - n * mean * mean) / (n - 1.0);
    return {mean, std::sqrt(std::max(var, 0.0) / n)};
  }

 private:
  std::uint64_t n_ = 0;
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
};

double mean_evaluations(const std::vector<TrialResult>& results, Coord r) {
  double sum = 0.0;
  int count = 0;
  for (const auto& t : results) {
    if (t.r != r) continue;
    sum += static_cast<double>(t.evaluations);
    ++count;
  }
  return sum / count;
}

// Hitting time of the optimum from distance vector `d` (target d, start 0).
template <class MakeState>
MeanSe monte_carlo(const DistanceState& d, int runs, std::uint64_t seed,
                   MakeState make_state) {
  std::vector<Coord> a(d.begin(), d.end());
  const TargetVector target(a);
  Moments m;
  for (int k = 0; k < runs; ++k) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(k)}));
    auto state = make_state(target);
    m.add(static_cast<double>(run_to_optimum(state, target, RunBudget{}, rng).evaluations));
  }
  return m.result();
}

auto ea_pm1_state = [](const TargetVector& a) {
  return EaState::initial(a, StepOperator::plus_minus_one());
};
auto rls_fixed_state = [](const TargetVector& a) {
  return RlsState::initial(a, 1.0, 1.0);
};

Verdict criterion1() {
  const HittingTimeOracle oracle({1, 20, ChainAlgorithm::kEaPm1});
  Verdict v;
  double worst_z = 0.0;
  for (std::uint64_t d = 1; d <= 20; ++d) {
    const DistanceState start{d};
    const double exact = oracle.expected_time(start);
    if (std::abs(exact - 2.0 * static_cast<double>(d)) > 1e-9) {
      v.pass = false;
      v.detail += fmt::format("oracle({})={} != {}; ", d, exact, 2 * d);
    }
    const MeanSe mc = monte_carlo(start, 10'000, 100 + d, ea_pm1_state);
    const double z = std::abs(mc.mean - exact) / mc.se;
    worst_z = std::max(worst_z, z);
    if (z > 4.0) {
      v.pass = false;
      v.detail += fmt::format("d={} MC {:.3f} vs {}; ", d, mc.mean, exact);
    }
  }
  v.detail += fmt::format("E[T]=2d exact for d=1..20, worst MC deviation {:.2f} SE", worst_z);
  return v;
}

Verdict criterion2() {
  Verdict v;
  double worst_z = 0.0;
  int checked = 0;
  for (auto algorithm : {ChainAlgorithm::kEaPm1, ChainAlgorithm::kRlsFixedStep}) {
    const HittingTimeOracle oracle({2, 5, algorithm});
    for (std::uint64_t i = 0; i <= 5; ++i) {
      for (std::uint64_t j = 0; j <= 5; ++j) {
        if (i + j == 0) continue;
        const DistanceState start{i, j};
        const double exact = oracle.expected_time(start);
        const std::uint64_t seed = derive_seed(200, {i, j, algorithm == ChainAlgorithm::kEaPm1});
        const MeanSe mc = algorithm == ChainAlgorithm::kEaPm1
                              ? monte_carlo(start, 10'000, seed, ea_pm1_state)
                              : monte_carlo(start, 10'000, seed, rls_fixed_state);
        const double z = std::abs(mc.mean - exact) / mc.se;
        worst_z = std::max(worst_z, z);
        ++checked;
        if (z > 4.0) {
          v.pass = false;
          v.detail += fmt::format("({},{}) MC {:.3f} vs {:.3f}; ", i, j, mc.mean, exact);
        }
      }
    }
  }
  v.detail += fmt::format("{} starts (+-1 EA and fixed-step RLS), worst deviation {:.2f} SE",
                          checked, worst_z);
  return v;
}

Verdict criterion3() {
  const double c = drift_constant_check(1.2);
  return {std::abs(c - 0.0912687) <= 1e-6, fmt::format("drift_constant_check(1.2) = {:.9f}", c)};
}

Verdict criterion4() {
  Verdict v;
  for (double eps : {1.0, 0.1, 0.001}) {
    HeavyTailedParams params;
    params.epsilon = eps;
    const HeavyTailedSampler s(params);
    const double total = s.cdf_table().back() + s.tail_mass();
    if (std::abs(total - 1.0) > 1e-9) {
      v.pass = false;
      v.detail += fmt::format("eps={} mass {}; ", eps, total);
    }
    Rng rng(derive_seed(400, {static_cast<std::uint64_t>(eps * 1000)}));
    constexpr int kDraws = 1'000'000;
    int counts[4] = {0, 0, 0, 0};
    for (int k = 0; k < kDraws; ++k) {
      const ExponentDraw d = s.sample_exponent(rng);
      if (d.tail_saturated) {
        ++counts[3];
      } else if (d.exponent <= 4) {
        ++counts[d.exponent - 2];
      }
    }
    const double probs[4] = {s.probability(2), s.probability(3), s.probability(4),
                             s.tail_mass()};
    double worst = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double freq = static_cast<double>(counts[k]) / kDraws;
      const double se = std::sqrt(probs[k] * (1.0 - probs[k]) / kDraws);
      const double z = std::abs(freq - probs[k]) / se;
      worst = std::max(worst, z);
      if (z > 4.0) v.pass = false;
    }
    v.detail += fmt::format("eps={}: c_eps={:.6f} worst {:.2f} SE; ", eps,
                            s.c_epsilon().value, worst);
  }
  return v;
}

Verdict criterion5() {
  ExperimentConfig c;
  c.algorithm = EaPm1Config{};
  c.n_values = {10};
  c.r_values = {32, 64, 128, 256, 512, 1024};
  c.repetitions = 20;
  c.base_seed = 5;
  const auto results = run_matrix(c);
  std::vector<double> xs, ys;
  for (Coord r : c.r_values) {
    xs.push_back(std::log(static_cast<double>(r)));
    ys.push_back(std::log(mean_evaluations(results, r)));
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  return {slope >= 0.85 && slope <= 1.15,
          fmt::format("+-1 EA n=10, log-log slope {:.4f} (band [0.85, 1.15])", slope)};
}

Verdict criterion6() {
  ExperimentConfig c;
  c.algorithm = RlsConfig{1.7, 0.9};
  c.n_values = {10};
  c.r_values = {1000, 1'000'000};
  c.repetitions = 50;
  c.base_seed = 6;
  const auto results = run_matrix(c);
  const double lo = mean_evaluations(results, 1000);
  const double hi = mean_evaluations(results, 1'000'000);
  const double ratio = hi / lo;
  return {ratio >= 1.5 && ratio <= 2.8,
          fmt::format("RLS(1.7, 0.9) n=10: mean {:.1f} at r=1e3, {:.1f} at r=1e6, "
                      "ratio {:.3f} (band [1.5, 2.8])",
                      lo, hi, ratio)};
}

Verdict criterion7() {
  HeavyTailedParams params;
  params.epsilon = 0.001;
  ExperimentConfig c;
  c.algorithm = EaHeavyConfig{params};
  c.n_values = {10};
  c.r_values = {1000, 1'000'000'000};
  c.repetitions = 20;
  c.base_seed = 7;
  const auto results = run_matrix(c);
  const double lo = mean_evaluations(results, 1000);
  const double hi = mean_evaluations(results, 1'000'000'000);
  const double ratio = hi / lo;
  const double fail = failure_rate(results);
  return {ratio <= 8.0 && fail == 0.0,
          fmt::format("heavy EA eps=0.001 n=10: mean {:.0f} at r=1e3, {:.0f} at r=1e9, "
                      "ratio {:.3f} (limit 8), failure rate {}",
                      lo, hi, ratio, fail)};
}

Verdict criterion8() {
  HeavyTailedParams params;
  params.epsilon = 0.001;
  const Optimizer opt(EaHeavyConfig{params});
  const TargetVector a = TargetVector::all_equal(10, 1'000'000);
  double sums[2] = {0.0, 0.0};
  bool all_success = true;
  constexpr int kReps = 50;
  const double ratios[2] = {0.5, 0.25};
  for (int k = 0; k < 2; ++k) {
    for (int rep = 0; rep < kReps; ++rep) {
      Rng rng(derive_seed(800, {static_cast<std::uint64_t>(k),
                                static_cast<std::uint64_t>(rep)}));
      const RunOutcome o = time_to_approximation(opt, a, ratios[k], RunBudget{}, rng);
      all_success = all_success && o.success;
      sums[k] += static_cast<double>(o.evaluations);
    }
  }
  const double ratio = sums[1] / sums[0];
  return {all_success && ratio >= 1.5 && ratio <= 2.8,
          fmt::format("heavy EA |a|_1=1e7: mean {:.0f} to 1/2, {:.0f} to 1/4, ratio {:.3f} "
                      "(band [1.5, 2.8])",
                      sums[0] / kReps, sums[1] / kReps, ratio)};
}

Verdict criterion9() {
  const Optimizer opt(EaPm1Config{});
  const auto potential = PotentialSpec::exp_omega(1.2);
  Rng pick(900);
  std::uniform_int_distribution<std::size_t> dim(1, 5);
  std::uniform_int_distribution<Coord> dist(0, 10);
  Verdict v;
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = dim(pick);
    std::vector<Coord> x(n);
    bool optimal = true;
    while (optimal) {
      for (auto& c : x) c = 1 - dist(pick);
      optimal = std::all_of(x.begin(), x.end(), [](Coord c) { return c == 1; });
    }
    const TargetVector a = TargetVector::all_equal(n, 1);
    Rng rng(derive_seed(901, {static_cast<std::uint64_t>(k)}));
    const DriftReport r = estimate_drift(a, {x, {}}, opt, potential, 10'000, rng);
    const double margin = (r.mean - r.lower_bound) / std::max(r.standard_error, 1e-300);
    worst = std::min(worst, margin);
    if (!r.consistent_with_bound(4.0)) {
      v.pass = false;
      v.detail += fmt::format("{}: drift {:.4g} < bound {:.4g}; ", r.state, r.mean,
                              r.lower_bound);
    }
  }
  v.detail += fmt::format("100 states, smallest (drift - bound)/SE = {:.2f}", worst);
  return v;
}

Verdict criterion10() {
  const bool accepts = check_rls_constants({1.7, 0.9, 0.001, 0.01}).ok();
  const ConstraintReport rejected = check_rls_constants({2.0, 0.5, 0.001, 0.01});
  std::string why;
  for (const auto& s : rejected.violations) why += "[" + s + "]";
  return {accepts && !rejected.ok(),
          fmt::format("(1.7, 0.9, 0.001, 0.01) {}; (2.0, 0.5, 0.001, 0.01) {} {}",
                      accepts ? "accepted" : "REJECTED",
                      rejected.ok() ? "ACCEPTED" : "rejected by", why)};
}

std::string strip_wall_time(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + '\n';
  return out;
}

Verdict criterion11() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path();
  const fs::path a = dir / "zopt_acceptance_a.csv";
  const fs::path b = dir / "zopt_acceptance_b.csv";
  Verdict v;
  std::ostringstream sink;
  int configs = 0;
  for (const std::vector<std::string>& flags :
       {std::vector<std::string>{"--algo", "ea_pm1", "--n", "1,5", "--r", "10:50:20"},
        std::vector<std::string>{"--algo", "ea_heavy", "--eps", "0.1", "--n", "3", "--r", "10^4"},
        std::vector<std::string>{"--algo", "rls", "--alpha", "2.0", "--beta", "0.5", "--n", "4",
                                 "--r", "10^3,10^6"}}) {
    for (const fs::path& out : {a, b}) {
      std::vector<std::string> args{"zopt", "bench", "--reps", "5", "--seed", "11",
                                    "--out", out.string(), "--workers",
                                    out == a ? "1" : "2"};
      args.insert(args.end(), flags.begin(), flags.end());
      if (cli::dispatch(args, sink, sink) != cli::kExitOk) {
        v.pass = false;
        v.detail += "bench failed: " + sink.str();
      }
    }
    if (strip_wall_time(a) != strip_wall_time(b)) {
      v.pass = false;
      v.detail += fmt::format("config {} differs between runs; ", configs);
    }
    ++configs;
  }
  fs::remove(a);
  fs::remove(b);

  const std::vector<double> fixture{1, 2, 3, 100};
  const BoxStats s = box_statistics(fixture);
  const bool quartiles = s.q1 == 1.75 && s.median == 2.5 && s.q3 == 27.25 &&
                         s.whisker_low == 1.0 && s.whisker_high == 3.0 && s.outliers == 1;
  if (!quartiles) v.pass = false;
  v.detail += fmt::format(
      "{} bench configs byte-identical across reruns; fixture {{1,2,3,100}}: "
      "Q1={} median={} Q3={} whiskers [{}, {}] outliers={}",
      configs, s.q1, s.median, s.q3, s.whisker_low, s.whisker_high, s.outliers);
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Verdict()>>> criteria{
      {1, criterion1}, {2, criterion2}, {3, criterion3},  {4, criterion4},
      {5, criterion5}, {6, criterion6}, {7, criterion7},  {8, criterion8},
      {9, criterion9}, {10, criterion10}, {11, criterion11},
  };
  int failures = 0;
  for (const auto& [id, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    fmt::print("criterion {:>2}: {} ({:.1f}s) {}\n", id, v.pass ? "PASS" : "FAIL", secs,
               v.detail);
    std::fflush(stdout);
    if (!v.pass) ++failures;
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
