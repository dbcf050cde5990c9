#include "cli.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <limits>
#include <tuple>
#include <optional>
#include <stdexcept>

#include "zopt/algorithms.hpp"
#include "zopt/analysis.hpp"
#include "zopt/experiment.hpp"
#include "zopt/hitting_time.hpp"
#include "zopt/results_csv.hpp"
#include "zopt/statistics.hpp"

namespace zopt::cli {
namespace {

struct AlgorithmOptions {
  std::string algo = "ea_pm1";
  double epsilon = 0.001;
  double log_base = 2.0;
  double alpha = 1.7;
  double beta = 0.9;

  void attach(CLI::App& app) {
    app.add_option("--algo", algo, "ea_pm1, ea_heavy or rls")
        ->check(CLI::IsMember({"ea_pm1", "ea_heavy", "rls"}))
        ->capture_default_str();
    app.add_option("--eps", epsilon, "heavy-tailed epsilon")->capture_default_str();
    app.add_option("--log-base", log_base, "heavy-tailed logarithm base")
        ->capture_default_str();
    app.add_option("--alpha", alpha, "RLS velocity growth factor")->capture_default_str();
    app.add_option("--beta", beta, "RLS velocity shrink factor")->capture_default_str();
  }

  AlgorithmConfig config() const {
    if (algo == "ea_heavy") {
      HeavyTailedParams params;
      params.epsilon = epsilon;
      params.log_base = log_base;
      params.validate();
      return EaHeavyConfig{params};
    }
    if (algo == "rls") return RlsConfig{alpha, beta};
    return EaPm1Config{};
  }
};

std::int64_t single_value(const std::string& text, const char* what) {
  const auto values = parse_int_list(text);
  if (values.size() != 1) {
    throw ContractViolation(std::string(what) + " takes a single value");
  }
  return values.front();
}

RunBudget make_budget(const std::string& budget_text, std::optional<Coord> box) {
  RunBudget budget;
  const std::int64_t b = single_value(budget_text, "--budget");
  if (b < 1) throw ContractViolation("--budget must be >= 1");
  budget.max_evaluations = static_cast<std::uint64_t>(b);
  budget.box_bound = box;
  budget.validate();
  return budget;
}

// Target from --target (explicit list) or the all-r string of length n.
TargetVector make_target(const std::string& explicit_target, std::size_t n,
                         const std::string& r_text) {
  if (!explicit_target.empty()) return TargetVector(parse_int_list(explicit_target));
  if (n < 1) throw ContractViolation("--n must be >= 1");
  return TargetVector::all_equal(n, single_value(r_text, "--r"));
}

std::vector<std::uint64_t> distances_for(const std::string& text, std::size_t n) {
  const auto raw = parse_int_list(text);
  std::vector<std::uint64_t> d;
  for (std::int64_t v : raw) {
    if (v < 0) throw ContractViolation("distances must be non-negative");
    d.push_back(static_cast<std::uint64_t>(v));
  }
  if (d.size() == 1 && n > 1) d.assign(n, d.front());
  if (d.size() != n) throw ContractViolation("--d needs 1 or n values");
  return d;
}

std::vector<std::string> with_config_file(std::vector<std::string> args) {
  for (std::size_t i = 1; i < args.size(); ++i) {
    std::string path;
    std::size_t consumed = 0;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      consumed = 2;
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      consumed = 1;
    } else {
      continue;
    }
    args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
               args.begin() + static_cast<std::ptrdiff_t>(i + consumed));
    // File entries go right after the subcommand so later flags win.
    const auto sub = std::find_if(args.begin() + 1, args.end(),
                                  [](const std::string& a) { return a.empty() || a[0] != '-'; });
    const auto injected = config_file_arguments(path);
    const auto pos = sub == args.end() ? args.end() : sub + 1;
    args.insert(pos, injected.begin(), injected.end());
    break;
  }
  return args;
}

}  // namespace

std::vector<std::string> config_file_arguments(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ContractViolation("cannot read config file '" + path.string() + "'");
  std::vector<std::string> out;
  std::string line;
  int line_no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ContractViolation(fmt::format("{}:{}: expected key=value", path.string(), line_no));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ContractViolation(fmt::format("{}:{}: empty key", path.string(), line_no));
    }
    out.push_back("--" + key);
    out.push_back(value);
  }
  return out;
}

int dispatch(const std::vector<std::string>& raw_args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Randomized search heuristics on the integer lattice"};
  app.name(raw_args.empty() ? "zopt" : raw_args.front());
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.fallthrough(false);

  const std::string config_help =
      "flat key=value file; keys are flag names without '--'; flags win";
  std::string unused_config;

  // run
  auto* run = app.add_subcommand("run", "single trial from the all-0 string");
  AlgorithmOptions run_algo;
  run_algo.attach(*run);
  std::size_t run_n = 10;
  std::string run_r = "100";
  std::string run_target;
  std::uint64_t run_seed = 0;
  std::string run_budget = "10^9";
  std::optional<Coord> run_box;
  run->add_option("--n", run_n, "dimension")->capture_default_str();
  run->add_option("--r", run_r, "target is the all-r string")->capture_default_str();
  run->add_option("--target", run_target, "explicit target, e.g. 3,-2,0");
  run->add_option("--seed", run_seed, "stream seed")->capture_default_str();
  run->add_option("--budget", run_budget, "evaluation budget")->capture_default_str();
  run->add_option("--box", run_box, "clamp offspring into [0, box]");
  run->add_option("--config", unused_config, config_help);

  // bench
  auto* bench = app.add_subcommand("bench", "run matrix over n and r, writes trial CSV");
  AlgorithmOptions bench_algo;
  bench_algo.attach(*bench);
  std::string bench_n = "10";
  std::string bench_r;
  std::uint64_t bench_reps = 20;
  std::uint64_t bench_seed = 0;
  std::string bench_budget = "10^9";
  std::string bench_out;
  unsigned bench_workers = 1;
  std::optional<Coord> bench_box;
  bench->add_option("--n", bench_n, "list of n, e.g. 10,100")->capture_default_str();
  bench->add_option("--r", bench_r, "list of r, e.g. 10:150:10,10^3")->required();
  bench->add_option("--reps", bench_reps, "repetitions per (n, r)")->capture_default_str();
  bench->add_option("--seed", bench_seed, "base seed")->capture_default_str();
  bench->add_option("--budget", bench_budget, "evaluation budget")->capture_default_str();
  bench->add_option("--out", bench_out, "trial CSV path (stdout if omitted)");
  bench->add_option("--workers", bench_workers, "concurrent trials")->capture_default_str();
  bench->add_option("--box", bench_box, "clamp offspring into [0, box]");
  bench->add_option("--config", unused_config, config_help);

  // oracle
  auto* oracle = app.add_subcommand("oracle", "exact expected hitting time");
  std::string oracle_algo = "ea_pm1";
  std::size_t oracle_n = 1;
  std::string oracle_d;
  std::uint64_t oracle_max_distance = 0;
  oracle->add_option("--algo", oracle_algo, "ea_pm1 or rls_fixed")
      ->check(CLI::IsMember({"ea_pm1", "rls_fixed"}))
      ->capture_default_str();
  oracle->add_option("--n", oracle_n, "dimension (1..6)")->capture_default_str();
  oracle->add_option("--d", oracle_d, "start distances: one value or n values")->required();
  oracle->add_option("--max-distance", oracle_max_distance,
                     "per-component distance bound (default: max of --d)");
  oracle->add_option("--config", unused_config, config_help);

  // drift
  auto* drift = app.add_subcommand(
      "drift", "drift constant for omega, or a Monte-Carlo drift report with --d");
  AlgorithmOptions drift_algo;
  drift_algo.attach(*drift);
  double drift_omega = 1.2;
  std::string drift_d;
  std::string drift_velocity;
  std::string drift_potential = "exp_omega";
  double drift_c = 0.001;
  double drift_p = 0.01;
  std::uint64_t drift_samples = 100000;
  std::uint64_t drift_seed = 0;
  drift->add_option("--omega", drift_omega, "exp-omega base")->capture_default_str();
  drift->add_option("--d", drift_d, "distance vector of the state");
  drift->add_option("--velocity", drift_velocity, "RLS velocities (integers)");
  drift->add_option("--potential", drift_potential, "exp_omega or rls_cp")
      ->check(CLI::IsMember({"exp_omega", "rls_cp"}))
      ->capture_default_str();
  drift->add_option("--c", drift_c, "rls_cp constant c")->capture_default_str();
  drift->add_option("--p", drift_p, "rls_cp constant p")->capture_default_str();
  drift->add_option("--samples", drift_samples, "one-step samples")->capture_default_str();
  drift->add_option("--seed", drift_seed, "stream seed")->capture_default_str();
  drift->add_option("--config", unused_config, config_help);

  // approx
  auto* approx = app.add_subcommand("approx", "time until f <= ratio * |a|_1");
  AlgorithmOptions approx_algo;
  approx_algo.attach(*approx);
  std::size_t approx_n = 10;
  std::string approx_r = "10^6";
  double approx_ratio = 0.5;
  std::uint64_t approx_reps = 50;
  std::uint64_t approx_seed = 0;
  std::string approx_budget = "10^9";
  approx->add_option("--n", approx_n, "dimension")->capture_default_str();
  approx->add_option("--r", approx_r, "target is the all-r string")->capture_default_str();
  approx->add_option("--ratio", approx_ratio, "approximation ratio in (0, 1]")
      ->capture_default_str();
  approx->add_option("--reps", approx_reps, "independent runs")->capture_default_str();
  approx->add_option("--seed", approx_seed, "base seed")->capture_default_str();
  approx->add_option("--budget", approx_budget, "evaluation budget")->capture_default_str();
  approx->add_option("--config", unused_config, config_help);

  // summarize
  auto* summarize_cmd =
      app.add_subcommand("summarize", "trial CSV to box-plot summary CSV");
  std::string summary_in;
  std::string summary_out;
  summarize_cmd->add_option("--in", summary_in, "trial CSV")->required();
  summarize_cmd->add_option("--out", summary_out, "summary CSV (stdout if omitted)");
  summarize_cmd->add_option("--config", unused_config, config_help);

  try {
    std::vector<std::string> args = with_config_file(raw_args);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();  // program name
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  } catch (const ContractViolation& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    if (*run) {
      const Optimizer optimizer(run_algo.config());
      const RunBudget budget = make_budget(run_budget, run_box);
      const TargetVector target = make_target(run_target, run_n, run_r);
      Rng rng(run_seed);
      const auto start = std::chrono::steady_clock::now();
      const RunOutcome outcome = optimizer.run(target, budget, rng);
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      TrialResult result;
      result.algorithm = optimizer.label();
      result.n = target.dimension();
      result.r = target.linf() > static_cast<Fitness>(std::numeric_limits<Coord>::max())
                     ? std::numeric_limits<Coord>::max()
                     : static_cast<Coord>(target.linf());
      std::tie(result.param1, result.param2) = algorithm_params(optimizer.config());
      result.seed = run_seed;
      result.evaluations = outcome.evaluations;
      result.success = outcome.success;
      result.wall_time_s = elapsed.count();
      out << kTrialCsvHeader << '\n' << format_trial_row(result) << '\n';
      return kExitOk;
    }

    if (*bench) {
      ExperimentConfig config;
      config.algorithm = bench_algo.config();
      for (std::int64_t n : parse_int_list(bench_n)) {
        if (n < 1) throw ContractViolation("every n must be >= 1");
        config.n_values.push_back(static_cast<std::size_t>(n));
      }
      config.r_values = parse_int_list(bench_r);
      config.repetitions = bench_reps;
      config.budget = make_budget(bench_budget, bench_box);
      config.base_seed = bench_seed;
      config.workers = bench_workers;
      config.validate();
      if (bench_out.empty()) {
        out << kTrialCsvHeader << '\n';
        run_matrix(config, [&](const TrialResult& t) {
          out << format_trial_row(t) << '\n';
        });
      } else {
        config.output = bench_out;
        const auto results = run_matrix(config);
        const auto failures = std::count_if(results.begin(), results.end(),
                                            [](const TrialResult& t) { return !t.success; });
        out << "wrote " << results.size() << " trials (" << failures
            << " failed) to " << bench_out << '\n';
      }
      return kExitOk;
    }

    if (*oracle) {
      ChainSpec spec;
      spec.n = oracle_n;
      spec.algorithm = oracle_algo == "rls_fixed" ? ChainAlgorithm::kRlsFixedStep
                                                  : ChainAlgorithm::kEaPm1;
      const auto start = distances_for(oracle_d, oracle_n);
      const std::uint64_t largest = *std::max_element(start.begin(), start.end());
      spec.max_distance = oracle_max_distance ? oracle_max_distance
                                              : std::max<std::uint64_t>(largest, 1);
      if (largest > spec.max_distance) {
        throw ContractViolation("--d exceeds --max-distance");
      }
      out << std::setprecision(10) << exact_hitting_time(spec, start) << '\n';
      return kExitOk;
    }

    if (*drift) {
      if (!(drift_omega > 1.0)) throw ContractViolation("--omega must be > 1");
      if (drift_d.empty()) {
        out << std::setprecision(6) << drift_constant_check(drift_omega) << '\n';
        return kExitOk;
      }
      // State with distances d: target all-1, x_i = 1 - d_i.
      const auto raw = parse_int_list(drift_d);
      std::vector<Coord> x;
      for (std::int64_t d : raw) {
        if (d < 0) throw ContractViolation("distances must be non-negative");
        x.push_back(1 - d);
      }
      const TargetVector target = TargetVector::all_equal(x.size(), 1);
      DriftSnapshot snapshot{x, {}};
      if (!drift_velocity.empty()) {
        for (std::int64_t v : parse_int_list(drift_velocity)) {
          snapshot.velocity.push_back(static_cast<double>(v));
        }
      }
      const PotentialSpec potential =
          drift_potential == "rls_cp"
              ? PotentialSpec::rls_cp({drift_algo.alpha, drift_algo.beta, drift_c, drift_p})
              : PotentialSpec::exp_omega(drift_omega);
      const Optimizer optimizer(drift_algo.config());
      Rng rng(drift_seed);
      const DriftReport r =
          estimate_drift(target, snapshot, optimizer, potential, drift_samples, rng);
      out << std::setprecision(10) << "state " << r.state << '\n'
          << "potential " << potential.describe() << " = " << r.potential << '\n'
          << "drift_mean " << r.mean << '\n'
          << "drift_stderr " << r.standard_error << '\n'
          << "lower_bound " << r.lower_bound << '\n'
          << "samples " << r.samples << '\n'
          << "consistent " << (r.consistent_with_bound() ? "true" : "false") << '\n';
      return kExitOk;
    }

    if (*approx) {
      const Optimizer optimizer(approx_algo.config());
      const RunBudget budget = make_budget(approx_budget, std::nullopt);
      const TargetVector target = make_target("", approx_n, approx_r);
      const Fitness threshold = approximation_threshold(target, approx_ratio);
      std::vector<double> times;
      std::uint64_t failures = 0;
      for (std::uint64_t rep = 0; rep < approx_reps; ++rep) {
        Rng rng(trial_seed(approx_seed, approx_n, target[0], rep));
        const RunOutcome o = time_to_approximation(optimizer, target, approx_ratio, budget, rng);
        times.push_back(static_cast<double>(o.evaluations));
        if (!o.success) ++failures;
      }
      const BoxStats s = box_statistics(times);
      out << std::setprecision(10) << "threshold " << threshold << '\n'
          << "reps " << approx_reps << '\n'
          << "failures " << failures << '\n'
          << "mean_evaluations " << s.mean << '\n'
          << "median_evaluations " << s.median << '\n';
      return kExitOk;
    }

    if (*summarize_cmd) {
      const auto rows = summarize(read_trial_csv(summary_in));
      if (summary_out.empty()) {
        write_summary_csv(out, rows);
      } else {
        std::ofstream file(summary_out);
        if (!file) throw std::runtime_error("cannot open '" + summary_out + "' for writing");
        write_summary_csv(file, rows);
      }
      return kExitOk;
    }
  } catch (const ContractViolation& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitValidation;
}

}  // namespace zopt::cli
