// Benchmark and solver front end for the rotfit library.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rotfit/bench.hpp"
#include "rotfit/dram.hpp"
#include "rotfit/error.hpp"
#include "rotfit/loss.hpp"
#include "rotfit/rmsd.hpp"

namespace {

using namespace rotfit;
namespace fs = std::filesystem;

constexpr int kExitConfig = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitNoConvergence = 4;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::uint64_t seed = 1357;
  int trials = 0;
  int k = 8;
  std::optional<double> sigma;
  std::string sigma_grid;
  int dim = 3;
  std::string out_dir;
  std::string problem = "enp";
  std::string correct = "svd";
  std::vector<std::string> methods;
  unsigned threads = 0;
};

Problem problem_of(const std::string& name) {
  const auto p = parse_problem(name);
  if (!p) throw ConfigError("unknown problem '" + name + "' (expected enp or onp)");
  return *p;
}

std::optional<CorrectionMethod> correction_of(const std::string& name) {
  if (name == "none") return std::nullopt;
  const auto c = parse_correction(name);
  if (!c) throw ConfigError("unknown correction '" + name + "' (expected none, svd or bar-itzhack)");
  return c;
}

std::vector<Method> methods_of(const std::vector<std::string>& names) {
  if (names.empty()) return {std::begin(kAllMethods), std::end(kAllMethods)};
  std::vector<Method> out;
  for (const auto& n : names) {
    const auto m = parse_method(n);
    if (!m) throw ConfigError("unknown method '" + n + "'");
    out.push_back(*m);
  }
  return out;
}

void require_dim3(const Common& c) {
  if (c.dim != 3) throw ConfigError("--dim other than 3 is only supported by 'solve' with --method dram");
}

std::vector<double> sigmas_of(const Common& c, std::vector<double> fallback) {
  if (c.sigma && !c.sigma_grid.empty()) throw ConfigError("use either --sigma or --sigma-grid, not both");
  if (!c.sigma_grid.empty()) return bench::parse_sigma_grid(c.sigma_grid);
  if (c.sigma) return {*c.sigma};
  return fallback;
}

void write_file(const Common& c, const std::string& name, const std::string& content) {
  if (c.out_dir.empty()) return;
  fs::create_directories(c.out_dir);
  const fs::path path = fs::path(c.out_dir) / name;
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << content;
  std::cerr << "wrote " << path.string() << '\n';
}

template <class Fn>
std::string render(Fn&& fn) {
  std::ostringstream s;
  fn(s);
  return s.str();
}

bench::SweepConfig sweep_config(const Common& c, std::vector<double> default_sigmas, int default_trials) {
  require_dim3(c);
  bench::SweepConfig cfg;
  cfg.problem = problem_of(c.problem);
  cfg.sigmas = sigmas_of(c, std::move(default_sigmas));
  cfg.trials_per_sigma = c.trials > 0 ? c.trials : default_trials;
  cfg.k = c.k;
  cfg.seed = c.seed;
  cfg.methods = methods_of(c.methods);
  cfg.correction = correction_of(c.correct);
  cfg.threads = c.threads;
  bench::validate(cfg);
  return cfg;
}

int cmd_table(const Common& c) {
  require_dim3(c);
  bench::TableConfig cfg;
  cfg.trials = c.trials > 0 ? c.trials : cfg.trials;
  cfg.k = c.k;
  cfg.sigma = c.sigma.value_or(cfg.sigma);
  cfg.seed = c.seed;
  cfg.methods = methods_of(c.methods);
  cfg.correction = correction_of(c.correct);
  cfg.threads = c.threads;
  if (cfg.trials < 1 || cfg.k < 4 || !(cfg.sigma > 0.0)) throw ConfigError("need trials >= 1, k >= 4, sigma > 0");
  const auto rows = bench::run_table(cfg);
  bench::write_table_text(std::cout, rows);
  write_file(c, "table.csv", render([&](std::ostream& o) { bench::write_table_csv(o, rows); }));
  write_file(c, "table.json", bench::to_json(rows) + "\n");
  return 0;
}

int cmd_sweep(const Common& c) {
  const auto cfg = sweep_config(c, bench::parse_sigma_grid("0:0.5:0.02"), 500);
  const auto result = bench::run_sweep(cfg);
  bench::write_sweep_csv(std::cout, result.curve);
  const std::string tag(to_string(cfg.problem));
  write_file(c, "sweep_" + tag + ".csv", render([&](std::ostream& o) { bench::write_sweep_csv(o, result.curve); }));
  write_file(c, "trials_" + tag + ".csv", render([&](std::ostream& o) { bench::write_trial_csv(o, result.records); }));
  write_file(c, "sweep_" + tag + ".svg", bench::sweep_svg(result, cfg.problem));
  return 0;
}

int cmd_sorted(const Common& c) {
  const auto cfg = sweep_config(c, {0.1}, 100);
  const auto rows = bench::run_sorted_losses(cfg);
  bench::write_sorted_csv(std::cout, rows);
  const std::string tag(to_string(cfg.problem));
  write_file(c, "sorted_" + tag + ".csv", render([&](std::ostream& o) { bench::write_sorted_csv(o, rows); }));
  write_file(c, "sorted_" + tag + ".svg", bench::sorted_losses_svg(rows));
  return 0;
}

int cmd_time(const Common& c, int reps, int argmin_reps) {
  require_dim3(c);
  bench::TimingConfig cfg;
  cfg.repetitions = reps;
  cfg.argmin_repetitions = argmin_reps;
  cfg.k = c.k;
  cfg.seed = c.seed;
  cfg.sigma = c.sigma.value_or(0.0);
  cfg.methods = methods_of(c.methods);
  if (c.k < 4) throw ConfigError("k must be at least 4");
  const auto rows = bench::time_methods(cfg);
  bench::write_timing_text(std::cout, rows);
  write_file(c, "timing.csv", render([&](std::ostream& o) { bench::write_timing_csv(o, rows); }));
  return 0;
}

int cmd_replay(const Common& c, std::uint64_t trial_id, const std::string& out) {
  require_dim3(c);
  if (c.k < 4) throw ConfigError("k must be at least 4");
  const double sigma = c.sigma.value_or(0.1);
  if (!(sigma >= 0.0)) throw ConfigError("sigma must be non-negative");
  const SyntheticTrial trial = make_trial(c.seed, trial_id, c.k, sigma);
  const auto records = bench::evaluate_trial(trial, problem_of(c.problem), methods_of(c.methods), correction_of(c.correct));
  if (out == "json") {
    std::cout << bench::to_json(records) << '\n';
  } else {
    bench::write_trial_csv(std::cout, records);
  }
  return 0;
}

MatX read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  return read_points_csv(in);
}

nlohmann::json matrix_json(const MatX& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

int cmd_solve(const Common& c, const std::string& cloud_path, const std::string& target_path, const std::string& method_name,
              const std::string& out) {
  const Problem problem = problem_of(c.problem);
  const auto method = parse_method(method_name);
  if (!method) throw ConfigError("unknown method '" + method_name + "'");
  const auto correction = correction_of(c.correct);
  if (out != "json" && out != "csv") throw ConfigError("--out must be json or csv");

  const PointCloud cloud(read_csv_file(cloud_path));
  const MatX target_pts = read_csv_file(target_path);
  if (cloud.dim() != c.dim) throw ConfigError("cloud has " + std::to_string(cloud.dim()) + " columns but --dim is " + std::to_string(c.dim));
  if (c.dim != 3 && *method != Method::kDram) throw ConfigError("--dim other than 3 is only supported with --method dram");

  MatX candidate;
  MatX result;
  bool converged = true;
  double loss = 0.0;
  if (is_dram_class(*method)) {
    DramCandidate cand;
    if (problem == Problem::kEnP) {
      const TargetCloud target(target_pts);
      if (c.dim != 3) cand = solve_dram_nd(cloud, target);
      else if (*method == Method::kDram) cand = solve_dram_enp(cloud, target);
      else if (*method == Method::kQr) cand = solve_qr_map(cloud, target);
      else cand = solve_pinv_map(cloud, target);
    } else {
      const OrthoImage image(target_pts);
      if (c.dim != 3) cand = solve_dram_nd_ortho(cloud, image);
      else if (*method == Method::kDram) cand = solve_dram_onp(cloud, image);
      else if (*method == Method::kQr) cand = solve_qr_map(cloud, image);
      else cand = solve_pinv_map(cloud, image);
    }
    candidate = cand.matrix;
    result = correction ? correct(candidate, *correction).corrected : candidate;
  } else {
    PoseEstimate est;
    if (problem == Problem::kEnP) {
      const TargetCloud target(target_pts);
      switch (*method) {
        case Method::kArgMin: est = solve_argmin_enp(cloud, target); break;
        case Method::kQmin: est = solve_qmin(cloud, target); break;
        case Method::kQmax: est = solve_qmax(cloud, target); break;
        case Method::kSvd: est = solve_svd(cloud, target); break;
        default: est = solve_hhn(cloud, target); break;
      }
    } else {
      const OrthoImage image(target_pts);
      est = *method == Method::kArgMin ? solve_argmin_onp(cloud, image) : solve_onp_adapted(cloud, image, *method);
    }
    converged = est.converged;
    candidate = est.rotation.matrix();
    result = candidate;
  }
  if (problem == Problem::kEnP) {
    loss = enp_loss(result, cloud, TargetCloud(target_pts));
  } else {
    loss = onp_loss(result, cloud, OrthoImage(target_pts));
  }
  const double defect = linalg::orthonormality_defect(result);
  const bool corrected = is_dram_class(*method) && correction.has_value();

  if (out == "json") {
    nlohmann::json j;
    j["problem"] = to_string(problem);
    j["method"] = to_string(*method);
    j["correction"] = corrected ? std::string(to_string(*correction)) : std::string("none");
    j["rotation"] = matrix_json(result);
    if (is_dram_class(*method)) j["candidate"] = matrix_json(candidate);
    j["loss"] = loss;
    j["orthonormality_defect"] = defect;
    j["converged"] = converged;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "method,corrected,loss,defect";
    for (Eigen::Index i = 0; i < result.rows(); ++i)
      for (Eigen::Index k = 0; k < result.cols(); ++k) std::cout << ",m" << i + 1 << k + 1;
    std::cout << '\n' << to_string(*method) << ',' << (corrected ? "true" : "false") << ','
              << bench::format_double(loss) << ',' << bench::format_double(defect);
    for (Eigen::Index i = 0; i < result.rows(); ++i)
      for (Eigen::Index k = 0; k < result.cols(); ++k) std::cout << ',' << bench::format_double(result(i, k));
    std::cout << '\n';
  }
  if (!converged) {
    std::cerr << "error: ArgMin did not converge within the iteration cap\n";
    return kExitNoConvergence;
  }
  return 0;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kSizeMismatch:
      return kExitConfig;
    case ErrorCode::kNoConvergence:
      return kExitNoConvergence;
    default:
      return kExitDegenerate;
  }
}

void add_common(CLI::App* app, Common& c, bool sigma_grid) {
  app->add_option("--seed", c.seed, "Master seed");
  app->add_option("--trials", c.trials, "Trials (per sigma)");
  app->add_option("--k", c.k, "Points per cloud");
  app->add_option("--sigma", c.sigma, "Noise standard deviation");
  if (sigma_grid) app->add_option("--sigma-grid", c.sigma_grid, "Noise grid a:b:step");
  app->add_option("--dim", c.dim, "Point dimension (ND mode, dram only)");
  app->add_option("--out-dir", c.out_dir, "Directory for CSV/JSON/SVG outputs");
  app->add_option("--problem", c.problem, "enp or onp");
  app->add_option("--correct", c.correct, "none, svd or bar-itzhack");
  app->add_option("--methods", c.methods, "Methods to run (default: all)")->delimiter(',');
  app->add_option("--threads", c.threads, "Worker threads (0 = hardware concurrency)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rotation fitting solvers and benchmarks"};
  app.require_subcommand(1);
  Common common;

  auto* table = app.add_subcommand("table", "Method comparison table (exact and noisy, EnP and OnP)");
  add_common(table, common, false);

  auto* sweep = app.add_subcommand("sweep", "Mean loss per method over a noise grid");
  add_common(sweep, common, true);

  auto* sorted = app.add_subcommand("sorted", "Per-trial losses sorted by the optimal loss");
  add_common(sorted, common, false);

  int reps = 20000;
  int argmin_reps = 200;
  auto* time = app.add_subcommand("time", "Per-call timing of every method");
  add_common(time, common, false);
  time->add_option("--reps", reps, "Repetitions for closed-form methods");
  time->add_option("--argmin-reps", argmin_reps, "Repetitions for ArgMin");

  std::uint64_t trial_id = 0;
  std::string out = "csv";
  auto* replay = app.add_subcommand("replay", "Re-run a single trial and print its records");
  add_common(replay, common, false);
  replay->add_option("--trial-id", trial_id, "Trial index within its sigma");
  replay->add_option("--out", out, "csv or json");

  std::string cloud_path, target_path, method = "dram";
  auto* solve = app.add_subcommand("solve", "Solve one pose problem from CSV point files");
  add_common(solve, common, false);
  solve->add_option("--cloud", cloud_path, "Reference points CSV")->required();
  solve->add_option("--target", target_path, "Target (EnP) or image (OnP) points CSV")->required();
  solve->add_option("--method", method, "dram|qr|pinv|qmin|qmax|svd|hhn|argmin");
  solve->add_option("--out", out, "json or csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  if (solve->parsed()) common.correct = solve->count("--correct") ? common.correct : "none";
  if (solve->parsed() && !solve->count("--out")) out = "json";

  try {
    if (table->parsed()) return cmd_table(common);
    if (sweep->parsed()) return cmd_sweep(common);
    if (sorted->parsed()) return cmd_sorted(common);
    if (time->parsed()) return cmd_time(common, reps, argmin_reps);
    if (replay->parsed()) return cmd_replay(common, trial_id, out);
    if (solve->parsed()) return cmd_solve(common, cloud_path, target_path, method, out);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
