#include "rotfit/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <map>
#include <mutex>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>
#include <thread>

#include "rotfit/dram.hpp"
#include "rotfit/error.hpp"
#include "rotfit/loss.hpp"
#include "rotfit/rmsd.hpp"

namespace rotfit::bench {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ns(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
}

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  const auto mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

void parallel_for(size_t count, unsigned threads, const std::function<void(size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<size_t>(threads, std::max<size_t>(count, 1)));
  if (threads <= 1) {
    for (size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

double angle_to(const MatX& rotation, const Quaternion& reference) {
  return quat_angle_diff(rot_to_quat(Mat3(rotation)), reference);
}

DramCandidate solve_candidate(const SyntheticTrial& trial, Problem problem, Method method) {
  if (problem == Problem::kEnP) {
    switch (method) {
      case Method::kDram: return solve_dram_enp(trial.cloud, trial.target);
      case Method::kQr: return solve_qr_map(trial.cloud, trial.target);
      default: return solve_pinv_map(trial.cloud, trial.target);
    }
  }
  switch (method) {
    case Method::kDram: return solve_dram_onp(trial.cloud, trial.image);
    case Method::kQr: return solve_qr_map(trial.cloud, trial.image);
    default: return solve_pinv_map(trial.cloud, trial.image);
  }
}

PoseEstimate solve_rmsd(const SyntheticTrial& trial, Problem problem, Method method) {
  if (problem == Problem::kOnP) {
    if (method == Method::kArgMin) return solve_argmin_onp(trial.cloud, trial.image);
    return solve_onp_adapted(trial.cloud, trial.image, method);
  }
  switch (method) {
    case Method::kArgMin: return solve_argmin_enp(trial.cloud, trial.target);
    case Method::kQmin: return solve_qmin(trial.cloud, trial.target);
    case Method::kQmax: return solve_qmax(trial.cloud, trial.target);
    case Method::kSvd: return solve_svd(trial.cloud, trial.target);
    default: return solve_hhn(trial.cloud, trial.target);
  }
}

double problem_loss(const SyntheticTrial& trial, Problem problem, const MatX& m) {
  return problem == Problem::kEnP ? enp_loss(m, trial.cloud, trial.target) : onp_loss(m, trial.cloud, trial.image);
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string series_name(Method m, bool corrected) {
  std::string name(to_string(m));
  if (is_dram_class(m)) name += corrected ? " (corrected)" : " (bare)";
  return name;
}

}  // namespace

void validate(const SweepConfig& config) {
  if (config.sigmas.empty()) throw Error(ErrorCode::kInvalidArgument, "at least one sigma is required");
  for (size_t i = 0; i < config.sigmas.size(); ++i) {
    if (!(config.sigmas[i] >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "sigmas must be non-negative");
    if (i > 0 && config.sigmas[i] < config.sigmas[i - 1]) {
      throw Error(ErrorCode::kInvalidArgument, "sigmas must be ascending");
    }
  }
  if (config.trials_per_sigma < 1) throw Error(ErrorCode::kInvalidArgument, "trials must be at least 1");
  if (config.k < 4) throw Error(ErrorCode::kInvalidArgument, "k must be at least 4");
  if (config.methods.empty()) throw Error(ErrorCode::kInvalidArgument, "at least one method is required");
}

std::vector<double> parse_sigma_grid(const std::string& text) {
  double a = 0.0, b = 0.0, step = 0.0;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0.0) || b < a || a < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "sigma grid must look like a:b:step with 0 <= a <= b, step > 0");
  }
  std::vector<double> grid;
  const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9));
  for (long i = 0; i <= count; ++i) grid.push_back(a + static_cast<double>(i) * step);
  return grid;
}

std::vector<TrialRecord> evaluate_trial(const SyntheticTrial& trial, Problem problem, const std::vector<Method>& methods,
                                        std::optional<CorrectionMethod> correction) {
  std::vector<TrialRecord> out;
  TrialRecord base;
  base.trial_id = trial.trial_id;
  base.problem = problem;
  base.sigma = trial.sigma;
  base.k = static_cast<int>(trial.cloud.size());
  base.n = static_cast<int>(trial.cloud.dim());
  base.seed = trial.seed;

  auto start = Clock::now();
  const PoseEstimate gold = solve_rmsd(trial, problem, Method::kArgMin);
  TrialRecord anchor = base;
  anchor.method = Method::kArgMin;
  anchor.loss = gold.loss;
  anchor.defect = gold.orthonormality_defect;
  anchor.wall_time_ns = elapsed_ns(start);
  out.push_back(anchor);
  const Quaternion gold_q = rot_to_quat(gold.rotation);

  for (Method m : methods) {
    if (m == Method::kArgMin) continue;
    TrialRecord rec = base;
    rec.method = m;
    try {
      if (!is_dram_class(m)) {
        start = Clock::now();
        const PoseEstimate est = solve_rmsd(trial, problem, m);
        rec.wall_time_ns = elapsed_ns(start);
        rec.loss = est.loss;
        rec.defect = est.orthonormality_defect;
        rec.angle_deg = quat_angle_diff(rot_to_quat(est.rotation), gold_q);
        out.push_back(rec);
        continue;
      }
      start = Clock::now();
      const DramCandidate cand = solve_candidate(trial, problem, m);
      rec.wall_time_ns = elapsed_ns(start);
      rec.loss = problem_loss(trial, problem, cand.matrix);
      rec.defect = linalg::orthonormality_defect(cand.matrix);
      rec.angle_deg = angle_to(correct_svd(cand.matrix).corrected, gold_q);
      out.push_back(rec);
      if (correction) {
        start = Clock::now();
        const DramCandidate again = solve_candidate(trial, problem, m);
        const CorrectionReport fixed = correct(again.matrix, *correction);
        TrialRecord corr = base;
        corr.method = m;
        corr.corrected = true;
        corr.wall_time_ns = elapsed_ns(start);
        corr.loss = problem_loss(trial, problem, fixed.corrected);
        corr.defect = linalg::orthonormality_defect(fixed.corrected);
        corr.angle_deg = angle_to(fixed.corrected, gold_q);
        out.push_back(corr);
      }
    } catch (const Error&) {
      // Degenerate draws (for instance a reflected cross-covariance for HHN)
      // produce no record for that method.
    }
  }
  return out;
}

std::vector<TrialRecord> run_trials(const SweepConfig& config) {
  validate(config);
  const size_t per_sigma = static_cast<size_t>(config.trials_per_sigma);
  const size_t total = config.sigmas.size() * per_sigma;
  std::vector<std::vector<TrialRecord>> slots(total);
  parallel_for(total, config.threads, [&](size_t idx) {
    const double sigma = config.sigmas[idx / per_sigma];
    const auto trial_id = static_cast<std::uint64_t>(idx % per_sigma);
    const SyntheticTrial trial = make_trial(config.seed, trial_id, config.k, sigma);
    slots[idx] = evaluate_trial(trial, config.problem, config.methods, config.correction);
  });
  std::vector<TrialRecord> records;
  for (auto& s : slots) records.insert(records.end(), s.begin(), s.end());
  return records;
}

std::vector<TableRow> run_table(const TableConfig& config) {
  std::vector<TableRow> rows;
  for (Problem problem : {Problem::kEnP, Problem::kOnP}) {
    for (double sigma : {0.0, config.sigma}) {
      SweepConfig sc;
      sc.problem = problem;
      sc.sigmas = {sigma};
      sc.trials_per_sigma = config.trials;
      sc.k = config.k;
      sc.seed = config.seed;
      sc.methods = config.methods;
      sc.correction = config.correction;
      sc.threads = config.threads;
      const auto records = run_trials(sc);

      std::vector<std::pair<Method, bool>> keys;
      std::map<std::pair<Method, bool>, std::vector<const TrialRecord*>> groups;
      for (const auto& r : records) {
        const auto key = std::make_pair(r.method, r.corrected);
        if (!groups.count(key)) keys.push_back(key);
        groups[key].push_back(&r);
      }
      for (const auto& key : keys) {
        const auto& g = groups[key];
        std::vector<double> loss, angle, defect;
        TableRow row;
        row.problem = problem;
        row.sigma = sigma;
        row.method = key.first;
        row.corrected = key.second;
        row.trials = static_cast<int>(g.size());
        for (const auto* r : g) {
          loss.push_back(r->loss);
          angle.push_back(r->angle_deg);
          defect.push_back(r->defect);
          row.total_time_ns += r->wall_time_ns;
        }
        row.median_loss = median(loss);
        row.median_angle_deg = median(angle);
        row.median_defect = median(defect);
        rows.push_back(row);
      }
    }
  }
  return rows;
}

SweepResult run_sweep(const SweepConfig& config) {
  SweepResult result;
  result.records = run_trials(config);
  std::vector<std::tuple<Method, bool, double>> keys;
  std::map<std::tuple<Method, bool, double>, std::vector<const TrialRecord*>> groups;
  for (const auto& r : result.records) {
    const auto key = std::make_tuple(r.method, r.corrected, r.sigma);
    if (!groups.count(key)) keys.push_back(key);
    groups[key].push_back(&r);
  }
  std::stable_sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
    if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
    return std::get<2>(a) < std::get<2>(b);
  });
  for (const auto& key : keys) {
    const auto& g = groups[key];
    double sum = 0.0;
    std::vector<double> angles;
    for (const auto* r : g) {
      sum += r->loss;
      angles.push_back(r->angle_deg);
    }
    result.curve.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key),
                            sum / static_cast<double>(g.size()), median(angles)});
  }
  return result;
}

std::vector<SortedLossRow> run_sorted_losses(const SweepConfig& config) {
  validate(config);
  const double sigma = config.sigmas.front();
  const CorrectionMethod method = config.correction.value_or(CorrectionMethod::kSvd);
  std::vector<SortedLossRow> rows(static_cast<size_t>(config.trials_per_sigma));
  parallel_for(rows.size(), config.threads, [&](size_t i) {
    const SyntheticTrial trial = make_trial(config.seed, i, config.k, sigma);
    SortedLossRow& row = rows[i];
    row.trial_id = i;
    const MatX init = trial.rotation.matrix();
    const DramCandidate bare = solve_candidate(trial, config.problem, Method::kDram);
    const CorrectionReport fixed = correct(bare.matrix, method);
    const PoseEstimate gold = solve_rmsd(trial, config.problem, Method::kArgMin);
    row.loss_init = problem_loss(trial, config.problem, init);
    row.loss_bare = problem_loss(trial, config.problem, bare.matrix);
    row.loss_corrected = problem_loss(trial, config.problem, fixed.corrected);
    row.loss_optimal = gold.loss;
    row.scaled_init_minus_optimal = 20.0 * (row.loss_init - row.loss_optimal);
    row.scaled_bare_minus_optimal = 20.0 * (row.loss_bare - row.loss_optimal);
    row.scaled_corrected_minus_optimal = 20.0 * (row.loss_corrected - row.loss_optimal);
  });
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SortedLossRow& a, const SortedLossRow& b) { return a.loss_optimal < b.loss_optimal; });
  return rows;
}

std::vector<TimingRow> time_methods(const TimingConfig& config) {
  if (config.repetitions < 10 || config.argmin_repetitions < 10) {
    throw Error(ErrorCode::kInvalidArgument, "timing needs at least 10 repetitions");
  }
  std::vector<TimingRow> rows;
  volatile double sink = 0.0;
  for (Problem problem : config.problems) {
    const SyntheticTrial trial = make_trial(config.seed, 0, config.k, config.sigma);
    const size_t first = rows.size();
    for (Method m : config.methods) {
      std::function<double()> call;
      if (is_dram_class(m)) {
        call = [&, m] { return solve_candidate(trial, problem, m).matrix(0, 0); };
      } else {
        call = [&, m] { return solve_rmsd(trial, problem, m).rotation.matrix()(0, 0); };
      }
      const int reps = m == Method::kArgMin ? config.argmin_repetitions : config.repetitions;
      const int warmup = reps / 10;
      const int batch = std::max(1, (reps - warmup) / 5);
      for (int i = 0; i < warmup; ++i) sink = sink + call();
      std::vector<double> per_call;
      for (int b = 0; b < 5; ++b) {
        const auto start = Clock::now();
        for (int i = 0; i < batch; ++i) sink = sink + call();
        per_call.push_back(static_cast<double>(elapsed_ns(start)) / batch);
      }
      rows.push_back({problem, m, median(per_call), 0.0});
    }
    double pinv = 0.0;
    for (size_t i = first; i < rows.size(); ++i)
      if (rows[i].method == Method::kPinv) pinv = rows[i].ns_per_call;
    for (size_t i = first; i < rows.size(); ++i) rows[i].relative_to_pinv = pinv > 0.0 ? rows[i].ns_per_call / pinv : 0.0;
  }
  return rows;
}

// ---------------------------------------------------------------------------

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_trial_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << kTrialCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.trial_id << ',' << to_string(r.method) << ',' << (r.corrected ? "true" : "false") << ','
        << format_double(r.sigma) << ',' << r.k << ',' << r.n << ',' << format_double(r.loss) << ','
        << format_double(r.angle_deg) << ',' << format_double(r.defect) << ',' << r.wall_time_ns << ',' << r.seed
        << '\n';
  }
}

void write_table_csv(std::ostream& out, const std::vector<TableRow>& rows) {
  out << "problem,sigma,method,corrected,trials,median_loss,median_angle_deg,median_defect,total_time_ns\n";
  for (const auto& r : rows) {
    out << to_string(r.problem) << ',' << format_double(r.sigma) << ',' << to_string(r.method) << ','
        << (r.corrected ? "true" : "false") << ',' << r.trials << ',' << format_double(r.median_loss) << ','
        << format_double(r.median_angle_deg) << ',' << format_double(r.median_defect) << ',' << r.total_time_ns
        << '\n';
  }
}

void write_table_text(std::ostream& out, const std::vector<TableRow>& rows) {
  char line[200];
  Problem problem = Problem::kOnP;
  double sigma = -1.0;
  for (const auto& r : rows) {
    if (r.problem != problem || r.sigma != sigma) {
      problem = r.problem;
      sigma = r.sigma;
      out << '\n'
          << (problem == Problem::kEnP ? "EnP (3D:3D)" : "OnP (3D:2D ortho)") << ", "
          << (sigma == 0.0 ? std::string("exact data") : "sigma = " + format_double(sigma)) << '\n';
      std::snprintf(line, sizeof line, "  %-8s %-10s %14s %12s %12s %12s\n", "method", "variant", "median loss",
                    "angle (deg)", "defect", "time (ms)");
      out << line;
    }
    std::snprintf(line, sizeof line, "  %-8s %-10s %14.6g %12.6g %12.3g %12.3f\n", std::string(to_string(r.method)).c_str(),
                  is_dram_class(r.method) ? (r.corrected ? "corrected" : "bare") : "-", r.median_loss,
                  r.median_angle_deg, r.median_defect, static_cast<double>(r.total_time_ns) * 1e-6);
    out << line;
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& curve) {
  out << "method,corrected,sigma,mean_loss,median_angle_deg\n";
  for (const auto& p : curve) {
    out << to_string(p.method) << ',' << (p.corrected ? "true" : "false") << ',' << format_double(p.sigma) << ','
        << format_double(p.mean_loss) << ',' << format_double(p.median_angle_deg) << '\n';
  }
}

void write_sorted_csv(std::ostream& out, const std::vector<SortedLossRow>& rows) {
  out << "rank,trial_id,loss_init,loss_bare,loss_corrected,loss_optimal,"
         "scaled_init_minus_optimal,scaled_bare_minus_optimal,scaled_corrected_minus_optimal\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out << i << ',' << r.trial_id << ',' << format_double(r.loss_init) << ',' << format_double(r.loss_bare) << ','
        << format_double(r.loss_corrected) << ',' << format_double(r.loss_optimal) << ','
        << format_double(r.scaled_init_minus_optimal) << ',' << format_double(r.scaled_bare_minus_optimal) << ','
        << format_double(r.scaled_corrected_minus_optimal) << '\n';
  }
}

void write_timing_csv(std::ostream& out, const std::vector<TimingRow>& rows) {
  out << "problem,method,ns_per_call,relative_to_pinv\n";
  for (const auto& r : rows) {
    out << to_string(r.problem) << ',' << to_string(r.method) << ',' << format_double(r.ns_per_call) << ','
        << format_double(r.relative_to_pinv) << '\n';
  }
}

void write_timing_text(std::ostream& out, const std::vector<TimingRow>& rows) {
  char line[160];
  std::snprintf(line, sizeof line, "%-8s %-8s %14s %12s\n", "problem", "method", "ns/call", "vs pinv");
  out << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-8s %-8s %14.1f %12.2f\n", std::string(to_string(r.problem)).c_str(),
                  std::string(to_string(r.method)).c_str(), r.ns_per_call, r.relative_to_pinv);
    out << line;
  }
}

std::string to_json(const std::vector<TrialRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) {
    arr.push_back({{"trial_id", r.trial_id},
                   {"problem", to_string(r.problem)},
                   {"method", to_string(r.method)},
                   {"corrected", r.corrected},
                   {"sigma", r.sigma},
                   {"k", r.k},
                   {"n", r.n},
                   {"loss", r.loss},
                   {"angle_deg", r.angle_deg},
                   {"defect", r.defect},
                   {"wall_time_ns", r.wall_time_ns},
                   {"seed", r.seed}});
  }
  return arr.dump(2);
}

std::string to_json(const std::vector<TableRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"problem", to_string(r.problem)},
                   {"sigma", r.sigma},
                   {"method", to_string(r.method)},
                   {"corrected", r.corrected},
                   {"trials", r.trials},
                   {"median_loss", r.median_loss},
                   {"median_angle_deg", r.median_angle_deg},
                   {"median_defect", r.median_defect},
                   {"total_time_ns", r.total_time_ns}});
  }
  return arr.dump(2);
}

std::string svg_line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                           const std::vector<Series>& series) {
  constexpr double width = 760, height = 480, left = 80, right = 200, top = 40, bottom = 60;
  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : series) {
    for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  const double pw = width - left - right, ph = height - top - bottom;
  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return top + ph - (y - ymin) / (ymax - ymin) * ph; };

  std::ostringstream svg;
  svg << std::setprecision(6);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << left + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape_xml(title)
      << "</text>\n";
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 5.0;
    const double yv = ymin + (ymax - ymin) * i / 5.0;
    svg << "<line x1=\"" << px(xv) << "\" y1=\"" << top + ph << "\" x2=\"" << px(xv) << "\" y2=\"" << top + ph + 5
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << px(xv) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">" << xv << "</text>\n";
    svg << "<line x1=\"" << left - 5 << "\" y1=\"" << py(yv) << "\" x2=\"" << left << "\" y2=\"" << py(yv)
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << left - 8 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << yv << "</text>\n";
  }
  svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\">"
      << escape_xml(x_label) << "</text>\n";
  svg << "<text transform=\"translate(18," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape_xml(y_label) << "</text>\n";
  for (size_t s = 0; s < series.size(); ++s) {
    const char* color = palette[s % std::size(palette)];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < series[s].x.size() && i < series[s].y.size(); ++i) {
      if (!std::isfinite(series[s].y[i])) continue;
      svg << px(series[s].x[i]) << ',' << py(series[s].y[i]) << ' ';
    }
    svg << "\"/>\n";
    const double ly = top + 14 + 18 * static_cast<double>(s);
    svg << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 36 << "\" y2=\"" << ly
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << left + pw + 42 << "\" y=\"" << ly + 4 << "\">" << escape_xml(series[s].name)
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string sweep_svg(const SweepResult& result, Problem problem) {
  std::vector<Series> series;
  std::map<std::pair<Method, bool>, size_t> index;
  for (const auto& p : result.curve) {
    const auto key = std::make_pair(p.method, p.corrected);
    if (!index.count(key)) {
      index[key] = series.size();
      series.push_back({series_name(p.method, p.corrected), {}, {}});
    }
    auto& s = series[index[key]];
    s.x.push_back(p.sigma);
    s.y.push_back(p.mean_loss);
  }
  const std::string title = problem == Problem::kEnP ? "EnP loss vs noise" : "OnP loss vs noise";
  return svg_line_chart(title, "sigma", "mean loss", series);
}

std::string sorted_losses_svg(const std::vector<SortedLossRow>& rows) {
  Series init{"R_init", {}, {}}, bare{"bare DRaM", {}, {}}, fixed{"corrected DRaM", {}, {}},
      gold{"ArgMin", {}, {}}, d_bare{"20x (bare - ArgMin)", {}, {}}, d_fixed{"20x (corrected - ArgMin)", {}, {}};
  for (size_t i = 0; i < rows.size(); ++i) {
    const double x = static_cast<double>(i);
    for (auto* s : {&init, &bare, &fixed, &gold, &d_bare, &d_fixed}) s->x.push_back(x);
    init.y.push_back(rows[i].loss_init);
    bare.y.push_back(rows[i].loss_bare);
    fixed.y.push_back(rows[i].loss_corrected);
    gold.y.push_back(rows[i].loss_optimal);
    d_bare.y.push_back(rows[i].scaled_bare_minus_optimal);
    d_fixed.y.push_back(rows[i].scaled_corrected_minus_optimal);
  }
  return svg_line_chart("Losses sorted by the optimal loss", "trial (sorted)", "loss",
                        {init, bare, fixed, gold, d_bare, d_fixed});
}

}  // namespace rotfit::bench
