#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rotfit/correct.hpp"
#include "rotfit/pose.hpp"
#include "rotfit/simulate.hpp"

namespace rotfit::bench {

/// One solver run on one synthetic trial.
struct TrialRecord {
  std::uint64_t trial_id = 0;
  Problem problem = Problem::kEnP;
  Method method = Method::kArgMin;
  bool corrected = false;
  double sigma = 0.0;
  int k = 0;
  int n = 3;
  double loss = 0.0;
  /// Angle to the ArgMin rotation of the same trial. Bare DRaM-class
  /// candidates are measured through their nearest rotation.
  double angle_deg = 0.0;
  double defect = 0.0;
  std::int64_t wall_time_ns = 0;
  std::uint64_t seed = 0;
};

struct SweepConfig {
  Problem problem = Problem::kEnP;
  std::vector<double> sigmas{0.1};
  int trials_per_sigma = 500;
  int k = 8;
  std::uint64_t seed = 1357;
  std::vector<Method> methods{std::begin(kAllMethods), std::end(kAllMethods)};
  /// Correction applied to DRaM-class candidates; nullopt keeps only the
  /// bare candidates.
  std::optional<CorrectionMethod> correction = CorrectionMethod::kSvd;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;
};

/// Throws Error(kInvalidArgument) on an invalid configuration.
void validate(const SweepConfig& config);

/// Parse "a:b:step" into an ascending grid including both ends.
std::vector<double> parse_sigma_grid(const std::string& text);

/// All records for one trial: the ArgMin anchor first, then every other
/// requested method in order. DRaM-class methods give a bare record and,
/// when a correction is configured, a corrected record.
std::vector<TrialRecord> evaluate_trial(const SyntheticTrial& trial, Problem problem, const std::vector<Method>& methods,
                                        std::optional<CorrectionMethod> correction);

/// Trials are generated per (sigma, trial index) on their own substreams and
/// evaluated on a worker pool; the output order depends only on the config.
std::vector<TrialRecord> run_trials(const SweepConfig& config);

// ---------------------------------------------------------------------------
// Method comparison table.

struct TableRow {
  Problem problem = Problem::kEnP;
  double sigma = 0.0;
  Method method = Method::kArgMin;
  bool corrected = false;
  int trials = 0;
  double median_loss = 0.0;
  double median_angle_deg = 0.0;
  double median_defect = 0.0;
  std::int64_t total_time_ns = 0;
};

struct TableConfig {
  int trials = 200;
  int k = 8;
  double sigma = 0.1;
  std::uint64_t seed = 1357;
  std::vector<Method> methods{std::begin(kAllMethods), std::end(kAllMethods)};
  std::optional<CorrectionMethod> correction = CorrectionMethod::kSvd;
  unsigned threads = 0;
};

/// Every method x {exact, sigma} x {EnP, OnP}, aggregated by median.
std::vector<TableRow> run_table(const TableConfig& config);

// ---------------------------------------------------------------------------
// Noise sweep.

struct SweepPoint {
  Method method = Method::kArgMin;
  bool corrected = false;
  double sigma = 0.0;
  double mean_loss = 0.0;
  double median_angle_deg = 0.0;
};

struct SweepResult {
  std::vector<TrialRecord> records;
  std::vector<SweepPoint> curve;
};

SweepResult run_sweep(const SweepConfig& config);

// ---------------------------------------------------------------------------
// Sorted loss traces.

struct SortedLossRow {
  std::uint64_t trial_id = 0;
  double loss_init = 0.0;
  double loss_bare = 0.0;
  double loss_corrected = 0.0;
  double loss_optimal = 0.0;
  // 20x scaled differences against the optimal loss.
  double scaled_init_minus_optimal = 0.0;
  double scaled_bare_minus_optimal = 0.0;
  double scaled_corrected_minus_optimal = 0.0;
};

/// Uses the first sigma of the config; rows sorted by the optimal loss.
std::vector<SortedLossRow> run_sorted_losses(const SweepConfig& config);

// ---------------------------------------------------------------------------
// Timing.

struct TimingRow {
  Problem problem = Problem::kEnP;
  Method method = Method::kArgMin;
  double ns_per_call = 0.0;
  double relative_to_pinv = 0.0;
};

struct TimingConfig {
  int repetitions = 20000;
  int argmin_repetitions = 200;
  int k = 8;
  std::uint64_t seed = 1357;
  double sigma = 0.0;
  std::vector<Problem> problems{Problem::kEnP, Problem::kOnP};
  std::vector<Method> methods{std::begin(kAllMethods), std::end(kAllMethods)};
};

/// Median of five batches after discarding the first 10% of repetitions.
std::vector<TimingRow> time_methods(const TimingConfig& config);

// ---------------------------------------------------------------------------
// Output.

inline constexpr const char* kTrialCsvHeader = "trial_id,method,corrected,sigma,k,n,loss,angle_deg,defect,wall_time_ns,seed";

std::string format_double(double value);

void write_trial_csv(std::ostream& out, const std::vector<TrialRecord>& records);
void write_table_csv(std::ostream& out, const std::vector<TableRow>& rows);
void write_table_text(std::ostream& out, const std::vector<TableRow>& rows);
void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& curve);
void write_sorted_csv(std::ostream& out, const std::vector<SortedLossRow>& rows);
void write_timing_csv(std::ostream& out, const std::vector<TimingRow>& rows);
void write_timing_text(std::ostream& out, const std::vector<TimingRow>& rows);
std::string to_json(const std::vector<TrialRecord>& records);
std::string to_json(const std::vector<TableRow>& rows);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Standalone SVG line chart with axes, ticks and a legend.
std::string svg_line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                           const std::vector<Series>& series);

std::string sweep_svg(const SweepResult& result, Problem problem);
std::string sorted_losses_svg(const std::vector<SortedLossRow>& rows);

}  // namespace rotfit::bench
