#ifndef LDLREC_EXPERIMENTS_HPP
#define LDLREC_EXPERIMENTS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ldlrec/metrics.hpp"
#include "ldlrec/synthetic.hpp"
#include "ldlrec/ttest.hpp"

namespace ldlrec {

enum class ExperimentMode { recovery, predictive, ablation, alpha_sweep, missing_rate_sweep };

const char* experiment_mode_name(ExperimentMode mode);
ExperimentMode experiment_mode_from_name(const std::string& name);

struct ExperimentConfig {
  ExperimentMode mode = ExperimentMode::recovery;

  // Either CSV paths or the synthetic generator; paths win when set.
  std::optional<std::string> features_path;
  std::optional<std::string> labels_path;
  SyntheticSpec synthetic{};

  std::vector<double> missing_rates{0.4, 0.5, 0.6, 0.7, 0.8};
  int repeats = 5;
  double alpha = 0.25;              // non-sweep modes
  std::vector<double> alpha_grid;   // alpha_sweep; empty selects 2^-10 .. 2^10
  double sigma = 1.0;
  double rho = 2.0;
  int knn = 0;                      // 0 selects the number of labels
  std::uint64_t base_seed = 0;      // trial i uses base_seed + i
  bool zscore = false;
  int max_iterations = 100;
  double residual_tolerance = 1e-3;
  double train_fraction = 0.8;
  double ttest_level = 0.05;
};

ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig config_from_json_file(const std::string& path);

// FNV-1a over the canonical serialized form of the semantic fields; the
// provenance anchor for report reproducibility.
std::uint64_t config_hash(const ExperimentConfig& config);

std::vector<double> default_alpha_grid();  // 2^-10 .. 2^10

struct MaskRecord {
  double rate = 0.0;
  int repeat_index = 0;
  std::uint64_t hash = 0;
};

struct ReportCell {
  double rate = 0.0;
  double alpha = 0.0;
  std::string variant;
  // trial value = mean over rows; aggregate = mean/std over the trial values
  std::map<MetricKind, std::vector<double>> trial_means;
  std::map<MetricKind, std::pair<double, double>> aggregate;
};

struct TTestEntry {
  double rate = 0.0;
  std::string variant_a;  // oriented so "significant" means a beats b
  std::string variant_b;
  MetricKind metric = MetricKind::canberra;
  TTestResult result;
};

struct TrialTrace {
  double rate = 0.0;
  double alpha = 0.0;
  std::string variant;
  int repeat_index = 0;
  bool converged = false;
  int iterations_used = 0;
  std::pair<double, double> final_residuals{0.0, 0.0};
  std::vector<std::pair<double, double>> residual_history;
};

struct ExperimentReport {
  std::string mode;
  std::uint64_t config_hash = 0;
  std::uint64_t base_seed = 0;
  std::vector<std::uint64_t> trial_seeds;
  std::string timestamp;  // the one field outside the determinism contract
  std::vector<MaskRecord> masks;
  std::vector<ReportCell> cells;
  std::vector<TTestEntry> ttests;
  std::vector<TrialTrace> traces;
  std::optional<double> selected_alpha;  // alpha_sweep: argmin of mean canberra
};

ExperimentReport run_recovery(const ExperimentConfig& config);
ExperimentReport run_predictive(const ExperimentConfig& config);
ExperimentReport run_ablation(const ExperimentConfig& config);
ExperimentReport run_alpha_sweep(const ExperimentConfig& config);
ExperimentReport run_experiment(const ExperimentConfig& config);  // dispatch on mode

std::string report_to_json(const ExperimentReport& report);

// Flat table, one row per (rate, alpha, variant): mean and std per metric.
std::string report_to_csv(const ExperimentReport& report);

// Loads the configured dataset (CSV pair or synthetic).
Dataset resolve_dataset(const ExperimentConfig& config);

std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t mask_hash(const Eigen::MatrixXd& entries);

}  // namespace ldlrec

#endif
