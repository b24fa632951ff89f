#include "ldlrec/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <nlohmann/json.hpp>

#include "ldlrec/dataset.hpp"
#include "ldlrec/graph.hpp"
#include "ldlrec/hiding.hpp"
#include "ldlrec/maxent.hpp"
#include "ldlrec/solver.hpp"

namespace ldlrec {

namespace {

constexpr int kPredictorMaxIters = 500;
constexpr double kPredictorTolerance = 1e-6;

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

// Oriented so "significant" means the first variant beats the second under
// the one-sided test, regardless of whether the metric is a distance or a
// similarity.
TTestResult test_first_beats_second(MetricKind kind, const std::vector<double>& first,
                                    const std::vector<double>& second, double level) {
  return metric_is_distance(kind) ? paired_ttest_one_sided(first, second, level)
                                  : paired_ttest_one_sided(second, first, level);
}

struct VariantPlan {
  std::string name;
  bool run_solver = true;
  double alpha = 0.0;
  bool use_constraint = true;
};

ReportCell& cell_for(std::vector<ReportCell>& cells, double rate, double alpha,
                     const std::string& variant) {
  for (auto& c : cells)
    if (c.rate == rate && c.alpha == alpha && c.variant == variant) return c;
  cells.push_back(ReportCell{rate, alpha, variant, {}, {}});
  return cells.back();
}

const ReportCell& find_cell(const std::vector<ReportCell>& cells, double rate, double alpha,
                            const std::string& variant) {
  for (const auto& c : cells)
    if (c.rate == rate && c.alpha == alpha && c.variant == variant) return c;
  throw std::logic_error("report cell missing: " + variant);
}

void aggregate_cells(std::vector<ReportCell>& cells) {
  for (auto& cell : cells)
    for (MetricKind kind : kAllMetrics) {
      const auto& trials = cell.trial_means.at(kind);
      const double mean = mean_of(trials);
      cell.aggregate[kind] = {mean, sample_std(trials, mean)};
    }
}

void sort_report(ExperimentReport& report) {
  auto key = [](const ReportCell& c) { return std::tie(c.rate, c.alpha, c.variant); };
  std::stable_sort(report.cells.begin(), report.cells.end(),
                   [&](const ReportCell& a, const ReportCell& b) { return key(a) < key(b); });
  std::stable_sort(report.traces.begin(), report.traces.end(),
                   [](const TrialTrace& a, const TrialTrace& b) {
                     return std::tie(a.rate, a.alpha, a.variant, a.repeat_index) <
                            std::tie(b.rate, b.alpha, b.variant, b.repeat_index);
                   });
}

SolverConfig solver_config_for(const ExperimentConfig& config, const VariantPlan& plan,
                               std::uint64_t trial_seed) {
  SolverConfig cfg;
  cfg.alpha = plan.alpha;
  cfg.rho = config.rho;
  cfg.max_iterations = config.max_iterations;
  cfg.residual_tolerance = config.residual_tolerance;
  cfg.use_constraint = plan.use_constraint;
  cfg.seed = trial_seed;
  return cfg;
}

// Recovery-style engine shared by recovery, ablation, alpha_sweep and
// missing_rate_sweep: per (rate, repeat) one mask is generated and every
// variant consumes it.
ExperimentReport run_recovery_engine(const ExperimentConfig& config,
                                     const std::vector<VariantPlan>& plan,
                                     ExperimentMode mode) {
  if (config.repeats < 1) throw std::invalid_argument("repeats must be >= 1");
  for (double rate : config.missing_rates)
    if (!(rate >= 0.0 && rate < 1.0))
      throw std::invalid_argument("missing rates must be in [0, 1)");

  Dataset data = resolve_dataset(config);
  if (config.zscore) data.features = standardize_columns(data.features);
  const int k = config.knn > 0 ? config.knn : static_cast<int>(data.m());
  const SimilarityGraph graph = build_graph(data.features, k, config.sigma);

  ExperimentReport report;
  report.mode = experiment_mode_name(mode);
  report.config_hash = config_hash(config);
  report.base_seed = config.base_seed;
  report.timestamp = utc_timestamp();

  for (int rep = 0; rep < config.repeats; ++rep)
    report.trial_seeds.push_back(config.base_seed + static_cast<std::uint64_t>(rep));

  for (double rate : config.missing_rates) {
    for (int rep = 0; rep < config.repeats; ++rep) {
      const std::uint64_t seed = report.trial_seeds[static_cast<std::size_t>(rep)];
      const Mask mask = generate_mask(data.labels, rate, seed);
      const HiddenView hidden = hide(data.labels, mask);
      report.masks.push_back({rate, rep, mask_hash(mask.entries)});

      for (const auto& variant : plan) {
        Eigen::MatrixXd recovered;
        if (variant.run_solver) {
          const SolverConfig cfg = solver_config_for(config, variant, seed);
          RecoveryResult result = solve(hidden, graph, cfg);
          recovered = std::move(result.recovered);
          TrialTrace trace;
          trace.rate = rate;
          trace.alpha = variant.alpha;
          trace.variant = variant.name;
          trace.repeat_index = rep;
          trace.converged = result.converged;
          trace.iterations_used = result.iterations_used;
          trace.final_residuals = result.final_residuals;
          trace.residual_history = std::move(result.residual_history);
          report.traces.push_back(std::move(trace));
        } else {
          recovered = hidden.observed;
        }

        const MetricReport metrics = evaluate(recovered, data.labels);
        ReportCell& cell = cell_for(report.cells, rate, variant.alpha, variant.name);
        for (MetricKind kind : kAllMetrics)
          cell.trial_means[kind].push_back(metrics[kind].mean);
      }
    }
  }

  aggregate_cells(report.cells);

  // full vs every other named variant, per rate and metric, over the trial
  // means; grid points of a sweep share a name and are not tested against
  // each other
  if (config.repeats >= 2 && plan.size() > 1) {
    for (double rate : config.missing_rates)
      for (std::size_t v = 1; v < plan.size(); ++v) {
        if (plan[v].name == plan[0].name) continue;
        for (MetricKind kind : kAllMetrics) {
          const auto& full = find_cell(report.cells, rate, plan[0].alpha, plan[0].name);
          const auto& other = find_cell(report.cells, rate, plan[v].alpha, plan[v].name);
          TTestEntry entry;
          entry.rate = rate;
          entry.variant_a = plan[0].name;
          entry.variant_b = plan[v].name;
          entry.metric = kind;
          entry.result = test_first_beats_second(kind, full.trial_means.at(kind),
                                                 other.trial_means.at(kind), config.ttest_level);
          report.ttests.push_back(std::move(entry));
        }
      }
  }

  sort_report(report);
  return report;
}

}  // namespace

const char* experiment_mode_name(ExperimentMode mode) {
  switch (mode) {
    case ExperimentMode::recovery: return "recovery";
    case ExperimentMode::predictive: return "predictive";
    case ExperimentMode::ablation: return "ablation";
    case ExperimentMode::alpha_sweep: return "alpha_sweep";
    case ExperimentMode::missing_rate_sweep: return "missing_rate_sweep";
  }
  throw std::logic_error("unknown experiment mode");
}

ExperimentMode experiment_mode_from_name(const std::string& name) {
  for (ExperimentMode mode :
       {ExperimentMode::recovery, ExperimentMode::predictive, ExperimentMode::ablation,
        ExperimentMode::alpha_sweep, ExperimentMode::missing_rate_sweep})
    if (name == experiment_mode_name(mode)) return mode;
  throw std::invalid_argument("unknown experiment mode: " + name);
}

std::vector<double> default_alpha_grid() {
  std::vector<double> grid;
  for (int e = -10; e <= 10; ++e) grid.push_back(std::ldexp(1.0, e));
  return grid;
}

std::uint64_t fnv1a64(const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t mask_hash(const Eigen::MatrixXd& entries) {
  std::string bits;
  bits.reserve(static_cast<std::size_t>(entries.size()));
  for (Eigen::Index i = 0; i < entries.rows(); ++i)
    for (Eigen::Index j = 0; j < entries.cols(); ++j)
      bits.push_back(entries(i, j) != 0.0 ? '1' : '0');
  return fnv1a64(bits.data(), bits.size());
}

ExperimentConfig config_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  ExperimentConfig config;

  if (j.contains("mode")) config.mode = experiment_mode_from_name(j.at("mode").get<std::string>());

  if (j.contains("dataset")) {
    const auto& ds = j.at("dataset");
    if (ds.contains("features") || ds.contains("labels")) {
      config.features_path = ds.at("features").get<std::string>();
      config.labels_path = ds.at("labels").get<std::string>();
    }
    if (ds.contains("synthetic")) {
      const auto& s = ds.at("synthetic");
      if (s.contains("n")) config.synthetic.n = s.at("n").get<Eigen::Index>();
      if (s.contains("d")) config.synthetic.d = s.at("d").get<Eigen::Index>();
      if (s.contains("m")) config.synthetic.m = s.at("m").get<Eigen::Index>();
      if (s.contains("rank")) config.synthetic.rank = s.at("rank").get<int>();
      if (s.contains("noise_feature"))
        config.synthetic.noise_feature = s.at("noise_feature").get<double>();
      if (s.contains("noise_label"))
        config.synthetic.noise_label = s.at("noise_label").get<double>();
      if (s.contains("seed")) config.synthetic.seed = s.at("seed").get<std::uint64_t>();
    }
  }

  if (j.contains("missing_rates"))
    config.missing_rates = j.at("missing_rates").get<std::vector<double>>();
  if (j.contains("repeats")) config.repeats = j.at("repeats").get<int>();

  if (j.contains("alpha")) {
    const auto& a = j.at("alpha");
    if (a.is_number()) {
      config.alpha = a.get<double>();
    } else if (a.is_array()) {
      config.alpha_grid = a.get<std::vector<double>>();
    } else if (a.is_string() && a.get<std::string>() == "grid") {
      config.alpha_grid = default_alpha_grid();
    } else {
      throw std::invalid_argument("config: alpha must be a number, an array, or \"grid\"");
    }
  }
  if (j.contains("alpha_grid"))
    config.alpha_grid = j.at("alpha_grid").get<std::vector<double>>();

  if (j.contains("sigma")) config.sigma = j.at("sigma").get<double>();
  if (j.contains("rho")) config.rho = j.at("rho").get<double>();
  if (j.contains("knn")) config.knn = j.at("knn").get<int>();
  if (j.contains("base_seed")) config.base_seed = j.at("base_seed").get<std::uint64_t>();
  if (j.contains("zscore")) config.zscore = j.at("zscore").get<bool>();
  if (j.contains("max_iterations")) config.max_iterations = j.at("max_iterations").get<int>();
  if (j.contains("residual_tolerance"))
    config.residual_tolerance = j.at("residual_tolerance").get<double>();
  if (j.contains("train_fraction")) config.train_fraction = j.at("train_fraction").get<double>();
  if (j.contains("ttest_level")) config.ttest_level = j.at("ttest_level").get<double>();

  return config;
}

ExperimentConfig config_from_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return config_from_json(buffer.str());
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  nlohmann::ordered_json j;
  j["mode"] = experiment_mode_name(config.mode);
  if (config.features_path && config.labels_path) {
    j["features"] = *config.features_path;
    j["labels"] = *config.labels_path;
  } else {
    j["synthetic"] = {{"n", config.synthetic.n},
                      {"d", config.synthetic.d},
                      {"m", config.synthetic.m},
                      {"rank", config.synthetic.rank},
                      {"noise_feature", config.synthetic.noise_feature},
                      {"noise_label", config.synthetic.noise_label},
                      {"seed", config.synthetic.seed}};
  }
  j["missing_rates"] = config.missing_rates;
  j["repeats"] = config.repeats;
  j["alpha"] = config.alpha;
  j["alpha_grid"] = config.alpha_grid;
  j["sigma"] = config.sigma;
  j["rho"] = config.rho;
  j["knn"] = config.knn;
  j["base_seed"] = config.base_seed;
  j["zscore"] = config.zscore;
  j["max_iterations"] = config.max_iterations;
  j["residual_tolerance"] = config.residual_tolerance;
  j["train_fraction"] = config.train_fraction;
  j["ttest_level"] = config.ttest_level;
  const std::string canonical = j.dump();
  return fnv1a64(canonical.data(), canonical.size());
}

Dataset resolve_dataset(const ExperimentConfig& config) {
  if (config.features_path && config.labels_path) {
    LoadReport report;
    Dataset data = load_dataset(*config.features_path, *config.labels_path, &report);
    for (Eigen::Index row : report.renormalized_rows)
      std::cerr << "note: label row " << row + 1 << " renormalized on load\n";
    return data;
  }
  return generate_synthetic(config.synthetic);
}

ExperimentReport run_recovery(const ExperimentConfig& config) {
  const std::vector<VariantPlan> plan = {
      {"full", true, config.alpha, true},
      {"baseline", false, config.alpha, true},
  };
  const ExperimentMode mode = config.mode == ExperimentMode::missing_rate_sweep
                                  ? ExperimentMode::missing_rate_sweep
                                  : ExperimentMode::recovery;
  return run_recovery_engine(config, plan, mode);
}

ExperimentReport run_ablation(const ExperimentConfig& config) {
  const std::vector<VariantPlan> plan = {
      {"full", true, config.alpha, true},
      {"without_constraint", true, config.alpha, false},
      {"without_trace_norm", true, 0.0, true},
  };
  return run_recovery_engine(config, plan, ExperimentMode::ablation);
}

ExperimentReport run_alpha_sweep(const ExperimentConfig& config) {
  std::vector<double> grid = config.alpha_grid.empty() ? default_alpha_grid() : config.alpha_grid;
  if (grid.empty()) throw std::invalid_argument("alpha grid is empty");

  std::vector<VariantPlan> plan;
  for (double alpha : grid) plan.push_back({"full", true, alpha, true});

  ExperimentReport report = run_recovery_engine(config, plan, ExperimentMode::alpha_sweep);

  // selection rule: the grid point with the lowest canberra mean, averaged
  // over the configured missing rates; ties go to the smaller alpha
  double best_alpha = grid.front();
  double best_score = std::numeric_limits<double>::infinity();
  for (double alpha : grid) {
    double score = 0.0;
    int count = 0;
    for (const auto& cell : report.cells)
      if (cell.alpha == alpha && cell.variant == "full") {
        score += cell.aggregate.at(MetricKind::canberra).first;
        ++count;
      }
    score /= static_cast<double>(count);
    if (score < best_score) {
      best_score = score;
      best_alpha = alpha;
    }
  }
  report.selected_alpha = best_alpha;
  return report;
}

ExperimentReport run_predictive(const ExperimentConfig& config) {
  if (config.repeats < 1) throw std::invalid_argument("repeats must be >= 1");

  Dataset data = resolve_dataset(config);
  if (config.zscore) data.features = standardize_columns(data.features);

  ExperimentReport report;
  report.mode = experiment_mode_name(ExperimentMode::predictive);
  report.config_hash = config_hash(config);
  report.base_seed = config.base_seed;
  report.timestamp = utc_timestamp();
  for (int rep = 0; rep < config.repeats; ++rep)
    report.trial_seeds.push_back(config.base_seed + static_cast<std::uint64_t>(rep));

  const std::vector<VariantPlan> plan = {
      {"full", true, config.alpha, true},
      {"baseline", false, config.alpha, true},
  };

  for (double rate : config.missing_rates) {
    for (int rep = 0; rep < config.repeats; ++rep) {
      const std::uint64_t seed = report.trial_seeds[static_cast<std::size_t>(rep)];
      const auto [train, test] = train_test_split(data, config.train_fraction, seed);

      const Mask mask = generate_mask(train.labels, rate, seed);
      const HiddenView hidden = hide(train.labels, mask);
      report.masks.push_back({rate, rep, mask_hash(mask.entries)});

      const int k = config.knn > 0 ? config.knn : static_cast<int>(train.m());
      const SimilarityGraph graph = build_graph(train.features, k, config.sigma);

      for (const auto& variant : plan) {
        Eigen::MatrixXd recovered;
        if (variant.run_solver) {
          const SolverConfig cfg = solver_config_for(config, variant, seed);
          RecoveryResult result = solve(hidden, graph, cfg);
          recovered = std::move(result.recovered);
          TrialTrace trace;
          trace.rate = rate;
          trace.alpha = variant.alpha;
          trace.variant = variant.name;
          trace.repeat_index = rep;
          trace.converged = result.converged;
          trace.iterations_used = result.iterations_used;
          trace.final_residuals = result.final_residuals;
          trace.residual_history = std::move(result.residual_history);
          report.traces.push_back(std::move(trace));
        } else {
          recovered = hidden.observed;
        }

        const MaxEntModel model =
            fit(train.features, recovered, kPredictorMaxIters, kPredictorTolerance, seed);
        const Eigen::MatrixXd predictions = predict(model, test.features);
        const MetricReport metrics = evaluate(predictions, test.labels);

        ReportCell& cell = cell_for(report.cells, rate, variant.alpha, variant.name);
        for (MetricKind kind : kAllMetrics)
          cell.trial_means[kind].push_back(metrics[kind].mean);
      }
    }
  }

  aggregate_cells(report.cells);

  if (config.repeats >= 2) {
    for (double rate : config.missing_rates)
      for (std::size_t v = 1; v < plan.size(); ++v)
        for (MetricKind kind : kAllMetrics) {
          const auto& full = find_cell(report.cells, rate, plan[0].alpha, plan[0].name);
          const auto& other = find_cell(report.cells, rate, plan[v].alpha, plan[v].name);
          TTestEntry entry;
          entry.rate = rate;
          entry.variant_a = plan[0].name;
          entry.variant_b = plan[v].name;
          entry.metric = kind;
          entry.result = test_first_beats_second(kind, full.trial_means.at(kind),
                                                 other.trial_means.at(kind), config.ttest_level);
          report.ttests.push_back(std::move(entry));
        }
  }

  sort_report(report);
  return report;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  switch (config.mode) {
    case ExperimentMode::recovery:
    case ExperimentMode::missing_rate_sweep:
      return run_recovery(config);
    case ExperimentMode::predictive:
      return run_predictive(config);
    case ExperimentMode::ablation:
      return run_ablation(config);
    case ExperimentMode::alpha_sweep:
      return run_alpha_sweep(config);
  }
  throw std::logic_error("unknown experiment mode");
}

std::string report_to_json(const ExperimentReport& report) {
  nlohmann::ordered_json j;
  j["mode"] = report.mode;

  nlohmann::ordered_json provenance;
  provenance["config_hash"] = hex64(report.config_hash);
  provenance["base_seed"] = report.base_seed;
  provenance["trial_seeds"] = report.trial_seeds;
  provenance["timestamp"] = report.timestamp;
  j["provenance"] = std::move(provenance);

  nlohmann::ordered_json masks = nlohmann::ordered_json::array();
  for (const auto& m : report.masks) {
    nlohmann::ordered_json entry;
    entry["rate"] = m.rate;
    entry["repeat"] = m.repeat_index;
    entry["hash"] = hex64(m.hash);
    masks.push_back(std::move(entry));
  }
  j["masks"] = std::move(masks);

  nlohmann::ordered_json results = nlohmann::ordered_json::array();
  for (const auto& cell : report.cells) {
    nlohmann::ordered_json entry;
    entry["rate"] = cell.rate;
    entry["alpha"] = cell.alpha;
    entry["variant"] = cell.variant;
    nlohmann::ordered_json metrics;
    for (MetricKind kind : kAllMetrics) {
      nlohmann::ordered_json stats;
      stats["mean"] = cell.aggregate.at(kind).first;
      stats["std"] = cell.aggregate.at(kind).second;
      stats["trials"] = cell.trial_means.at(kind);
      metrics[metric_name(kind)] = std::move(stats);
    }
    entry["metrics"] = std::move(metrics);
    results.push_back(std::move(entry));
  }
  j["results"] = std::move(results);

  nlohmann::ordered_json ttests = nlohmann::ordered_json::array();
  for (const auto& t : report.ttests) {
    nlohmann::ordered_json entry;
    entry["rate"] = t.rate;
    entry["metric"] = metric_name(t.metric);
    entry["winner_if_significant"] = t.variant_a;
    entry["against"] = t.variant_b;
    entry["t_stat"] = std::isfinite(t.result.t_stat)
                          ? nlohmann::ordered_json(t.result.t_stat)
                          : nlohmann::ordered_json(t.result.t_stat > 0 ? "inf" : "-inf");
    entry["p_value"] = t.result.p_value;
    entry["significant"] = t.result.significant;
    ttests.push_back(std::move(entry));
  }
  j["ttests"] = std::move(ttests);

  nlohmann::ordered_json traces = nlohmann::ordered_json::array();
  for (const auto& t : report.traces) {
    nlohmann::ordered_json entry;
    entry["rate"] = t.rate;
    entry["alpha"] = t.alpha;
    entry["variant"] = t.variant;
    entry["repeat"] = t.repeat_index;
    entry["converged"] = t.converged;
    entry["iterations"] = t.iterations_used;
    entry["final_residual_d_a"] = t.final_residuals.first;
    entry["final_residual_d_b"] = t.final_residuals.second;
    nlohmann::ordered_json history = nlohmann::ordered_json::array();
    for (const auto& [ra, rb] : t.residual_history) history.push_back({ra, rb});
    entry["residual_history"] = std::move(history);
    traces.push_back(std::move(entry));
  }
  j["traces"] = std::move(traces);

  if (report.selected_alpha) j["selected_alpha"] = *report.selected_alpha;

  return j.dump(2);
}

std::string report_to_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "rate,alpha,variant";
  for (MetricKind kind : kAllMetrics)
    out << ',' << metric_name(kind) << "_mean," << metric_name(kind) << "_std";
  out << '\n';
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
  };
  for (const auto& cell : report.cells) {
    put(cell.rate);
    out << ',';
    put(cell.alpha);
    out << ',' << cell.variant;
    for (MetricKind kind : kAllMetrics) {
      out << ',';
      put(cell.aggregate.at(kind).first);
      out << ',';
      put(cell.aggregate.at(kind).second);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace ldlrec
