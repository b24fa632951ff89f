// Command-line front end: hidden-label simulation, graph construction,
// recovery, evaluation, prediction, significance testing and the
// configuration-driven experiment harness.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ldlrec/csv.hpp"
#include "ldlrec/dataset.hpp"
#include "ldlrec/experiments.hpp"
#include "ldlrec/graph.hpp"
#include "ldlrec/hiding.hpp"
#include "ldlrec/maxent.hpp"
#include "ldlrec/metrics.hpp"
#include "ldlrec/solver.hpp"
#include "ldlrec/ttest.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << text << '\n';
}

std::vector<double> read_score_file(const std::string& path) {
  const Eigen::MatrixXd m = ldlrec::read_csv_matrix(path);
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) values.push_back(m(i, j));
  return values;
}

ldlrec::Mask mask_from_file(const std::string& path) {
  ldlrec::Mask mask;
  mask.entries = ldlrec::read_csv_matrix(path);
  for (Eigen::Index i = 0; i < mask.entries.rows(); ++i)
    for (Eigen::Index j = 0; j < mask.entries.cols(); ++j) {
      const double v = mask.entries(i, j);
      if (v != 0.0 && v != 1.0)
        throw std::runtime_error(path + ": mask entries must be 0 or 1");
    }
  const double total = static_cast<double>(mask.entries.size());
  mask.missing_rate = 1.0 - mask.entries.sum() / total;
  return mask;
}

void write_trace_csv(const std::string& path, const ldlrec::RecoveryResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << "iteration,residual_d_a,residual_d_b,objective\n";
  char buf[64];
  for (std::size_t t = 0; t < result.residual_history.size(); ++t) {
    out << t + 1;
    std::snprintf(buf, sizeof(buf), ",%.17g", result.residual_history[t].first);
    out << buf;
    std::snprintf(buf, sizeof(buf), ",%.17g", result.residual_history[t].second);
    out << buf;
    std::snprintf(buf, sizeof(buf), ",%.17g", result.objective_history[t]);
    out << buf << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Label distribution recovery from hidden-label observations"};
  app.require_subcommand(1);

  // hide: labels -> renormalized observation + mask
  auto* hide_cmd = app.add_subcommand("hide", "Simulate hidden labels on a label matrix");
  std::string hide_labels, hide_out = "observed.csv", hide_mask_out = "mask.csv";
  double hide_rate = 0.5;
  std::uint64_t hide_seed = 0;
  hide_cmd->add_option("labels", hide_labels, "label matrix CSV")->required();
  hide_cmd->add_option("--missing-rate", hide_rate, "fraction of entries to hide");
  hide_cmd->add_option("--seed", hide_seed, "RNG seed");
  hide_cmd->add_option("--out-observed", hide_out, "output CSV for the observed matrix");
  hide_cmd->add_option("--out-mask", hide_mask_out, "output CSV for the mask");

  // graph: features -> similarity + laplacian dumps
  auto* graph_cmd = app.add_subcommand("graph", "Build the KNN similarity graph");
  std::string graph_features, graph_sim_out = "similarity.csv", graph_lap_out = "laplacian.csv";
  int graph_k = 0;
  double graph_sigma = 1.0;
  bool graph_zscore = false;
  graph_cmd->add_option("features", graph_features, "feature matrix CSV")->required();
  graph_cmd->add_option("--k", graph_k, "neighbor count (required; labels are not available "
                                        "here to derive a default)");
  graph_cmd->add_option("--sigma", graph_sigma, "Gaussian bandwidth");
  graph_cmd->add_flag("--zscore", graph_zscore, "standardize feature columns first");
  graph_cmd->add_option("--out-similarity", graph_sim_out, "output CSV for A");
  graph_cmd->add_option("--out-laplacian", graph_lap_out, "output CSV for G");

  // recover: observed + mask + features -> recovered matrix
  auto* recover_cmd = app.add_subcommand("recover", "Recover the full label distribution matrix");
  std::string rec_features, rec_observed, rec_mask, rec_out = "recovered.csv", rec_trace;
  double rec_alpha = 0.25, rec_rho = 2.0, rec_sigma = 1.0, rec_tol = 1e-3;
  int rec_k = 0, rec_max_iters = 100;
  std::uint64_t rec_seed = 0;
  bool rec_zscore = false, rec_no_constraint = false;
  recover_cmd->add_option("--features", rec_features, "feature matrix CSV")->required();
  recover_cmd->add_option("--observed", rec_observed, "observed (renormalized) matrix CSV")
      ->required();
  recover_cmd->add_option("--mask", rec_mask, "mask CSV of 0/1")->required();
  recover_cmd->add_option("--alpha", rec_alpha, "trace-norm weight");
  recover_cmd->add_option("--rho", rec_rho, "ADMM penalty");
  recover_cmd->add_option("--sigma", rec_sigma, "Gaussian bandwidth");
  recover_cmd->add_option("--k", rec_k, "neighbor count (default: number of labels)");
  recover_cmd->add_option("--max-iterations", rec_max_iters, "iteration cap");
  recover_cmd->add_option("--tolerance", rec_tol, "residual stopping tolerance");
  recover_cmd->add_option("--seed", rec_seed, "RNG seed (power iteration start)");
  recover_cmd->add_flag("--zscore", rec_zscore, "standardize feature columns first");
  recover_cmd->add_flag("--no-constraint", rec_no_constraint,
                        "drop the proportionality constraint (ablation)");
  recover_cmd->add_option("--out", rec_out, "output CSV for the recovered matrix");
  recover_cmd->add_option("--trace", rec_trace, "optional CSV with per-iteration residuals");

  // evaluate: recovered vs truth -> metric report JSON
  auto* eval_cmd = app.add_subcommand("evaluate", "Compare two label distribution matrices");
  std::string eval_recovered, eval_truth, eval_out;
  bool eval_no_per_row = false;
  eval_cmd->add_option("recovered", eval_recovered, "recovered matrix CSV")->required();
  eval_cmd->add_option("truth", eval_truth, "ground-truth matrix CSV")->required();
  eval_cmd->add_option("--out", eval_out, "output path (default: stdout)");
  eval_cmd->add_flag("--no-per-row", eval_no_per_row, "omit per-row values from the JSON");

  // predict: train and/or apply the softmax-linear model
  auto* predict_cmd = app.add_subcommand("predict", "Train or apply the label predictor");
  std::string pred_train_features, pred_train_targets, pred_model_in, pred_model_out;
  std::string pred_features, pred_out = "predictions.csv";
  int pred_max_iters = 500;
  double pred_tol = 1e-6;
  std::uint64_t pred_seed = 0;
  predict_cmd->add_option("--train-features", pred_train_features, "training feature CSV");
  predict_cmd->add_option("--train-targets", pred_train_targets, "training target CSV");
  predict_cmd->add_option("--model-out", pred_model_out, "path to save the trained model JSON");
  predict_cmd->add_option("--model", pred_model_in, "path to a previously saved model JSON");
  predict_cmd->add_option("--features", pred_features, "features to predict on");
  predict_cmd->add_option("--out", pred_out, "output CSV for predictions");
  predict_cmd->add_option("--max-iterations", pred_max_iters, "training iteration cap");
  predict_cmd->add_option("--tolerance", pred_tol, "gradient stopping tolerance");
  predict_cmd->add_option("--seed", pred_seed, "RNG seed (interface uniformity)");

  // ttest: two score files -> decision JSON
  auto* ttest_cmd = app.add_subcommand("ttest", "One-sided paired t-test (H1: first < second)");
  std::string ttest_a, ttest_b, ttest_out;
  double ttest_level = 0.05;
  ttest_cmd->add_option("scores_a", ttest_a, "score file (one value per line)")->required();
  ttest_cmd->add_option("scores_b", ttest_b, "score file (one value per line)")->required();
  ttest_cmd->add_option("--level", ttest_level, "significance level");
  ttest_cmd->add_option("--out", ttest_out, "output path (default: stdout)");

  // experiment: config JSON -> report JSON (+ optional CSV table)
  auto* exp_cmd = app.add_subcommand("experiment", "Run a configuration-driven experiment");
  std::string exp_config, exp_out, exp_csv;
  exp_cmd->add_option("config", exp_config, "experiment config JSON")->required();
  exp_cmd->add_option("--out", exp_out, "report JSON path (default: stdout)");
  exp_cmd->add_option("--csv", exp_csv, "optional flat CSV table path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n' << app.help() << '\n';
    return kExitUsage;
  }

  try {
    if (hide_cmd->parsed()) {
      const Eigen::MatrixXd labels = ldlrec::read_csv_matrix(hide_labels);
      const ldlrec::Mask mask = ldlrec::generate_mask(labels, hide_rate, hide_seed);
      const ldlrec::HiddenView view = ldlrec::hide(labels, mask);
      ldlrec::write_csv_matrix(hide_out, view.observed);
      ldlrec::write_csv_binary_matrix(hide_mask_out, mask.entries);
      for (Eigen::Index row : mask.repaired_rows)
        std::cerr << "note: row " << row + 1 << " repaired to keep one observed positive entry\n";
    } else if (graph_cmd->parsed()) {
      Eigen::MatrixXd features = ldlrec::read_csv_matrix(graph_features);
      if (graph_zscore) features = ldlrec::standardize_columns(features);
      if (graph_k <= 0)
        throw std::invalid_argument("graph: --k must be given a positive neighbor count");
      const ldlrec::SimilarityGraph graph = ldlrec::build_graph(features, graph_k, graph_sigma);
      ldlrec::write_csv_matrix(graph_sim_out, graph.similarity);
      ldlrec::write_csv_matrix(graph_lap_out, graph.laplacian);
    } else if (recover_cmd->parsed()) {
      Eigen::MatrixXd features = ldlrec::read_csv_matrix(rec_features);
      if (rec_zscore) features = ldlrec::standardize_columns(features);
      ldlrec::HiddenView hidden;
      hidden.observed = ldlrec::read_csv_matrix(rec_observed);
      hidden.mask = mask_from_file(rec_mask);
      const int k = rec_k > 0 ? rec_k : static_cast<int>(hidden.observed.cols());
      const ldlrec::SimilarityGraph graph = ldlrec::build_graph(features, k, rec_sigma);
      ldlrec::SolverConfig config;
      config.alpha = rec_alpha;
      config.rho = rec_rho;
      config.max_iterations = rec_max_iters;
      config.residual_tolerance = rec_tol;
      config.use_constraint = !rec_no_constraint;
      config.seed = rec_seed;
      const ldlrec::RecoveryResult result = ldlrec::solve(hidden, graph, config);
      ldlrec::write_csv_matrix(rec_out, result.recovered);
      if (!rec_trace.empty()) write_trace_csv(rec_trace, result);
      std::cerr << "recover: " << (result.converged ? "converged" : "iteration cap") << " after "
                << result.iterations_used << " iterations, residuals ("
                << result.final_residuals.first << ", " << result.final_residuals.second << ")\n";
    } else if (eval_cmd->parsed()) {
      const Eigen::MatrixXd recovered = ldlrec::read_csv_matrix(eval_recovered);
      const Eigen::MatrixXd truth = ldlrec::read_csv_matrix(eval_truth);
      const ldlrec::MetricReport report = ldlrec::evaluate(recovered, truth);
      write_text(eval_out, ldlrec::metric_report_to_json(report, !eval_no_per_row));
    } else if (predict_cmd->parsed()) {
      ldlrec::MaxEntModel model;
      bool have_model = false;
      if (!pred_train_features.empty() || !pred_train_targets.empty()) {
        if (pred_train_features.empty() || pred_train_targets.empty())
          throw std::invalid_argument(
              "predict: --train-features and --train-targets go together");
        const Eigen::MatrixXd x = ldlrec::read_csv_matrix(pred_train_features);
        const Eigen::MatrixXd t = ldlrec::read_csv_matrix(pred_train_targets);
        model = ldlrec::fit(x, t, pred_max_iters, pred_tol, pred_seed);
        have_model = true;
        if (!pred_model_out.empty()) write_text(pred_model_out, ldlrec::model_to_json(model));
      } else if (!pred_model_in.empty()) {
        std::ifstream in(pred_model_in, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open model: " + pred_model_in);
        std::ostringstream buffer;
        buffer << in.rdbuf();
        model = ldlrec::model_from_json(buffer.str());
        have_model = true;
      }
      if (!have_model)
        throw std::invalid_argument("predict: give either --train-features/--train-targets or --model");
      if (!pred_features.empty()) {
        const Eigen::MatrixXd x = ldlrec::read_csv_matrix(pred_features);
        ldlrec::write_csv_matrix(pred_out, ldlrec::predict(model, x));
      }
    } else if (ttest_cmd->parsed()) {
      const std::vector<double> a = read_score_file(ttest_a);
      const std::vector<double> b = read_score_file(ttest_b);
      const ldlrec::TTestResult result = ldlrec::paired_ttest_one_sided(a, b, ttest_level);
      std::ostringstream json;
      json << "{\n  \"t_stat\": ";
      if (std::isfinite(result.t_stat))
        json << result.t_stat;
      else
        json << '"' << (result.t_stat > 0 ? "inf" : "-inf") << '"';
      json << ",\n  \"p_value\": " << result.p_value
           << ",\n  \"significant\": " << (result.significant ? "true" : "false")
           << ",\n  \"level\": " << ttest_level << ",\n  \"n\": " << a.size() << "\n}";
      write_text(ttest_out, json.str());
    } else if (exp_cmd->parsed()) {
      const ldlrec::ExperimentConfig config = ldlrec::config_from_json_file(exp_config);
      const ldlrec::ExperimentReport report = ldlrec::run_experiment(config);
      write_text(exp_out, ldlrec::report_to_json(report));
      if (!exp_csv.empty()) {
        std::ofstream out(exp_csv, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open file for writing: " + exp_csv);
        out << ldlrec::report_to_csv(report);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }

  return kExitOk;
}
