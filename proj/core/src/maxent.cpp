#include "ldlrec/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace ldlrec {

namespace {

Eigen::MatrixXd softmax_rows(Eigen::MatrixXd scores) {
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    const double peak = scores.row(i).maxCoeff();  // shift for stability
    scores.row(i) = (scores.row(i).array() - peak).exp();
    scores.row(i) /= scores.row(i).sum();
  }
  return scores;
}

double mean_kl(const Eigen::MatrixXd& targets, const Eigen::MatrixXd& predictions) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < targets.rows(); ++i)
    for (Eigen::Index j = 0; j < targets.cols(); ++j) {
      const double t = targets(i, j);
      if (t > 0.0) acc += t * (std::log(t) - std::log(predictions(i, j)));
    }
  return acc / static_cast<double>(targets.rows());
}

}  // namespace

Eigen::MatrixXd predict(const MaxEntModel& model, const Eigen::MatrixXd& features) {
  if (features.cols() != model.weights.rows())
    throw std::invalid_argument("predict: feature width does not match model");
  Eigen::MatrixXd scores = features * model.weights;
  scores.rowwise() += model.bias.transpose();
  return softmax_rows(std::move(scores));
}

std::pair<double, MaxEntGradient> loss_and_gradient(const MaxEntModel& model,
                                                    const Eigen::MatrixXd& features,
                                                    const Eigen::MatrixXd& targets) {
  if (features.rows() != targets.rows())
    throw std::invalid_argument("loss_and_gradient: row count mismatch");
  if (targets.cols() != model.weights.cols())
    throw std::invalid_argument("loss_and_gradient: label width does not match model");

  const Eigen::MatrixXd predictions = predict(model, features);
  const double loss = mean_kl(targets, predictions);
  if (!std::isfinite(loss)) throw std::runtime_error("non-finite training loss");

  const double n = static_cast<double>(features.rows());
  const Eigen::MatrixXd diff = predictions - targets;
  MaxEntGradient grad;
  grad.weights = features.transpose() * diff / n;
  grad.bias = diff.colwise().mean().transpose();
  return {loss, std::move(grad)};
}

MaxEntModel fit(const Eigen::MatrixXd& features, const Eigen::MatrixXd& targets, int max_iters,
                double tolerance, std::uint64_t /*seed*/) {
  if (features.rows() != targets.rows()) throw std::invalid_argument("fit: row count mismatch");

  MaxEntModel model;
  model.weights = Eigen::MatrixXd::Zero(features.cols(), targets.cols());
  model.bias = Eigen::VectorXd::Zero(targets.cols());

  auto [loss, grad] = loss_and_gradient(model, features, targets);
  model.training_log.emplace_back(0, loss);

  double step = 1.0;
  for (int it = 1; it <= max_iters; ++it) {
    const double grad_norm =
        std::max(grad.weights.cwiseAbs().maxCoeff(), grad.bias.cwiseAbs().maxCoeff());
    if (grad_norm < tolerance) break;

    const double slope = grad.weights.squaredNorm() + grad.bias.squaredNorm();
    step = std::min(step * 2.0, 1e6);

    // Armijo backtracking; accepted steps never increase the loss
    bool accepted = false;
    MaxEntModel trial = model;
    for (int half = 0; half < 60; ++half) {
      trial.weights = model.weights - step * grad.weights;
      trial.bias = model.bias - step * grad.bias;
      const Eigen::MatrixXd predictions = predict(trial, features);
      const double trial_loss = mean_kl(targets, predictions);
      if (std::isfinite(trial_loss) && trial_loss <= loss - 1e-4 * step * slope) {
        accepted = true;
        loss = trial_loss;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no acceptable descent direction left

    model.weights = trial.weights;
    model.bias = trial.bias;
    model.training_log.emplace_back(it, loss);
    grad = loss_and_gradient(model, features, targets).second;
  }

  return model;
}

std::string model_to_json(const MaxEntModel& model) {
  nlohmann::ordered_json j;
  j["d"] = model.weights.rows();
  j["m"] = model.weights.cols();
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(model.weights.size()));
  for (Eigen::Index i = 0; i < model.weights.rows(); ++i)
    for (Eigen::Index jj = 0; jj < model.weights.cols(); ++jj) flat.push_back(model.weights(i, jj));
  j["weights"] = flat;
  j["bias"] = std::vector<double>(model.bias.data(), model.bias.data() + model.bias.size());
  nlohmann::ordered_json training;
  training["iterations"] =
      model.training_log.empty() ? 0 : model.training_log.back().first;
  training["final_loss"] = model.training_log.empty() ? 0.0 : model.training_log.back().second;
  j["training"] = std::move(training);
  return j.dump(2);
}

MaxEntModel model_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const auto d = j.at("d").get<Eigen::Index>();
  const auto m = j.at("m").get<Eigen::Index>();
  const auto flat = j.at("weights").get<std::vector<double>>();
  const auto bias = j.at("bias").get<std::vector<double>>();
  if (flat.size() != static_cast<std::size_t>(d * m) ||
      bias.size() != static_cast<std::size_t>(m))
    throw std::runtime_error("model JSON: inconsistent dimensions");

  MaxEntModel model;
  model.weights.resize(d, m);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index jj = 0; jj < m; ++jj)
      model.weights(i, jj) = flat[static_cast<std::size_t>(i * m + jj)];
  model.bias = Eigen::Map<const Eigen::VectorXd>(bias.data(), m);
  return model;
}

}  // namespace ldlrec
