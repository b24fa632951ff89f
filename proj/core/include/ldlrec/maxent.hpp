#ifndef LDLREC_MAXENT_HPP
#define LDLREC_MAXENT_HPP

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ldlrec {

// Softmax-linear label distribution model: row i of the prediction is
// softmax(x_i W + b). Zero initialization, so the untrained model predicts
// the uniform distribution.
struct MaxEntModel {
  Eigen::MatrixXd weights;  // d x m
  Eigen::VectorXd bias;     // m
  std::vector<std::pair<int, double>> training_log;  // (iteration, loss)
};

struct MaxEntGradient {
  Eigen::MatrixXd weights;  // d x m
  Eigen::VectorXd bias;     // m
};

// Mean KL(target_i || prediction_i) and its gradient:
// dW = X^T (P - T) / n, db = colmean(P - T).
std::pair<double, MaxEntGradient> loss_and_gradient(const MaxEntModel& model,
                                                    const Eigen::MatrixXd& features,
                                                    const Eigen::MatrixXd& targets);

// Gradient descent with backtracking line search on the mean KL loss.
// Stops when the gradient max-norm drops below `tolerance` or after
// `max_iters` accepted steps. The seed is unused (zero init) and kept for
// interface uniformity with the other fitting entry points.
MaxEntModel fit(const Eigen::MatrixXd& features, const Eigen::MatrixXd& targets,
                int max_iters, double tolerance, std::uint64_t seed = 0);

Eigen::MatrixXd predict(const MaxEntModel& model, const Eigen::MatrixXd& features);

std::string model_to_json(const MaxEntModel& model);
MaxEntModel model_from_json(const std::string& text);

}  // namespace ldlrec

#endif
