#ifndef LDLREC_SOLVER_HPP
#define LDLREC_SOLVER_HPP

#include <Eigen/Core>

#include <cstdint>
#include <utility>
#include <vector>

#include "ldlrec/graph.hpp"
#include "ldlrec/hiding.hpp"

namespace ldlrec {

struct SolverConfig {
  double alpha = 0.25;              // trace-norm weight, >= 0
  double rho = 2.0;                 // ADMM penalty, > 0
  int max_iterations = 100;
  double residual_tolerance = 1e-3;
  double pgd_step = 0.0;            // <= 0 selects 1 / (lambda_max(G) + 2 rho)
  bool use_constraint = true;       // false removes the proportionality split (ablation)
  std::uint64_t seed = 0;           // start vector of the power iteration
};

// Primal iterates, multipliers and the per-iteration trace of one solve.
struct SolverState {
  Eigen::MatrixXd D, A, B;
  Eigen::MatrixXd lambda1, lambda2;
  int iteration = 0;
  std::vector<std::pair<double, double>> residual_history;  // (|D-A|_max, |D-B|_max)
  std::vector<double> objective_history;
};

struct RecoveryResult {
  Eigen::MatrixXd recovered;                // final D, rows on the simplex
  Eigen::VectorXd scaling_coefficients;     // k_i of the last proportional update
  Eigen::MatrixXd final_b;                  // final proportional iterate
  bool converged = false;
  int iterations_used = 0;
  std::pair<double, double> final_residuals{0.0, 0.0};
  std::vector<std::pair<double, double>> residual_history;
  std::vector<double> objective_history;
};

// Alternating scheme: one projected gradient step on D, singular value
// thresholding on A, the closed-form proportional update on B, then dual
// ascent on both multipliers. Stops when max(|D-A|_max, |D-B|_max) drops
// below the tolerance or the iteration cap is reached.
RecoveryResult solve(const HiddenView& hidden, const SimilarityGraph& graph,
                     const SolverConfig& config);

// G D + L1 + L2 + rho (D - A) + rho (D - B); the gradient of the smooth part
// of the augmented Lagrangian.
Eigen::MatrixXd gradient_D(const SolverState& state, const SimilarityGraph& graph,
                           const SolverConfig& config);

// Proximal step of (alpha/rho)|A|_* at D + L1/rho: shrink each singular value
// by alpha/rho, flooring at zero. alpha == 0 returns D + L1/rho bit-exactly.
Eigen::MatrixXd update_A(const Eigen::MatrixXd& D, const Eigen::MatrixXd& lambda1,
                         double alpha, double rho);

// Hidden positions get the unconstrained minimizer D + L2/rho; observed
// positions of row i become k_i * observed_i with
//   k_i = sum_k (rho D_ik + L2_ik) observed_ik M_ik / (rho sum_k observed_ik^2 M_ik).
// Returns the updated matrix and the k vector.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> update_B(const Eigen::MatrixXd& D,
                                                     const Eigen::MatrixXd& lambda2,
                                                     const HiddenView& hidden, double rho);

// L1 += rho (D - A); L2 += rho (D - B). Nothing else is touched.
void update_multipliers(SolverState& state, double rho);

// 0.5 tr(D^T G D) + alpha |D|_* with the trace norm as the sum of singular values.
double objective_value(const Eigen::MatrixXd& D, const SimilarityGraph& graph, double alpha);

double nuclear_norm(const Eigen::MatrixXd& M);

// Largest eigenvalue of a symmetric PSD matrix by power iteration
// (fixed iteration count, seeded start vector).
double power_iteration_lambda_max(const Eigen::MatrixXd& S, std::uint64_t seed,
                                  int iterations = 50);

// Per-row comparison of the recovered scaling coefficient k_i against the
// ground-truth coefficient 1 / (observed true mass), with the bound
// eps_i = sigma_i^2 / (observed true mass)^2 where sigma_i is the recovered
// mass left on hidden positions. Diagnostic only: needs the ground truth.
struct BoundRow {
  double k_true = 0.0;
  double k_recovered = 0.0;
  double squared_error = 0.0;
  double sigma = 0.0;    // 1 - sum_k D_ik M_ik of the recovered row
  double epsilon = 0.0;
  bool violated = false;
};

struct BoundReport {
  std::vector<BoundRow> rows;
  std::vector<Eigen::Index> violations;
  double satisfied_fraction = 1.0;
};

BoundReport recovery_bound_diagnostics(const RecoveryResult& result, const HiddenView& hidden,
                                       const Eigen::MatrixXd& ground_truth);

}  // namespace ldlrec

#endif
