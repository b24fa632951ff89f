#include "ldlrec/solver.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ldlrec/rng.hpp"
#include "ldlrec/simplex.hpp"

namespace ldlrec {

namespace {

Eigen::MatrixXd svt(const Eigen::MatrixXd& M, double tau) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd s = svd.singularValues();
  for (Eigen::Index i = 0; i < s.size(); ++i) s[i] = std::max(s[i] - tau, 0.0);
  return svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
}

bool all_finite(const Eigen::MatrixXd& M) { return M.allFinite(); }

void check_finite(const Eigen::MatrixXd& M, const char* what, int iteration) {
  if (!all_finite(M)) {
    std::ostringstream msg;
    msg << "non-finite value in " << what << " at iteration " << iteration;
    throw std::runtime_error(msg.str());
  }
}

Eigen::VectorXd scaling_coefficients_from(const Eigen::MatrixXd& D,
                                          const Eigen::MatrixXd& lambda2,
                                          const HiddenView& hidden, double rho) {
  const auto& observed = hidden.observed;
  const auto& mask = hidden.mask.entries;
  Eigen::VectorXd k(D.rows());
  for (Eigen::Index i = 0; i < D.rows(); ++i) {
    double num = 0.0;
    double den = 0.0;
    for (Eigen::Index j = 0; j < D.cols(); ++j) {
      if (mask(i, j) != 0.0) {
        num += (rho * D(i, j) + lambda2(i, j)) * observed(i, j);
        den += observed(i, j) * observed(i, j);
      }
    }
    den *= rho;
    if (den <= 0.0) {
      std::ostringstream msg;
      msg << "row " << i + 1 << " has zero observed mass; hidden view invariant violated";
      throw std::runtime_error(msg.str());
    }
    k[i] = num / den;
  }
  return k;
}

}  // namespace

Eigen::MatrixXd gradient_D(const SolverState& state, const SimilarityGraph& graph,
                           const SolverConfig& config) {
  if (state.D.rows() != graph.size())
    throw std::invalid_argument("gradient_D: state does not match graph size");
  return graph.laplacian * state.D + state.lambda1 + state.lambda2 +
         config.rho * (state.D - state.A) + config.rho * (state.D - state.B);
}

Eigen::MatrixXd update_A(const Eigen::MatrixXd& D, const Eigen::MatrixXd& lambda1, double alpha,
                         double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  Eigen::MatrixXd target = D + lambda1 / rho;
  if (alpha == 0.0) return target;
  if (!all_finite(target)) throw std::runtime_error("update_A: non-finite input");
  return svt(target, alpha / rho);
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> update_B(const Eigen::MatrixXd& D,
                                                     const Eigen::MatrixXd& lambda2,
                                                     const HiddenView& hidden, double rho) {
  const auto& observed = hidden.observed;
  const auto& mask = hidden.mask.entries;
  if (D.rows() != observed.rows() || D.cols() != observed.cols())
    throw std::invalid_argument("update_B: shape mismatch with hidden view");

  Eigen::VectorXd k = scaling_coefficients_from(D, lambda2, hidden, rho);
  Eigen::MatrixXd B(D.rows(), D.cols());
  for (Eigen::Index i = 0; i < D.rows(); ++i)
    for (Eigen::Index j = 0; j < D.cols(); ++j)
      B(i, j) = mask(i, j) != 0.0 ? k[i] * observed(i, j) : D(i, j) + lambda2(i, j) / rho;
  return {std::move(B), std::move(k)};
}

void update_multipliers(SolverState& state, double rho) {
  state.lambda1 += rho * (state.D - state.A);
  state.lambda2 += rho * (state.D - state.B);
}

double nuclear_norm(const Eigen::MatrixXd& M) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(M).singularValues().sum();
}

double objective_value(const Eigen::MatrixXd& D, const SimilarityGraph& graph, double alpha) {
  return 0.5 * smoothness_energy(graph, D) + alpha * nuclear_norm(D);
}

double power_iteration_lambda_max(const Eigen::MatrixXd& S, std::uint64_t seed, int iterations) {
  std::mt19937_64 gen(seed);
  Eigen::VectorXd v(S.rows());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = 2.0 * rng::uniform01(gen) - 1.0;
  double norm = v.norm();
  if (norm == 0.0) {
    v.setOnes();
    norm = v.norm();
  }
  v /= norm;
  for (int t = 0; t < iterations; ++t) {
    Eigen::VectorXd w = S * v;
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;  // v landed in the null space; S has no larger action
    v = w / wn;
  }
  return v.dot(S * v);
}

RecoveryResult solve(const HiddenView& hidden, const SimilarityGraph& graph,
                     const SolverConfig& config) {
  validate_hidden_view(hidden);
  const Eigen::Index n = hidden.observed.rows();
  const Eigen::Index m = hidden.observed.cols();
  if (graph.size() != n)
    throw std::invalid_argument("solve: graph size does not match hidden view rows");
  if (!(config.rho > 0.0)) throw std::invalid_argument("rho must be positive");
  if (config.alpha < 0.0) throw std::invalid_argument("alpha must be nonnegative");
  if (!(config.residual_tolerance > 0.0))
    throw std::invalid_argument("residual_tolerance must be positive");

  double step = config.pgd_step;
  if (step <= 0.0) {
    // smooth part has Hessian G + 2 rho I
    const double lambda_max = power_iteration_lambda_max(graph.laplacian, config.seed);
    step = 1.0 / (lambda_max + 2.0 * config.rho);
  }

  SolverState state;
  state.D = hidden.observed;
  state.A = Eigen::MatrixXd::Ones(n, m);
  state.B = Eigen::MatrixXd::Ones(n, m);
  state.lambda1 = Eigen::MatrixXd::Ones(n, m);
  state.lambda2 = Eigen::MatrixXd::Ones(n, m);

  Eigen::VectorXd last_k = Eigen::VectorXd::Ones(n);
  bool converged = false;

  while (state.iteration < config.max_iterations) {
    const int it = state.iteration + 1;

    state.D -= step * gradient_D(state, graph, config);
    for (Eigen::Index i = 0; i < n; ++i) project_simplex_row_inplace(state.D.row(i));
    check_finite(state.D, "D", it);

    state.A = update_A(state.D, state.lambda1, config.alpha, config.rho);
    check_finite(state.A, "A", it);

    if (config.use_constraint) {
      auto [B, k] = update_B(state.D, state.lambda2, hidden, config.rho);
      state.B = std::move(B);
      last_k = std::move(k);
    } else {
      state.B = state.D + state.lambda2 / config.rho;
    }
    check_finite(state.B, "B", it);

    update_multipliers(state, config.rho);

    const double res_a = (state.D - state.A).cwiseAbs().maxCoeff();
    const double res_b = (state.D - state.B).cwiseAbs().maxCoeff();
    state.residual_history.emplace_back(res_a, res_b);
    state.objective_history.push_back(objective_value(state.D, graph, config.alpha));
    state.iteration = it;

    if (std::max(res_a, res_b) < config.residual_tolerance) {
      converged = true;
      break;
    }
  }

  if (!config.use_constraint) {
    // report the coefficients the constraint would have used; the iterates
    // themselves were not tied to them
    last_k = scaling_coefficients_from(state.D, state.lambda2, hidden, config.rho);
  }

  RecoveryResult result;
  result.recovered = state.D;
  result.scaling_coefficients = last_k;
  result.final_b = state.B;
  result.converged = converged;
  result.iterations_used = state.iteration;
  result.final_residuals =
      state.residual_history.empty() ? std::make_pair(0.0, 0.0) : state.residual_history.back();
  result.residual_history = std::move(state.residual_history);
  result.objective_history = std::move(state.objective_history);
  return result;
}

BoundReport recovery_bound_diagnostics(const RecoveryResult& result, const HiddenView& hidden,
                                       const Eigen::MatrixXd& ground_truth) {
  const auto& mask = hidden.mask.entries;
  const auto& D = result.recovered;
  if (ground_truth.rows() != D.rows() || ground_truth.cols() != D.cols())
    throw std::invalid_argument("recovery_bound_diagnostics: ground truth shape mismatch");

  BoundReport report;
  report.rows.reserve(static_cast<std::size_t>(D.rows()));
  Eigen::Index satisfied = 0;
  for (Eigen::Index i = 0; i < D.rows(); ++i) {
    BoundRow row;
    const double true_observed_mass = (ground_truth.row(i).array() * mask.row(i).array()).sum();
    if (true_observed_mass <= 0.0)
      throw std::runtime_error("recovery_bound_diagnostics: row with zero true observed mass");
    const double recovered_observed_mass = (D.row(i).array() * mask.row(i).array()).sum();
    if (recovered_observed_mass <= 0.0)
      throw std::runtime_error("recovery_bound_diagnostics: row with zero recovered observed mass");
    // Both coefficients scale a complete row onto its renormalized observation:
    // the truth coefficient is 1 / (observed true mass) and the recovered one
    // is 1 / (observed recovered mass). The constraint-side coefficient of
    // RecoveryResult is the reciprocal of the latter at convergence.
    row.k_true = 1.0 / true_observed_mass;
    row.k_recovered = 1.0 / recovered_observed_mass;
    row.squared_error = (row.k_true - row.k_recovered) * (row.k_true - row.k_recovered);
    row.sigma = 1.0 - recovered_observed_mass;
    row.epsilon = row.sigma * row.sigma / (true_observed_mass * true_observed_mass);
    row.violated = row.squared_error > row.epsilon;
    if (row.violated)
      report.violations.push_back(i);
    else
      ++satisfied;
    report.rows.push_back(row);
  }
  report.satisfied_fraction =
      D.rows() == 0 ? 1.0 : static_cast<double>(satisfied) / static_cast<double>(D.rows());
  return report;
}

}  // namespace ldlrec
