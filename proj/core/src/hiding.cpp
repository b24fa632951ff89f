#include "ldlrec/hiding.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "ldlrec/rng.hpp"

namespace ldlrec {

Mask generate_mask(const Eigen::MatrixXd& labels, double missing_rate, std::uint64_t seed) {
  if (!(missing_rate >= 0.0 && missing_rate < 1.0))
    throw std::invalid_argument("missing_rate must be in [0, 1)");

  const Eigen::Index n = labels.rows();
  const Eigen::Index m = labels.cols();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (labels.row(i).maxCoeff() <= 0.0) {
      std::ostringstream msg;
      msg << "label row " << i + 1 << " has no positive entry; observation guarantee unsatisfiable";
      throw std::runtime_error(msg.str());
    }
  }

  Mask mask;
  mask.entries = Eigen::MatrixXd::Ones(n, m);
  mask.missing_rate = missing_rate;
  mask.seed = seed;

  // Exactly round(rate * n * m) positions hidden, drawn uniformly without
  // replacement (partial Fisher-Yates), so the realized count matches the
  // requested rate up to rounding before the repair pass.
  std::mt19937_64 gen(seed);
  const auto total = static_cast<std::size_t>(n * m);
  const auto hide_count =
      static_cast<std::size_t>(std::llround(missing_rate * static_cast<double>(total)));
  std::vector<std::size_t> positions(total);
  for (std::size_t p = 0; p < total; ++p) positions[p] = p;
  for (std::size_t t = 0; t < hide_count; ++t) {
    const std::size_t pick = t + rng::uniform_index(gen, total - t);
    std::swap(positions[t], positions[pick]);
    const auto flat = static_cast<Eigen::Index>(positions[t]);
    mask.entries(flat / m, flat % m) = 0.0;
  }

  // Repair pass: any row with no observed positive entry gets one uniformly
  // chosen positive-valued entry un-hidden.
  for (Eigen::Index i = 0; i < n; ++i) {
    bool has_observed_positive = false;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (mask.entries(i, j) != 0.0 && labels(i, j) > 0.0) {
        has_observed_positive = true;
        break;
      }
    }
    if (has_observed_positive) continue;

    std::vector<Eigen::Index> positives;
    for (Eigen::Index j = 0; j < m; ++j)
      if (labels(i, j) > 0.0) positives.push_back(j);
    const Eigen::Index pick = positives[rng::uniform_index(gen, positives.size())];
    mask.entries(i, pick) = 1.0;
    mask.repaired_rows.push_back(i);
  }

  return mask;
}

HiddenView hide(const Eigen::MatrixXd& labels, const Mask& mask) {
  if (labels.rows() != mask.rows() || labels.cols() != mask.cols())
    throw std::invalid_argument("mask shape does not match labels");

  HiddenView view;
  view.mask = mask;
  view.observed = Eigen::MatrixXd::Zero(labels.rows(), labels.cols());

  for (Eigen::Index i = 0; i < labels.rows(); ++i) {
    const double observed_mass = (labels.row(i).array() * mask.entries.row(i).array()).sum();
    if (observed_mass <= 0.0) {
      std::ostringstream msg;
      msg << "row " << i + 1 << " has zero observed mass; mask invariant violated";
      throw std::runtime_error(msg.str());
    }
    for (Eigen::Index j = 0; j < labels.cols(); ++j)
      if (mask.entries(i, j) != 0.0) view.observed(i, j) = labels(i, j) / observed_mass;
  }

  return view;
}

void validate_hidden_view(const HiddenView& hidden) {
  const auto& observed = hidden.observed;
  const auto& mask = hidden.mask.entries;
  if (observed.rows() != mask.rows() || observed.cols() != mask.cols())
    throw std::invalid_argument("hidden view: observed/mask shape mismatch");

  for (Eigen::Index i = 0; i < observed.rows(); ++i) {
    double sum = 0.0;
    double mass_sq = 0.0;
    for (Eigen::Index j = 0; j < observed.cols(); ++j) {
      const double v = observed(i, j);
      if (mask(i, j) == 0.0 && v != 0.0)
        throw std::runtime_error("hidden view: nonzero entry at masked position");
      if (v < 0.0 || v > 1.0 + 1e-9)
        throw std::runtime_error("hidden view: entry outside [0, 1]");
      sum += v;
      mass_sq += v * v * mask(i, j);
    }
    if (std::abs(sum - 1.0) > 1e-6)
      throw std::runtime_error("hidden view: observed row does not sum to 1");
    if (mass_sq <= 0.0)
      throw std::runtime_error("hidden view: row with zero observed mass");
  }
}

}  // namespace ldlrec
