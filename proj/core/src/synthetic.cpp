#include "ldlrec/synthetic.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ldlrec/rng.hpp"

namespace ldlrec {

namespace {

Eigen::RowVectorXd sample_simplex_point(std::mt19937_64& gen, Eigen::Index m) {
  // exponential spacings give a uniform (Dirichlet(1)) draw on the simplex
  Eigen::RowVectorXd v(m);
  for (Eigen::Index j = 0; j < m; ++j) v[j] = -std::log(1.0 - rng::uniform01(gen));
  return v / v.sum();
}

// Prototypes are mixed with the uniform distribution so every description
// degree stays bounded away from zero, as in the public LDL tables; near-zero
// degrees make ratio-based distances degenerate.
constexpr double kPrototypeMix = 0.7;

// Working scale of the feature space. The embedding amplitude and the noise
// gain together put typical within-cluster squared distances near 2 (so a
// unit-bandwidth Gaussian kernel actually discriminates) and leave roughly a
// tenth of neighbor links crossing clusters, which is the regime where local
// similarity and global low-rank structure both carry signal.
constexpr double kEmbeddingStd = 0.9;
constexpr double kNoiseGain = 6.0;

}  // namespace

Dataset generate_synthetic(const SyntheticSpec& spec) {
  if (spec.n < 1 || spec.d < 1 || spec.m < 2)
    throw std::invalid_argument("synthetic spec: need n >= 1, d >= 1, m >= 2");
  if (spec.rank < 1 || spec.rank > spec.m)
    throw std::invalid_argument("synthetic spec: rank must be in [1, m]");
  if (spec.noise_feature < 0.0 || spec.noise_label < 0.0)
    throw std::invalid_argument("synthetic spec: noise levels must be nonnegative");
  if (spec.n < spec.rank)
    throw std::invalid_argument("synthetic spec: fewer rows than prototypes");

  std::mt19937_64 gen(spec.seed);

  // Prototypes kept at least 0.5 apart in L1 so clusters stay distinguishable.
  std::vector<Eigen::RowVectorXd> prototypes;
  prototypes.reserve(static_cast<std::size_t>(spec.rank));
  const Eigen::RowVectorXd uniform =
      Eigen::RowVectorXd::Constant(spec.m, 1.0 / static_cast<double>(spec.m));
  for (int r = 0; r < spec.rank; ++r) {
    Eigen::RowVectorXd candidate;
    for (int attempt = 0; attempt < 100; ++attempt) {
      candidate = kPrototypeMix * sample_simplex_point(gen, spec.m) +
                  (1.0 - kPrototypeMix) * uniform;
      bool separated = true;
      for (const auto& p : prototypes)
        if ((candidate - p).cwiseAbs().sum() < 0.5) {
          separated = false;
          break;
        }
      if (separated) break;
    }
    prototypes.push_back(candidate);
  }

  Eigen::MatrixXd embedding(spec.m, spec.d);
  for (Eigen::Index i = 0; i < spec.m; ++i)
    for (Eigen::Index j = 0; j < spec.d; ++j) embedding(i, j) = kEmbeddingStd * rng::normal(gen);

  Dataset dataset;
  dataset.labels.resize(spec.n, spec.m);
  dataset.features.resize(spec.n, spec.d);

  // Bounded label noise (uniform, matched variance): description degrees stay
  // bounded away from zero at the default noise level, so no entry falls
  // below the solver's residual scale.
  const double noise_bound = std::sqrt(3.0) * spec.noise_label;
  for (Eigen::Index i = 0; i < spec.n; ++i) {
    const auto& proto = prototypes[static_cast<std::size_t>(i % spec.rank)];
    Eigen::RowVectorXd row = proto;
    for (Eigen::Index j = 0; j < spec.m; ++j) {
      row[j] += noise_bound * (2.0 * rng::uniform01(gen) - 1.0);
      if (row[j] < 0.0) row[j] = 0.0;
    }
    const double sum = row.sum();
    if (sum <= 0.0)
      row.setConstant(1.0 / static_cast<double>(spec.m));
    else
      row /= sum;
    dataset.labels.row(i) = row;

    dataset.features.row(i) = row * embedding;
    for (Eigen::Index j = 0; j < spec.d; ++j)
      dataset.features(i, j) += kNoiseGain * spec.noise_feature * rng::normal(gen);
  }

  return dataset;
}

}  // namespace ldlrec
