#include "ldlrec/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ldlrec/csv.hpp"
#include "ldlrec/rng.hpp"

namespace ldlrec {

namespace {
constexpr double kSumTolerance = 1e-6;   // accepted as-is
constexpr double kRenormLimit = 1e-3;    // renormalizable band; beyond is corrupt
}  // namespace

Dataset make_dataset(Eigen::MatrixXd features, Eigen::MatrixXd labels, LoadReport* report) {
  if (features.rows() != labels.rows()) {
    std::ostringstream msg;
    msg << "feature/label row count mismatch: " << features.rows() << " vs " << labels.rows();
    throw std::invalid_argument(msg.str());
  }
  if (labels.rows() < 1) throw std::invalid_argument("dataset needs at least one row");
  if (labels.cols() < 2) throw std::invalid_argument("dataset needs at least two labels");

  for (Eigen::Index i = 0; i < labels.rows(); ++i) {
    for (Eigen::Index j = 0; j < labels.cols(); ++j) {
      if (labels(i, j) < 0.0) {
        std::ostringstream msg;
        msg << "negative label entry " << labels(i, j) << " at row " << i + 1 << ", column "
            << j + 1;
        throw std::runtime_error(msg.str());
      }
    }
    const double sum = labels.row(i).sum();
    const double deviation = std::abs(sum - 1.0);
    if (deviation >= kRenormLimit) {
      std::ostringstream msg;
      msg << "label row " << i + 1 << " sum " << sum << " outside tolerance";
      throw std::runtime_error(msg.str());
    }
    if (deviation > kSumTolerance) {
      labels.row(i) /= sum;
      if (report) report->renormalized_rows.push_back(i);
    }
    if (labels.row(i).maxCoeff() > 1.0 + kSumTolerance) {
      std::ostringstream msg;
      msg << "label entry above 1 at row " << i + 1;
      throw std::runtime_error(msg.str());
    }
  }

  return Dataset{std::move(features), std::move(labels), {}};
}

Dataset load_dataset(const std::string& features_path, const std::string& labels_path,
                     LoadReport* report) {
  return make_dataset(read_csv_matrix(features_path), read_csv_matrix(labels_path), report);
}

std::pair<Dataset, Dataset> train_test_split(const Dataset& dataset, double train_fraction,
                                             std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw std::invalid_argument("train_fraction must be in (0, 1)");

  const Eigen::Index n = dataset.n();
  const auto train_size =
      static_cast<Eigen::Index>(std::llround(static_cast<double>(n) * train_fraction));
  if (train_size < 1 || train_size >= n)
    throw std::invalid_argument("split would leave an empty partition");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::mt19937_64 gen(seed);
  // Fisher-Yates with our own index draw for cross-platform determinism
  for (std::size_t i = order.size() - 1; i > 0; --i)
    std::swap(order[i], order[rng::uniform_index(gen, i + 1)]);

  auto take = [&](Eigen::Index begin, Eigen::Index count) {
    Dataset part;
    part.features.resize(count, dataset.features.cols());
    part.labels.resize(count, dataset.labels.cols());
    for (Eigen::Index i = 0; i < count; ++i) {
      part.features.row(i) = dataset.features.row(order[static_cast<std::size_t>(begin + i)]);
      part.labels.row(i) = dataset.labels.row(order[static_cast<std::size_t>(begin + i)]);
    }
    part.names = dataset.names;
    return part;
  };

  return {take(0, train_size), take(train_size, n - train_size)};
}

Eigen::MatrixXd standardize_columns(const Eigen::MatrixXd& features) {
  Eigen::MatrixXd out = features;
  const double n = static_cast<double>(features.rows());
  for (Eigen::Index j = 0; j < features.cols(); ++j) {
    const double mean = features.col(j).mean();
    out.col(j).array() -= mean;
    const double var = out.col(j).squaredNorm() / std::max(n - 1.0, 1.0);
    const double sd = std::sqrt(var);
    if (sd > 0.0) out.col(j) /= sd;
  }
  return out;
}

}  // namespace ldlrec
