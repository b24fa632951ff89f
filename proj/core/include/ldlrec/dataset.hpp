#ifndef LDLREC_DATASET_HPP
#define LDLREC_DATASET_HPP

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ldlrec {

// Feature matrix paired with per-row label distributions. Every label row
// lies on the probability simplex (entries in [0,1], summing to 1).
struct Dataset {
  Eigen::MatrixXd features;         // n x d
  Eigen::MatrixXd labels;           // n x m, rows on the simplex
  std::vector<std::string> names;   // optional, size m when present

  Eigen::Index n() const { return labels.rows(); }
  Eigen::Index d() const { return features.cols(); }
  Eigen::Index m() const { return labels.cols(); }
};

struct LoadReport {
  // rows whose label sum was off by more than 1e-6 but less than 1e-3 and
  // were renormalized
  std::vector<Eigen::Index> renormalized_rows;
};

// Validates an in-memory pair and normalizes rows inside the tolerance band.
// Row sums off by >= 1e-3, negative entries, or shape problems throw.
Dataset make_dataset(Eigen::MatrixXd features, Eigen::MatrixXd labels,
                     LoadReport* report = nullptr);

Dataset load_dataset(const std::string& features_path, const std::string& labels_path,
                     LoadReport* report = nullptr);

// Disjoint row partition by shuffled indices; train size = round(n * fraction).
std::pair<Dataset, Dataset> train_test_split(const Dataset& dataset, double train_fraction,
                                             std::uint64_t seed);

// Per-column z-score; constant columns are left at zero. Off by default
// everywhere, enabled with the --zscore CLI flag.
Eigen::MatrixXd standardize_columns(const Eigen::MatrixXd& features);

}  // namespace ldlrec

#endif
