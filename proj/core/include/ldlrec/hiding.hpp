#ifndef LDLREC_HIDING_HPP
#define LDLREC_HIDING_HPP

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace ldlrec {

// Binary observation pattern over an n x m label matrix. 1 = observed.
// Every row keeps at least one observed entry whose paired ground-truth
// value is strictly positive.
struct Mask {
  Eigen::MatrixXd entries;                  // n x m of exact 0.0 / 1.0
  double missing_rate = 0.0;                // requested hidden fraction
  std::uint64_t seed = 0;
  std::vector<Eigen::Index> repaired_rows;  // rows where one entry was un-hidden

  Eigen::Index rows() const { return entries.rows(); }
  Eigen::Index cols() const { return entries.cols(); }
};

// The observation a hidden-label annotator produces: hidden entries are
// exactly zero and each row is renormalized so the observed entries sum to 1.
struct HiddenView {
  Eigen::MatrixXd observed;  // n x m
  Mask mask;
};

// Hides round(missing_rate * n * m) uniformly chosen positions, then a repair
// pass un-hides one uniformly chosen positive-valued entry in any row left
// without an observed positive entry. Deterministic given the seed.
Mask generate_mask(const Eigen::MatrixXd& labels, double missing_rate, std::uint64_t seed);

// observed_ij = labels_ij / sum_k(labels_ik * mask_ik) where mask_ij = 1, else 0.
HiddenView hide(const Eigen::MatrixXd& labels, const Mask& mask);

// Throws unless the HiddenView invariants hold (zeros off-mask, observed rows
// on the simplex, positive observed mass per row).
void validate_hidden_view(const HiddenView& hidden);

}  // namespace ldlrec

#endif
