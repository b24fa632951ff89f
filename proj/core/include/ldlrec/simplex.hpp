#ifndef LDLREC_SIMPLEX_HPP
#define LDLREC_SIMPLEX_HPP

#include <Eigen/Core>

namespace ldlrec {

// O(m) projection: clamp negatives to zero, divide the row by its sum.
// A row whose clamped sum is zero becomes the uniform distribution.
// Proportions among surviving positive entries are preserved.
using SimplexRowRef = Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>>;
void project_simplex_row_inplace(SimplexRowRef row);

Eigen::MatrixXd project_simplex_rows(Eigen::MatrixXd D);

}  // namespace ldlrec

#endif
