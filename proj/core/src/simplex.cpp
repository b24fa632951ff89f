#include "ldlrec/simplex.hpp"

namespace ldlrec {

void project_simplex_row_inplace(SimplexRowRef row) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < row.size(); ++j) {
    if (row[j] < 0.0) row[j] = 0.0;
    sum += row[j];
  }
  if (sum <= 0.0) {
    row.setConstant(1.0 / static_cast<double>(row.size()));
  } else {
    row /= sum;
  }
}

Eigen::MatrixXd project_simplex_rows(Eigen::MatrixXd D) {
  for (Eigen::Index i = 0; i < D.rows(); ++i) project_simplex_row_inplace(D.row(i));
  return D;
}

}  // namespace ldlrec
