#ifndef LDLREC_GRAPH_HPP
#define LDLREC_GRAPH_HPP

#include <Eigen/Core>

namespace ldlrec {

// KNN similarity graph over samples with Gaussian edge weights and its
// unnormalized Laplacian G = diag(rowsum(A)) - A.
struct SimilarityGraph {
  Eigen::MatrixXd similarity;  // n x n, symmetric, zero diagonal
  Eigen::MatrixXd laplacian;   // n x n, symmetric PSD, zero row sums
  int k = 0;
  double bandwidth = 1.0;

  Eigen::Index size() const { return similarity.rows(); }
};

// A_ij = exp(-|x_i - x_j|^2 / (2 sigma^2)) iff i is among the k nearest
// neighbors of j or vice versa. Neighbor ties break toward the smaller index;
// a point is never its own neighbor. Brute-force O(n^2 d), exact.
SimilarityGraph build_graph(const Eigen::MatrixXd& features, int k, double bandwidth);

// tr(D^T G D). The pairwise form sum_ij A_ij |d_i - d_j|^2 equals twice this.
double smoothness_energy(const SimilarityGraph& graph, const Eigen::MatrixXd& D);

}  // namespace ldlrec

#endif
