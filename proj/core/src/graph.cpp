#include "ldlrec/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace ldlrec {

SimilarityGraph build_graph(const Eigen::MatrixXd& features, int k, double bandwidth) {
  const Eigen::Index n = features.rows();
  if (n < 2) throw std::invalid_argument("graph needs at least two samples");
  if (k < 1 || k > n - 1) throw std::invalid_argument("neighbor count k out of range [1, n-1]");
  if (!(bandwidth > 0.0)) throw std::invalid_argument("bandwidth must be positive");

  // Squared distances once per unordered pair; both triangles share the value
  // so the similarity matrix is symmetric by construction.
  Eigen::MatrixXd dist2 = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d2 = (features.row(i) - features.row(j)).squaredNorm();
      dist2(i, j) = d2;
      dist2(j, i) = d2;
    }

  // Directed KNN lists, ties toward the smaller index, self excluded.
  std::vector<std::vector<Eigen::Index>> neighbors(static_cast<std::size_t>(n));
  std::vector<std::pair<double, Eigen::Index>> candidates;
  for (Eigen::Index i = 0; i < n; ++i) {
    candidates.clear();
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) candidates.emplace_back(dist2(i, j), j);
    std::partial_sort(candidates.begin(), candidates.begin() + k, candidates.end());
    auto& list = neighbors[static_cast<std::size_t>(i)];
    for (int t = 0; t < k; ++t) list.push_back(candidates[static_cast<std::size_t>(t)].second);
  }

  Eigen::MatrixXd connected = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j : neighbors[static_cast<std::size_t>(i)]) {
      connected(i, j) = 1.0;
      connected(j, i) = 1.0;  // symmetric OR of the directed lists
    }

  SimilarityGraph graph;
  graph.k = k;
  graph.bandwidth = bandwidth;
  graph.similarity = Eigen::MatrixXd::Zero(n, n);
  const double denom = 2.0 * bandwidth * bandwidth;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (connected(i, j) != 0.0) {
        const double w = std::exp(-dist2(i, j) / denom);
        graph.similarity(i, j) = w;
        graph.similarity(j, i) = w;
      }

  graph.laplacian = Eigen::MatrixXd(graph.similarity.rowwise().sum().asDiagonal());
  graph.laplacian -= graph.similarity;
  return graph;
}

double smoothness_energy(const SimilarityGraph& graph, const Eigen::MatrixXd& D) {
  if (D.rows() != graph.size())
    throw std::invalid_argument("smoothness_energy: row count does not match graph size");
  return (D.array() * (graph.laplacian * D).array()).sum();
}

}  // namespace ldlrec
