#ifndef LDLREC_SYNTHETIC_HPP
#define LDLREC_SYNTHETIC_HPP

#include <cstdint>

#include "ldlrec/dataset.hpp"

namespace ldlrec {

// Desk-scale synthetic stand-in for the public LDL benchmark tables:
// `rank` prototype distributions on the simplex, rows assigned round-robin,
// labels = normalize(max(prototype + label noise, 0)), features = labels
// pushed through a fixed random linear embedding plus feature noise.
// noise_feature and noise_label are relative levels; the generator fixes the
// absolute feature scale so that unit-bandwidth Gaussian kernels resolve the
// cluster structure while a small share of neighbor links crosses clusters.
struct SyntheticSpec {
  Eigen::Index n = 200;
  Eigen::Index d = 16;
  Eigen::Index m = 6;
  int rank = 2;
  double noise_feature = 0.05;
  double noise_label = 0.02;
  std::uint64_t seed = 0;
};

Dataset generate_synthetic(const SyntheticSpec& spec);

}  // namespace ldlrec

#endif
