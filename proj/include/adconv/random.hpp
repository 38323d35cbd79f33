#pragma once

#include <array>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "adconv/pipeline.hpp"

namespace adconv {

/// Seeded sampler for the randomized property suites.
///
/// Draws come from std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Uniforms use the top 53 bits; normals use Box-Muller. The standard
/// library distributions are avoided because their algorithms are unspecified.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  double uniform();  // [0, 1)
  double normal();
  cplx complex_normal();

  /// Haar-random pure pair state (normalized complex Gaussian vector).
  QubitPairState pure_pair(int stage);
  /// Random full-rank mixed pair state G G^dagger / tr, G complex Ginibre.
  QubitPairState mixed_pair(int stage);
  /// Haar-random unitary of size n (QR of a Ginibre matrix with phase correction).
  Eigen::MatrixXcd unitary(Eigen::Index n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace adconv
