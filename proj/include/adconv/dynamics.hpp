#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "adconv/states.hpp"

namespace adconv {

enum class Direction { Forward, Backward };

/// Stage k of the cascade: photon hop 2^(k-1), interaction time pi / (2^k Omega).
///
/// The time is kept as the rational multiple pi/2^k of 1/Omega so that the
/// rotation angles m*Omega*t_k = m*pi/2^k can be reduced exactly.
struct StageSpec {
  int k;
  double omega = 1.0;

  std::size_t hop() const { return std::size_t{1} << (k - 1); }
  std::size_t time_denominator() const { return std::size_t{1} << k; }  // t_k * Omega = pi / time_denominator
  double interaction_time() const;
};

struct LadderElement {
  std::size_t upper;  // m
  std::size_t lower;  // m - 2^(k-1)
  double rabi;        // m * Omega
};

/// One 2x2 block of a stage propagator acting on (|upper,->, |lower,+>):
///   [ c    -i s ]
///   [ -i s  c   ]   with c = cos(m pi / 2^k), s = sin(m pi / 2^k).
struct RotationBlock {
  std::size_t upper;
  std::size_t lower;
  double cos_angle;
  double sin_angle;
};

/// exp(-i H_k t_k) as a list of rotation blocks; identity on all other levels.
class StagePropagator {
 public:
  StagePropagator(StageSpec stage, std::size_t cv_dimension);

  const StageSpec& stage() const { return stage_; }
  std::size_t cv_dimension() const { return cv_dimension_; }
  const std::vector<RotationBlock>& blocks() const { return blocks_; }
  /// (level, qubit) pairs left invariant: |m,-> for m < hop and |m,+> for m >= N - hop.
  const std::vector<std::pair<std::size_t, int>>& fixed_points() const { return fixed_points_; }

  /// Dense matrix on (cv "A" x qubit "C"); cv index slowest.
  Operator dense(Direction direction = Direction::Forward) const;

 private:
  StageSpec stage_;
  std::size_t cv_dimension_;
  std::vector<RotationBlock> blocks_;
  std::vector<std::pair<std::size_t, int>> fixed_points_;
};

/// Throws AlignmentError unless n_trunc is a positive multiple of 2^k.
void require_aligned(std::size_t n_trunc, int k);

/// cos and sin of numerator * pi / 2^k; exact at multiples of pi/2.
std::pair<double, double> special_angle(std::size_t numerator, int k);

std::vector<LadderElement> ladder_matrix_elements(int k, std::size_t n_trunc, double omega = 1.0);

/// H_k on (cv "A" x qubit "C"), hbar = 1. Qubit level 0 is |->, 1 is |+>.
Operator build_hamiltonian(int k, std::size_t n_trunc, double omega = 1.0);

StagePropagator stage_propagator(int k, std::size_t n_trunc, double omega = 1.0);

/// Applies stage k on the (cv_label, qubit_label) pair; identity on the rest of the register.
/// Backward applies the conjugate transpose.
PureState apply_stage(const PureState& psi, const std::string& cv_label, const std::string& qubit_label, int k,
                      Direction direction);
DensityMatrix apply_stage(const DensityMatrix& rho, const std::string& cv_label, const std::string& qubit_label,
                          int k, Direction direction);

}  // namespace adconv
