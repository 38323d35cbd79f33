#pragma once

#include <complex>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "adconv/layout.hpp"
#include "adconv/tolerances.hpp"

namespace adconv {

using cplx = std::complex<double>;

/// Normalized amplitude vector over a register layout.
class PureState {
 public:
  /// Throws ValidationError if the length mismatches or the norm is off by more than tol.norm.
  PureState(RegisterLayout layout, Eigen::VectorXcd amplitudes, const Tolerances& tol = kDefaultTolerances);

  /// Rescales `amplitudes` to unit norm; throws on a zero vector.
  static PureState normalized(RegisterLayout layout, Eigen::VectorXcd amplitudes);
  static PureState basis(RegisterLayout layout, std::size_t flat_index);

  const RegisterLayout& layout() const { return layout_; }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  std::size_t dimension() const { return layout_.dimension(); }
  cplx operator[](std::size_t i) const { return amplitudes_[static_cast<Eigen::Index>(i)]; }

 private:
  RegisterLayout layout_;
  Eigen::VectorXcd amplitudes_;
};

/// Dense Hermitian trace-one operator over a register layout.
///
/// Construction checks shape, Hermiticity and trace. Positivity is only
/// checked by `check_valid`, since it needs an eigendecomposition.
class DensityMatrix {
 public:
  DensityMatrix(RegisterLayout layout, Eigen::MatrixXcd matrix, const Tolerances& tol = kDefaultTolerances);

  const RegisterLayout& layout() const { return layout_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  std::size_t dimension() const { return layout_.dimension(); }

  /// Throws ValidationError if any eigenvalue is below -tol.psd.
  void check_valid(const Tolerances& tol = kDefaultTolerances) const;

 private:
  RegisterLayout layout_;
  Eigen::MatrixXcd matrix_;
};

/// Hermitian operator on a layout (Hamiltonians, dense propagators).
struct Operator {
  RegisterLayout layout;
  Eigen::MatrixXcd matrix;
};

template <typename State>
struct Truncated {
  State state;
  double leakage;  // weight of the ideal state above the cutoff, before renormalization
};

/// lambda = tanh(r), 0 <= lambda < 1.
class SqueezingParams {
 public:
  static SqueezingParams from_lambda(double lambda);
  static SqueezingParams from_r(double r);
  double lambda() const { return lambda_; }
  double r() const;

 private:
  explicit SqueezingParams(double lambda) : lambda_(lambda) {}
  double lambda_;
};

/// Two-mode squeezed vacuum on modes "A", "B", renormalized after truncation.
Truncated<PureState> make_tmsv(SqueezingParams params, std::size_t n_trunc);

/// Coherent state on one mode (default label "A").
/// Throws TruncationError when the Poisson tail above n_trunc is >= tol.trunc.
Truncated<PureState> make_coherent(cplx alpha, std::size_t n_trunc, const Tolerances& tol = kDefaultTolerances,
                                   const std::string& label = "A");

/// Poisson weight of |alpha> above the cutoff.
double coherent_leakage(cplx alpha, std::size_t n_trunc);

/// Thermal state (1-v) sum v^n |n><n| on one mode.
Truncated<DensityMatrix> make_thermal(double v, std::size_t n_trunc, const std::string& label = "A");

PureState tensor(const PureState& a, const PureState& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

DensityMatrix pure_to_dm(const PureState& psi);
double purity(const DensityMatrix& rho);

/// Reduced state on the subsystems named in `keep`.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::string> keep);
/// Same as partial_trace(pure_to_dm(psi), keep) without forming the full projector.
DensityMatrix reduced_state(const PureState& psi, std::span<const std::string> keep);

/// <factor| contracted over the factor's subsystems; unnormalized remainder.
/// `factor` must be normalized and its labels a proper subset of psi's.
struct Contraction {
  RegisterLayout layout;
  Eigen::VectorXcd amplitudes;
};
Contraction contract(const PureState& factor, const PureState& psi);

/// Phase-invariant overlap |<a|b>|; layouts must have equal dimensions per subsystem.
double overlap(const PureState& a, const PureState& b);

}  // namespace adconv
