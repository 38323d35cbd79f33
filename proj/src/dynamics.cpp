#include "adconv/dynamics.hpp"

#include <cmath>
#include <numbers>

#include "adconv/errors.hpp"

namespace adconv {

namespace {

void require_stage(int k) {
  if (k < 1 || k > 30) throw ValidationError("stage index k must lie in [1, 30]");
}

struct PairGeometry {
  std::size_t cv_stride;
  std::size_t q_stride;
  std::size_t cv_dim;
  std::vector<std::size_t> bases;  // flat indices with cv digit 0 and qubit digit 0
};

PairGeometry locate(const RegisterLayout& layout, const std::string& cv_label, const std::string& qubit_label) {
  const std::size_t ci = layout.index_of(cv_label);
  const std::size_t qi = layout.index_of(qubit_label);
  if (layout[ci].role != Role::CvMode) throw ValidationError("'" + cv_label + "' is not a cv mode");
  if (layout[qi].role != Role::Qubit) throw ValidationError("'" + qubit_label + "' is not a qubit");
  PairGeometry g{layout.stride(ci), layout.stride(qi), layout[ci].dim, {}};
  const std::size_t dim = layout.dimension();
  g.bases.reserve(dim / (2 * g.cv_dim));
  for (std::size_t i = 0; i < dim; ++i) {
    if ((i / g.cv_stride) % g.cv_dim == 0 && (i / g.q_stride) % 2 == 0) g.bases.push_back(i);
  }
  return g;
}

// Applies the stage rotations to every column of `m` (rows indexed by the register).
template <typename Mat>
void rotate_rows(Mat& m, const PairGeometry& g, const StagePropagator& prop, Direction direction) {
  const double sign = direction == Direction::Forward ? -1.0 : 1.0;
  for (const auto& b : prop.blocks()) {
    const cplx off(0.0, sign * b.sin_angle);
    for (std::size_t base : g.bases) {
      const auto up = static_cast<Eigen::Index>(base + b.upper * g.cv_stride);
      const auto lo = static_cast<Eigen::Index>(base + b.lower * g.cv_stride + g.q_stride);
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        const cplx x = m(up, c);
        const cplx y = m(lo, c);
        m(up, c) = b.cos_angle * x + off * y;
        m(lo, c) = off * x + b.cos_angle * y;
      }
    }
  }
}

}  // namespace

double StageSpec::interaction_time() const {
  return std::numbers::pi / (static_cast<double>(time_denominator()) * omega);
}

void require_aligned(std::size_t n_trunc, int k) {
  require_stage(k);
  const std::size_t q = std::size_t{1} << k;
  if (n_trunc == 0 || n_trunc % q != 0) {
    throw AlignmentError("cv truncation " + std::to_string(n_trunc) + " is not a multiple of 2^" + std::to_string(k) +
                         " = " + std::to_string(q) + "; stage " + std::to_string(k) +
                         " would leave half-open blocks at the cutoff");
  }
}

std::pair<double, double> special_angle(std::size_t numerator, int k) {
  require_stage(k);
  const std::size_t period = std::size_t{1} << (k + 1);  // 2 pi
  const std::size_t quarter = std::size_t{1} << (k - 1);  // pi / 2
  const std::size_t r = numerator % period;
  if (r % quarter == 0) {
    switch (r / quarter) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const double theta = std::numbers::pi * static_cast<double>(r) / static_cast<double>(std::size_t{1} << k);
  return {std::cos(theta), std::sin(theta)};
}

std::vector<LadderElement> ladder_matrix_elements(int k, std::size_t n_trunc, double omega) {
  require_aligned(n_trunc, k);
  const std::size_t hop = std::size_t{1} << (k - 1);
  std::vector<LadderElement> out;
  out.reserve(n_trunc - hop);
  for (std::size_t m = hop; m < n_trunc; ++m) {
    out.push_back({m, m - hop, static_cast<double>(m) * omega});
  }
  return out;
}

Operator build_hamiltonian(int k, std::size_t n_trunc, double omega) {
  const auto elements = ladder_matrix_elements(k, n_trunc, omega);
  auto layout = RegisterLayout::cv_mode("A", n_trunc).concat(RegisterLayout::qubit("C"));
  const auto dim = static_cast<Eigen::Index>(layout.dimension());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& e : elements) {
    const auto up = static_cast<Eigen::Index>(2 * e.upper);      // |m, ->
    const auto lo = static_cast<Eigen::Index>(2 * e.lower + 1);  // |m - hop, +>
    h(up, lo) = e.rabi;
    h(lo, up) = e.rabi;
  }
  return {std::move(layout), std::move(h)};
}

StagePropagator::StagePropagator(StageSpec stage, std::size_t cv_dimension)
    : stage_(stage), cv_dimension_(cv_dimension) {
  require_aligned(cv_dimension, stage.k);
  const std::size_t hop = stage.hop();
  for (std::size_t m = hop; m < cv_dimension; ++m) {
    // Omega * m * t_k = m pi / 2^k independent of Omega.
    const auto [c, s] = special_angle(m, stage.k);
    blocks_.push_back({m, m - hop, c, s});
  }
  for (std::size_t m = 0; m < hop; ++m) fixed_points_.emplace_back(m, 0);
  for (std::size_t m = cv_dimension - hop; m < cv_dimension; ++m) fixed_points_.emplace_back(m, 1);
}

Operator StagePropagator::dense(Direction direction) const {
  auto layout = RegisterLayout::cv_mode("A", cv_dimension_).concat(RegisterLayout::qubit("C"));
  const auto dim = static_cast<Eigen::Index>(layout.dimension());
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  const PairGeometry g{2, 1, cv_dimension_, {0}};
  rotate_rows(u, g, *this, direction);
  return {std::move(layout), std::move(u)};
}

StagePropagator stage_propagator(int k, std::size_t n_trunc, double omega) {
  return StagePropagator(StageSpec{k, omega}, n_trunc);
}

PureState apply_stage(const PureState& psi, const std::string& cv_label, const std::string& qubit_label, int k,
                      Direction direction) {
  const auto g = locate(psi.layout(), cv_label, qubit_label);
  const StagePropagator prop(StageSpec{k}, g.cv_dim);
  Eigen::VectorXcd v = psi.amplitudes();
  rotate_rows(v, g, prop, direction);
  return PureState(psi.layout(), std::move(v));
}

DensityMatrix apply_stage(const DensityMatrix& rho, const std::string& cv_label, const std::string& qubit_label,
                          int k, Direction direction) {
  const auto g = locate(rho.layout(), cv_label, qubit_label);
  const StagePropagator prop(StageSpec{k}, g.cv_dim);
  // U rho U^dagger = (U (U rho)^dagger)^dagger for Hermitian rho.
  Eigen::MatrixXcd m = rho.matrix();
  rotate_rows(m, g, prop, direction);
  Eigen::MatrixXcd t = m.adjoint();
  rotate_rows(t, g, prop, direction);
  Eigen::MatrixXcd out = t.adjoint();
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix(rho.layout(), std::move(out));
}

}  // namespace adconv
