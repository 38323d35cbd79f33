#include "adconv/states.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "adconv/errors.hpp"

namespace adconv {

namespace {

std::vector<std::size_t> dims_of(const RegisterLayout& layout) {
  std::vector<std::size_t> d;
  for (const auto& s : layout.subsystems()) d.push_back(s.dim);
  return d;
}

}  // namespace

PureState::PureState(RegisterLayout layout, Eigen::VectorXcd amplitudes, const Tolerances& tol)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != layout_.dimension()) {
    throw ValidationError("amplitude count " + std::to_string(amplitudes_.size()) + " does not match layout dimension " +
                          std::to_string(layout_.dimension()));
  }
  const double n = amplitudes_.norm();
  if (!(std::abs(n * n - 1.0) <= tol.norm)) {
    throw ValidationError("state is not normalized (norm^2 = " + std::to_string(n * n) + ")");
  }
}

PureState PureState::normalized(RegisterLayout layout, Eigen::VectorXcd amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0)) throw ValidationError("cannot normalize a zero vector");
  amplitudes /= n;
  return PureState(std::move(layout), std::move(amplitudes));
}

PureState PureState::basis(RegisterLayout layout, std::size_t flat_index) {
  if (flat_index >= layout.dimension()) throw ValidationError("basis index out of range");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(layout.dimension()));
  v[static_cast<Eigen::Index>(flat_index)] = 1.0;
  return PureState(std::move(layout), std::move(v));
}

DensityMatrix::DensityMatrix(RegisterLayout layout, Eigen::MatrixXcd matrix, const Tolerances& tol)
    : layout_(std::move(layout)), matrix_(std::move(matrix)) {
  const auto dim = static_cast<Eigen::Index>(layout_.dimension());
  if (matrix_.rows() != dim || matrix_.cols() != dim) {
    throw ValidationError("density matrix shape does not match layout dimension " + std::to_string(dim));
  }
  const double herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (!(herm <= tol.herm)) throw ValidationError("density matrix is not Hermitian (defect " + std::to_string(herm) + ")");
  const cplx tr = matrix_.trace();
  if (!(std::abs(tr - 1.0) <= tol.norm)) {
    throw ValidationError("density matrix trace is " + std::to_string(tr.real()) + ", expected 1");
  }
}

void DensityMatrix::check_valid(const Tolerances& tol) const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix_, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -tol.psd) {
    throw ValidationError("density matrix has negative eigenvalue " + std::to_string(min_eig));
  }
}

SqueezingParams SqueezingParams::from_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0)) throw ValidationError("squeezing lambda must lie in [0, 1)");
  return SqueezingParams(lambda);
}

SqueezingParams SqueezingParams::from_r(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw ValidationError("squeezing r must be finite and >= 0");
  return from_lambda(std::tanh(r));
}

double SqueezingParams::r() const { return std::atanh(lambda_); }

Truncated<PureState> make_tmsv(SqueezingParams params, std::size_t n_trunc) {
  if (n_trunc < 2) throw ValidationError("n_trunc must be >= 2");
  const double lambda = params.lambda();
  const auto layout = RegisterLayout::cv_mode("A", n_trunc).concat(RegisterLayout::cv_mode("B", n_trunc));
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(layout.dimension()));
  double amp = std::sqrt(1.0 - lambda * lambda);
  for (std::size_t m = 0; m < n_trunc; ++m) {
    amps[static_cast<Eigen::Index>(m * n_trunc + m)] = amp;
    amp *= lambda;
  }
  // Tail weight lambda^(2N) in closed form; summing the kept part would cancel.
  const double leakage = std::pow(lambda, 2.0 * static_cast<double>(n_trunc));
  return {PureState::normalized(layout, std::move(amps)), leakage};
}

double coherent_leakage(cplx alpha, std::size_t n_trunc) {
  const double mean = std::norm(alpha);
  if (mean == 0.0) return 0.0;
  // Sum the Poisson tail directly from n_trunc upward.
  const double log_mean = std::log(mean);
  double tail = 0.0;
  for (std::size_t n = n_trunc;; ++n) {
    const double nn = static_cast<double>(n);
    const double term = std::exp(-mean + nn * log_mean - std::lgamma(nn + 1.0));
    tail += term;
    if (nn > mean && term < 1e-300 + 1e-18 * tail) break;
    if (n > n_trunc + 100000) break;
  }
  return tail;
}

Truncated<PureState> make_coherent(cplx alpha, std::size_t n_trunc, const Tolerances& tol, const std::string& label) {
  if (n_trunc < 2) throw ValidationError("n_trunc must be >= 2");
  const double leakage = coherent_leakage(alpha, n_trunc);
  if (!(leakage < tol.trunc)) {
    throw TruncationError("coherent state alpha=(" + std::to_string(alpha.real()) + "," + std::to_string(alpha.imag()) +
                          ") leaks " + std::to_string(leakage) + " above n_trunc=" + std::to_string(n_trunc));
  }
  Eigen::VectorXcd amps(static_cast<Eigen::Index>(n_trunc));
  const double mod = std::abs(alpha);
  const double phase = std::arg(alpha);
  for (std::size_t n = 0; n < n_trunc; ++n) {
    const double nn = static_cast<double>(n);
    if (mod == 0.0) {
      amps[static_cast<Eigen::Index>(n)] = (n == 0) ? 1.0 : 0.0;
      continue;
    }
    const double log_mag = -0.5 * mod * mod + nn * std::log(mod) - 0.5 * std::lgamma(nn + 1.0);
    amps[static_cast<Eigen::Index>(n)] = std::polar(std::exp(log_mag), nn * phase);
  }
  return {PureState::normalized(RegisterLayout::cv_mode(label, n_trunc), std::move(amps)), leakage};
}

Truncated<DensityMatrix> make_thermal(double v, std::size_t n_trunc, const std::string& label) {
  if (!(v >= 0.0 && v < 1.0)) throw ValidationError("thermal parameter v must lie in [0, 1)");
  if (n_trunc < 2) throw ValidationError("n_trunc must be >= 2");
  const double leakage = std::pow(v, static_cast<double>(n_trunc));
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n_trunc), static_cast<Eigen::Index>(n_trunc));
  double p = (1.0 - v) / (1.0 - leakage);
  for (std::size_t n = 0; n < n_trunc; ++n) {
    m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) = p;
    p *= v;
  }
  return {DensityMatrix(RegisterLayout::cv_mode(label, n_trunc), std::move(m)), leakage};
}

PureState tensor(const PureState& a, const PureState& b) {
  auto layout = a.layout().concat(b.layout());
  Eigen::VectorXcd v = Eigen::kroneckerProduct(a.amplitudes(), b.amplitudes()).eval();
  return PureState(std::move(layout), std::move(v));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  auto layout = a.layout().concat(b.layout());
  Eigen::MatrixXcd m = Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval();
  return DensityMatrix(std::move(layout), std::move(m));
}

DensityMatrix pure_to_dm(const PureState& psi) {
  Eigen::MatrixXcd m = psi.amplitudes() * psi.amplitudes().adjoint();
  return DensityMatrix(psi.layout(), std::move(m));
}

double purity(const DensityMatrix& rho) {
  // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  return rho.matrix().squaredNorm();
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::string> keep) {
  if (keep.empty()) throw ValidationError("partial_trace needs at least one kept subsystem");
  const auto split = split_indices(rho.layout(), keep);
  const auto kd = static_cast<Eigen::Index>(split.kept_layout.dimension());
  const std::size_t rd = split.rest_layout.dimension();

  // Group full indices by their traced-out part.
  std::vector<std::vector<std::size_t>> by_rest(rd);
  for (std::size_t i = 0; i < split.rest.size(); ++i) by_rest[split.rest[i]].push_back(i);

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(kd, kd);
  const auto& m = rho.matrix();
  for (const auto& group : by_rest) {
    for (std::size_t i : group) {
      for (std::size_t j : group) {
        out(static_cast<Eigen::Index>(split.kept[i]), static_cast<Eigen::Index>(split.kept[j])) +=
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
  }
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix(split.kept_layout, std::move(out));
}

DensityMatrix reduced_state(const PureState& psi, std::span<const std::string> keep) {
  if (keep.empty()) throw ValidationError("reduced_state needs at least one kept subsystem");
  const auto split = split_indices(psi.layout(), keep);
  const auto kd = static_cast<Eigen::Index>(split.kept_layout.dimension());
  const auto rd = static_cast<Eigen::Index>(split.rest_layout.dimension());
  Eigen::MatrixXcd reshaped(kd, rd);
  for (std::size_t i = 0; i < split.kept.size(); ++i) {
    reshaped(static_cast<Eigen::Index>(split.kept[i]), static_cast<Eigen::Index>(split.rest[i])) = psi[i];
  }
  Eigen::MatrixXcd out = reshaped * reshaped.adjoint();
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix(split.kept_layout, std::move(out));
}

Contraction contract(const PureState& factor, const PureState& psi) {
  const auto labels = factor.layout().labels();
  const auto split = split_indices(psi.layout(), labels);
  if (split.rest_layout.empty()) throw ValidationError("contraction would leave no subsystems");
  if (dims_of(split.kept_layout) != dims_of(factor.layout()) || split.kept_layout.labels() != labels) {
    throw ValidationError("factor layout does not match the contracted subsystems");
  }
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(split.rest_layout.dimension()));
  for (std::size_t i = 0; i < split.kept.size(); ++i) {
    out[static_cast<Eigen::Index>(split.rest[i])] += std::conj(factor[split.kept[i]]) * psi[i];
  }
  return {split.rest_layout, std::move(out)};
}

double overlap(const PureState& a, const PureState& b) {
  if (dims_of(a.layout()) != dims_of(b.layout())) throw ValidationError("overlap of states with different layouts");
  return std::abs(a.amplitudes().dot(b.amplitudes()));
}

}  // namespace adconv
