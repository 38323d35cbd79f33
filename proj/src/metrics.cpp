#include "adconv/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "adconv/errors.hpp"

namespace adconv {

namespace {

// Entropy contribution of a binary split with odds x : 1, in bits.
// log2(1+x) - x/(1+x) log2 x, with the x = 0 limit taken.
double binary_odds_entropy(double x) {
  if (x <= 0.0) return 0.0;
  return std::log2(1.0 + x) - x / (1.0 + x) * std::log2(x);
}

void require_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0)) throw ValidationError("lambda must lie in [0, 1)");
}

Eigen::MatrixXcd hermitian_sqrt(const Eigen::MatrixXcd& m, const Tolerances& tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < -tol.psd) throw ValidationError("matrix is not positive semidefinite");
    ev[i] = std::sqrt(std::max(ev[i], 0.0));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

// W with m = W W^dagger, from the clipped eigendecomposition.
Eigen::MatrixXcd psd_factor(const Eigen::MatrixXcd& m, const Tolerances& tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < -tol.psd) throw ValidationError("matrix is not positive semidefinite");
    ev[i] = std::sqrt(std::max(ev[i], 0.0));
  }
  return es.eigenvectors() * ev.asDiagonal();
}

void require_two_qubits(const DensityMatrix& rho) {
  const auto& l = rho.layout();
  if (l.size() != 2 || l[0].role != Role::Qubit || l[1].role != Role::Qubit) {
    throw ValidationError("concurrence needs a layout of exactly two qubits");
  }
}

Eigen::Matrix4cd spin_flip() {
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  // sigma_y (x) sigma_y
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  return yy;
}

}  // namespace

Eigen::VectorXd clipped_eigenvalues(const Eigen::MatrixXcd& m, const Tolerances& tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < -tol.psd) throw ValidationError("eigenvalue " + std::to_string(ev[i]) + " below -psd tolerance");
    ev[i] = std::max(ev[i], 0.0);
  }
  return ev;
}

double shannon_entropy_bits(const Eigen::Ref<const Eigen::VectorXd>& p) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) h -= p[i] * std::log2(p[i]);
  }
  return h;
}

SchmidtDecomposition schmidt_decomposition(const PureState& psi, std::span<const std::string> left) {
  const auto split = split_indices(psi.layout(), left);
  if (split.kept_layout.empty() || split.rest_layout.empty()) {
    throw ValidationError("a Schmidt cut needs non-empty subsystems on both sides");
  }
  const auto ld = static_cast<Eigen::Index>(split.kept_layout.dimension());
  const auto rd = static_cast<Eigen::Index>(split.rest_layout.dimension());
  Eigen::MatrixXcd m(ld, rd);
  for (std::size_t i = 0; i < split.kept.size(); ++i) {
    m(static_cast<Eigen::Index>(split.kept[i]), static_cast<Eigen::Index>(split.rest[i])) = psi[i];
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  // Eigen returns singular values in decreasing order.
  return {svd.singularValues(), svd.matrixU(), svd.matrixV().conjugate(), split.kept_layout, split.rest_layout};
}

double entanglement_entropy(const PureState& psi, std::span<const std::string> left, const Tolerances& tol) {
  const double n2 = psi.amplitudes().squaredNorm();
  if (!(std::abs(n2 - 1.0) <= tol.norm)) throw ValidationError("entanglement_entropy needs a normalized state");
  const auto sd = schmidt_decomposition(psi, left);
  Eigen::VectorXd p = sd.coefficients.array().square();
  return shannon_entropy_bits(p);
}

double tmsv_entropy_closed_form(double lambda) { return psi_k_entropy_closed_form(lambda, 0); }

double phi_k_entropy_closed_form(double lambda, int k) {
  require_lambda(lambda);
  if (k < 1) throw ValidationError("pair index k must be >= 1");
  return binary_odds_entropy(std::pow(lambda, std::ldexp(1.0, k)));
}

double psi_k_entropy_closed_form(double lambda, int k) {
  require_lambda(lambda);
  if (k < 0) throw ValidationError("stage count k must be >= 0");
  // Geometric distribution with ratio y = lambda^(2^(k+1)):
  // -log(1-y) - y/(1-y) log y.
  const double y = std::pow(lambda, std::ldexp(1.0, k + 1));
  if (y <= 0.0) return 0.0;
  return -std::log2(1.0 - y) - y / (1.0 - y) * std::log2(y);
}

double transferred_entropy_closed_form(double lambda, int k) {
  require_lambda(lambda);
  if (k < 0) throw ValidationError("stage count k must be >= 0");
  if (lambda == 0.0 || k == 0) return 0.0;
  const double l2 = lambda * lambda;
  const double y = std::pow(lambda, std::ldexp(1.0, k + 1));
  return std::log2((1.0 - y) / (1.0 - l2)) -
         (l2 / (1.0 - l2) - std::ldexp(1.0, k) * y / (1.0 - y)) * std::log2(l2);
}

double concurrence(const DensityMatrix& rho, const Tolerances& tol) {
  require_two_qubits(rho);
  // With rho = W W^dagger, the Wootters values are the singular values of W^T (Y x Y) W.
  // Working with W keeps a rank-deficient rho from leaking sqrt(eps) noise into the result.
  const Eigen::Matrix4cd w = psd_factor(rho.matrix(), tol);
  const Eigen::Matrix4cd tau = w.transpose() * spin_flip() * w;
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(tau);
  const Eigen::Vector4d mu = svd.singularValues();  // descending
  return std::clamp(mu[0] - mu[1] - mu[2] - mu[3], 0.0, 1.0);
}

double concurrence_unconjugated(const DensityMatrix& rho) {
  require_two_qubits(rho);
  // Square roots of |eig(rho YY rho YY)| are |eig(W^dagger YY W)|.
  Tolerances loose = kDefaultTolerances;
  loose.psd = 1.0;
  const Eigen::Matrix4cd w = psd_factor(rho.matrix(), loose);
  const Eigen::Matrix4cd kappa = w.adjoint() * spin_flip() * w;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(0.5 * (kappa + kappa.adjoint()), Eigen::EigenvaluesOnly);
  Eigen::Vector4d mu = es.eigenvalues().cwiseAbs();
  std::sort(mu.data(), mu.data() + 4, std::greater<>());
  return std::clamp(mu[0] - mu[1] - mu[2] - mu[3], 0.0, 1.0);
}

double pure_concurrence(const PureState& psi) {
  const auto& l = psi.layout();
  if (l.size() != 2 || l[0].role != Role::Qubit || l[1].role != Role::Qubit) {
    throw ValidationError("pure_concurrence needs a layout of exactly two qubits");
  }
  return 2.0 * std::abs(psi[0] * psi[3] - psi[1] * psi[2]);
}

double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma, const Tolerances& tol) {
  if (rho.dimension() != sigma.dimension() || rho.layout().size() != sigma.layout().size()) {
    throw ValidationError("fidelity needs states on the same layout");
  }
  const Eigen::MatrixXcd s = hermitian_sqrt(rho.matrix(), tol);
  sigma.check_valid(tol);
  Eigen::MatrixXcd inner = s * sigma.matrix() * s;
  inner = 0.5 * (inner + inner.adjoint()).eval();
  const Eigen::VectorXd ev = clipped_eigenvalues(inner, tol);
  return std::clamp(ev.cwiseSqrt().sum(), 0.0, 1.0);
}

double von_neumann_entropy(const DensityMatrix& rho, const Tolerances& tol) {
  return shannon_entropy_bits(clipped_eigenvalues(rho.matrix(), tol));
}

}  // namespace adconv
