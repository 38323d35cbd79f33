#include "adconv/random.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/QR>

namespace adconv {

double Sampler::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Sampler::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

cplx Sampler::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re, im};
}

QubitPairState Sampler::pure_pair(int stage) {
  std::array<cplx, 4> a{};
  double n2 = 0.0;
  for (auto& x : a) {
    x = complex_normal();
    n2 += std::norm(x);
  }
  const double n = std::sqrt(n2);
  for (auto& x : a) x /= n;
  return QubitPairState::pure(stage, a);
}

QubitPairState Sampler::mixed_pair(int stage) {
  Eigen::Matrix4cd g;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) g(r, c) = complex_normal();
  }
  Eigen::Matrix4cd rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return QubitPairState::mixed(stage, rho);
}

Eigen::MatrixXcd Sampler::unitary(Eigen::Index n) {
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) g(r, c) = complex_normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    const cplx d = r(i, i);
    q.col(i) *= std::abs(d) > 0.0 ? d / std::abs(d) : cplx(1.0);
  }
  return q;
}

}  // namespace adconv
