#include "adconv/rate_distortion.hpp"

#include <cmath>

#include "adconv/dynamics.hpp"
#include "adconv/errors.hpp"
#include "adconv/metrics.hpp"
#include "adconv/pipeline.hpp"

namespace adconv {

double distortion_at(double v, double k) {
  if (!(v >= 0.0 && v < 1.0)) throw ValidationError("thermal parameter v must lie in [0, 1)");
  if (!(k > 0.0)) throw ValidationError("qubit count k must be positive");
  const double x = std::pow(v, std::exp2(k));
  // 1 - sqrt(1 - x) without cancellation.
  return x / (1.0 + std::sqrt(1.0 - x));
}

ThermalRDPoint thermal_distortion(double v, int k) {
  if (k < 1) throw ValidationError("qubit count k must be >= 1");
  const double d = distortion_at(v, k);
  return {v, k, std::sqrt(1.0 - std::pow(v, std::ldexp(1.0, k))), d};
}

RequiredQubits required_qubits(double v, double distortion) {
  if (!(v > 0.0 && v < 1.0)) throw ValidationError("required_qubits needs 0 < v < 1");
  if (!(distortion > 0.0 && distortion < 1.0)) throw ValidationError("required_qubits needs 0 < D < 1");
  // 1 - (1-D)^2 = D (2 - D)
  const double k_real = std::log2(std::log(distortion * (2.0 - distortion)) / std::log(v));
  int k_int = static_cast<int>(std::ceil(k_real - 1e-12));
  if (k_int < 1) k_int = 1;
  return {k_real, k_int};
}

std::size_t thermal_truncation(double v, int k, double max_leakage) {
  const std::size_t step = std::size_t{1} << k;
  if (v <= 0.0) return std::max<std::size_t>(step, 2);
  const double levels = std::ceil(std::log(max_leakage) / std::log(v));
  const auto raw = static_cast<std::size_t>(std::max(levels, 2.0));
  return ((raw + step - 1) / step) * step;
}

ThermalRoundTrip thermal_round_trip(double v, int k, std::size_t n_trunc) {
  require_aligned(n_trunc, k);
  auto thermal = make_thermal(v, n_trunc);
  auto ad = single_mode_ad(thermal.state, k);
  auto da = single_mode_da(ad.qubits, n_trunc);
  return {std::move(thermal.state), std::move(da.cv), std::move(ad.qubits), thermal.leakage};
}

ThermalRDPoint simulate_rd_point(double v, int k, std::size_t n_trunc) {
  if (!(v >= 0.0 && v < 1.0)) throw ValidationError("thermal parameter v must lie in [0, 1)");
  if (n_trunc == 0) n_trunc = thermal_truncation(v, k);
  const auto rt = thermal_round_trip(v, k, n_trunc);
  const double f_trunc = uhlmann_fidelity(rt.input, rt.reconstructed);
  const double f = f_trunc * std::sqrt(1.0 - rt.leakage);
  return {v, k, f, 1.0 - f};
}

double memoryless_defect(const DensityMatrix& qubits) {
  const auto& l = qubits.layout();
  const std::size_t n = l.size();
  const std::size_t dim = l.dimension();
  std::vector<double> joint(dim);
  std::vector<double> p_one(n, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    joint[i] = qubits.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
    for (std::size_t q = 0; q < n; ++q) {
      if ((i / l.stride(q)) % 2 == 1) p_one[q] += joint[i];
    }
  }
  double tv = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    double prod = 1.0;
    for (std::size_t q = 0; q < n; ++q) prod *= ((i / l.stride(q)) % 2 == 1) ? p_one[q] : 1.0 - p_one[q];
    tv += std::abs(joint[i] - prod);
  }
  return 0.5 * tv;
}

}  // namespace adconv
