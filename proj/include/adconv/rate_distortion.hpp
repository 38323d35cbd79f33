#pragma once

#include <cstddef>

#include "adconv/states.hpp"

namespace adconv {

struct ThermalRDPoint {
  double v;
  int k;
  double fidelity;
  double distortion;  // 1 - fidelity
};

/// D = 1 - sqrt(1 - v^(2^k)) for a k-qubit conversion of a thermal source.
ThermalRDPoint thermal_distortion(double v, int k);

/// Same formula for a real qubit count k > 0; required_qubits inverts it.
double distortion_at(double v, double k);

struct RequiredQubits {
  double k_real;   // log2( ln(1 - (1-D)^2) / ln v )
  int k_integer;   // ceil(k_real), at least 1
};

/// Qubits needed to reach distortion D on a thermal source with parameter v.
RequiredQubits required_qubits(double v, double distortion);

/// Smallest multiple of 2^k with v^N below `max_leakage`.
std::size_t thermal_truncation(double v, int k, double max_leakage = 1e-10);

struct ThermalRoundTrip {
  DensityMatrix input;          // truncated, renormalized thermal state
  DensityMatrix reconstructed;  // after A/D then D/A
  DensityMatrix qubits;         // A/D output
  double leakage;
};

ThermalRoundTrip thermal_round_trip(double v, int k, std::size_t n_trunc);

/// Fidelity from the simulated round trip; n_trunc = 0 picks thermal_truncation(v, k).
/// The simulated fidelity is measured against the truncated input; the leakage
/// correction factor sqrt(1 - v^N) is applied so the result estimates the untruncated value.
ThermalRDPoint simulate_rd_point(double v, int k, std::size_t n_trunc = 0);

/// Total-variation distance between the joint computational-basis distribution
/// of a qubit register and the product of its single-qubit marginals.
double memoryless_defect(const DensityMatrix& qubits);

}  // namespace adconv
