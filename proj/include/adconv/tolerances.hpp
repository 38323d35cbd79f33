#pragma once

namespace adconv {

struct Tolerances {
  double norm = 1e-10;   // |norm - 1|, |trace - 1|
  double herm = 1e-10;   // max |rho - rho^dagger|
  double psd = 1e-9;     // eigenvalues >= -psd
  double trunc = 1e-8;   // allowed truncation leakage
};

inline constexpr Tolerances kDefaultTolerances{};

}  // namespace adconv
