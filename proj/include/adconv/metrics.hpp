#pragma once

#include <span>
#include <string>

#include <Eigen/Dense>

#include "adconv/states.hpp"

namespace adconv {

struct SchmidtDecomposition {
  Eigen::VectorXd coefficients;  // descending, sum of squares = 1
  Eigen::MatrixXcd left;         // columns are left Schmidt vectors
  Eigen::MatrixXcd right;        // columns are right Schmidt vectors
  RegisterLayout left_layout;
  RegisterLayout right_layout;
};

/// Splits psi into the subsystems named in `left` and the rest.
SchmidtDecomposition schmidt_decomposition(const PureState& psi, std::span<const std::string> left);

/// Entropy in bits of the squared Schmidt coefficients across the cut (left | rest).
double entanglement_entropy(const PureState& psi, std::span<const std::string> left,
                            const Tolerances& tol = kDefaultTolerances);

/// Shannon entropy (bits) of a probability vector; 0 log 0 = 0.
double shannon_entropy_bits(const Eigen::Ref<const Eigen::VectorXd>& p);

/// Entanglement of the two-mode squeezed vacuum, cosh^2 r log cosh^2 r - sinh^2 r log sinh^2 r.
double tmsv_entropy_closed_form(double lambda);

/// Entanglement of the stage-k qubit pair, log(1+x) - x/(1+x) log x with x = lambda^(2^k).
double phi_k_entropy_closed_form(double lambda, int k);

/// Entanglement left in the CV modes after k stages; k = 0 gives the TMSV value.
double psi_k_entropy_closed_form(double lambda, int k);

/// Summed form of the first k pair entropies.
double transferred_entropy_closed_form(double lambda, int k);

/// Wootters concurrence of a two-qubit state.
double concurrence(const DensityMatrix& rho, const Tolerances& tol = kDefaultTolerances);

/// Wootters' eigenvalue formula evaluated with rho in place of rho*.
/// Not an entanglement measure: it depends on local phase conventions.
/// Kept to reproduce published coherent-state curves that were computed this way.
double concurrence_unconjugated(const DensityMatrix& rho);

/// 2 |a00 a11 - a01 a10| for a pure two-qubit state.
double pure_concurrence(const PureState& psi);

/// Uhlmann fidelity tr sqrt(sqrt(rho) sigma sqrt(rho)), square-root convention.
double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma,
                        const Tolerances& tol = kDefaultTolerances);

/// von Neumann entropy in bits.
double von_neumann_entropy(const DensityMatrix& rho, const Tolerances& tol = kDefaultTolerances);

/// Eigenvalues of a Hermitian matrix, ascending, with [-psd, 0) clipped to 0.
/// Throws ValidationError for eigenvalues below -psd.
Eigen::VectorXd clipped_eigenvalues(const Eigen::MatrixXcd& m, const Tolerances& tol = kDefaultTolerances);

}  // namespace adconv
