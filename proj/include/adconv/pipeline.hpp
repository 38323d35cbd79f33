#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "adconv/states.hpp"

namespace adconv {

/// State of the j-th qubit pair (C_j, D_j). Qubit level 0 is |->, 1 is |+>.
class QubitPairState {
 public:
  /// Amplitudes in the order a00 (|-->), a01 (|-+>), a10 (|+->), a11 (|++>).
  static QubitPairState pure(int stage, const std::array<cplx, 4>& amplitudes,
                             const Tolerances& tol = kDefaultTolerances);
  static QubitPairState mixed(int stage, const Eigen::Matrix4cd& rho, const Tolerances& tol = kDefaultTolerances);

  int stage() const { return stage_; }
  bool is_pure() const { return pure_.has_value(); }
  /// Throws ValidationError for mixed pairs.
  const PureState& state() const;
  const DensityMatrix& density() const { return density_; }

  static RegisterLayout layout_for(int stage);

 private:
  QubitPairState(int stage, std::optional<PureState> pure, DensityMatrix density)
      : stage_(stage), pure_(std::move(pure)), density_(std::move(density)) {}
  int stage_;
  std::optional<PureState> pure_;
  DensityMatrix density_;
};

/// (|--> - lambda^(2^(k-1)) |++>) / sqrt(1 + lambda^(2^k)).
QubitPairState closed_form_phi(double lambda, int k);

/// Residual CV state after k stages: support on |2^k m, 2^k m>, weights lambda^(2^k m),
/// renormalized on the truncated space.
PureState closed_form_psi(double lambda, int k, std::size_t n_trunc);

struct StageRecord {
  int stage;
  double e_transferred;              // measured, bits
  double e_transferred_closed_form;
  double e_residual;                 // CV entanglement after this stage
  double e_residual_closed_form;     // infinite-dimensional closed form
  double pair_purity;                // purity of the pair's reduced state before extraction
  double pair_fidelity;              // |<phi_closed|phi_extracted>|
  double residual_fidelity;          // |<psi_closed (truncated)|residual>|
  double conservation_defect;        // |E_initial - E_residual - sum of transfers so far|
};

struct ConversionLedger {
  double lambda;
  std::size_t n_trunc;
  double leakage;                  // TMSV weight above the cutoff
  double e_initial;                // measured on the truncated TMSV
  double e_initial_closed_form;    // infinite-dimensional value
  double e_residual;
  double e_transferred_total;
  double conservation_defect;
  std::vector<StageRecord> stages;
};

struct AdCascadeResult {
  ConversionLedger ledger;
  PureState residual;
  std::vector<QubitPairState> pairs;
};

struct BipartiteAdResult {
  PureState residual;
  std::vector<QubitPairState> pairs;
  std::vector<double> pair_purities;
};

/// Purity threshold for accepting a pair as factored out of the register.
inline constexpr double kFactorizationPurity = 1.0 - 1e-7;

/// Forward stages 1..k on an arbitrary state of modes "A", "B": after stage j the
/// pair (C_j, D_j) is checked for separability and split off.
/// Throws FactorizationError when a pair's reduced purity falls below the threshold.
BipartiteAdResult ad_convert(const PureState& cv, int k_stages);

/// The full A/D cascade on the truncated TMSV, with the entanglement ledger.
AdCascadeResult ad_cascade(double lambda, int k_stages, std::size_t n_trunc);

struct DaResult {
  DensityMatrix cv;                       // modes "A", "B"
  std::optional<PureState> cv_pure;       // set when every input pair is pure
  double min_ground_overlap;              // min over pairs of <--|rho_pair|--> after its backward stage
  std::optional<double> formula_fidelity; // |<da_amplitude_formula|cv_pure>| for pure inputs
};

/// Backward cascade: |00>_AB, pairs k..1 loaded in that order.
/// Throws ResidualExcitationError naming the pair if it is not returned to |-->.
DaResult da_convert(std::span<const QubitPairState> pairs, std::size_t n_trunc);

/// Direct evaluation of
///   prod_j (-1)^(m_{j+1} + n_{j+1}) i^(m_j + n_j) a^j_{n_j m_j} |n, m>,  n = sum n_j 2^(j-1),
/// with n_{k+1} = m_{k+1} = 0. Output modes "A", "B" truncated at n_trunc (default 2^k).
PureState da_amplitude_formula(std::span<const QubitPairState> pairs, std::size_t n_trunc = 0);

struct SingleModeAdResult {
  DensityMatrix qubits;          // layout Q1..Qk, Q1 (least significant bit) slowest
  double entropy_input;
  double entropy_before_trace;   // whole register after the unitary stages
  double entropy_qubits;         // reduced qubit register
  double entropy_cv;             // reduced CV mode
  /// Total entropy once the register is split: S(cv) + S(qubits) >= entropy_before_trace.
  double entropy_after_trace() const { return entropy_qubits + entropy_cv; }
};

/// Forward stages 1..k on (mode, fresh Q_j), then the CV mode is traced out.
SingleModeAdResult single_mode_ad(const DensityMatrix& rho, int k_stages);
/// Pure-input variant; the register stays a vector, so large truncations are cheap.
SingleModeAdResult single_mode_ad(const PureState& psi, int k_stages);

/// The two-qubit closed form sum i^(k1-k2-l1+l2) d_{k1k2l1l2} |k2,k1><l2,l1| with
/// d_{k1k2l1l2} = sum_m c_{4m+2k1+k2, 4m+2l1+l2}. Layout (Q1, Q2), Q1 holds k2.
DensityMatrix two_qubit_d_coefficients(const DensityMatrix& rho);

struct SingleModeDaResult {
  DensityMatrix cv;            // one mode "A"
  double ground_overlap;       // <0..0|rho_qubits|0..0> after the backward stages
};

/// Appends CV vacuum, applies backward stages k..1, traces out the qubits.
SingleModeDaResult single_mode_da(const DensityMatrix& qubits, std::size_t n_trunc);

}  // namespace adconv
