#include "adconv/pipeline.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "adconv/dynamics.hpp"
#include "adconv/errors.hpp"
#include "adconv/metrics.hpp"

namespace adconv {

namespace {

constexpr double kGroundOverlapThreshold = 1.0 - 1e-9;

std::string c_label(int j) { return "C" + std::to_string(j); }
std::string d_label(int j) { return "D" + std::to_string(j); }
std::string q_label(int j) { return "Q" + std::to_string(j); }

// i^e for integer e, exact.
cplx i_power(int e) {
  switch (((e % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

std::size_t require_bipartite_cv(const RegisterLayout& layout) {
  if (layout.size() != 2 || layout[0].label != "A" || layout[1].label != "B" || layout[0].role != Role::CvMode ||
      layout[1].role != Role::CvMode || layout[0].dim != layout[1].dim) {
    throw ValidationError("expected two cv modes 'A', 'B' with equal truncation");
  }
  return layout[0].dim;
}

struct ForwardStage {
  QubitPairState pair;
  PureState residual;
  double purity;
};

ForwardStage run_forward_stage(const PureState& cv, int j) {
  const std::string c = c_label(j);
  const std::string d = d_label(j);
  auto state = tensor(cv, PureState::basis(QubitPairState::layout_for(j), 0));
  state = apply_stage(state, "A", c, j, Direction::Forward);
  state = apply_stage(state, "B", d, j, Direction::Forward);

  const std::array<std::string, 2> pair_labels{c, d};
  const auto reduced = reduced_state(state, pair_labels);
  const double pur = purity(reduced);
  if (pur < kFactorizationPurity) {
    throw FactorizationError("qubit pair " + std::to_string(j) + " did not factor out: reduced purity " +
                             std::to_string(pur) + " < " + std::to_string(kFactorizationPurity));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(reduced.matrix());
  Eigen::Vector4cd top = es.eigenvectors().col(3);
  // Fix the global phase: largest component real and positive.
  Eigen::Index imax = 0;
  top.cwiseAbs().maxCoeff(&imax);
  top *= std::polar(1.0, -std::arg(top[imax]));
  top.normalize();

  auto pair = QubitPairState::pure(j, {top[0], top[1], top[2], top[3]});
  auto rest = contract(pair.state(), state);
  auto residual = PureState::normalized(rest.layout, std::move(rest.amplitudes));
  return {std::move(pair), std::move(residual), pur};
}

}  // namespace

QubitPairState QubitPairState::pure(int stage, const std::array<cplx, 4>& amplitudes, const Tolerances& tol) {
  if (stage < 1) throw ValidationError("pair stage index must be >= 1");
  Eigen::VectorXcd v(4);
  for (int i = 0; i < 4; ++i) v[i] = amplitudes[static_cast<std::size_t>(i)];
  PureState psi(layout_for(stage), std::move(v), tol);
  auto rho = pure_to_dm(psi);
  return QubitPairState(stage, std::move(psi), std::move(rho));
}

QubitPairState QubitPairState::mixed(int stage, const Eigen::Matrix4cd& rho, const Tolerances& tol) {
  if (stage < 1) throw ValidationError("pair stage index must be >= 1");
  DensityMatrix dm(layout_for(stage), Eigen::MatrixXcd(rho), tol);
  dm.check_valid(tol);
  return QubitPairState(stage, std::nullopt, std::move(dm));
}

const PureState& QubitPairState::state() const {
  if (!pure_) throw ValidationError("qubit pair " + std::to_string(stage_) + " is mixed");
  return *pure_;
}

RegisterLayout QubitPairState::layout_for(int stage) {
  return RegisterLayout::qubit(c_label(stage)).concat(RegisterLayout::qubit(d_label(stage)));
}

QubitPairState closed_form_phi(double lambda, int k) {
  if (!(lambda >= 0.0 && lambda < 1.0)) throw ValidationError("lambda must lie in [0, 1)");
  if (k < 1) throw ValidationError("pair index k must be >= 1");
  const double c = std::pow(lambda, std::ldexp(1.0, k - 1));
  const double norm = std::sqrt(1.0 + c * c);
  return QubitPairState::pure(k, {cplx(1.0 / norm), cplx(0.0), cplx(0.0), cplx(-c / norm)});
}

PureState closed_form_psi(double lambda, int k, std::size_t n_trunc) {
  if (!(lambda >= 0.0 && lambda < 1.0)) throw ValidationError("lambda must lie in [0, 1)");
  if (k < 0) throw ValidationError("stage count k must be >= 0");
  if (k > 0) {
    require_aligned(n_trunc, k);
  } else if (n_trunc < 2) {
    throw ValidationError("n_trunc must be >= 2");
  }
  const std::size_t step = std::size_t{1} << k;
  const double ratio = std::pow(lambda, static_cast<double>(step));
  const auto layout = RegisterLayout::cv_mode("A", n_trunc).concat(RegisterLayout::cv_mode("B", n_trunc));
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(layout.dimension()));
  double amp = 1.0;
  for (std::size_t level = 0; level < n_trunc; level += step) {
    v[static_cast<Eigen::Index>(level * n_trunc + level)] = amp;
    amp *= ratio;
  }
  return PureState::normalized(layout, std::move(v));
}

BipartiteAdResult ad_convert(const PureState& cv, int k_stages) {
  const std::size_t n = require_bipartite_cv(cv.layout());
  require_aligned(n, k_stages);
  BipartiteAdResult out{cv, {}, {}};
  for (int j = 1; j <= k_stages; ++j) {
    auto st = run_forward_stage(out.residual, j);
    out.pairs.push_back(std::move(st.pair));
    out.pair_purities.push_back(st.purity);
    out.residual = std::move(st.residual);
  }
  return out;
}

AdCascadeResult ad_cascade(double lambda, int k_stages, std::size_t n_trunc) {
  require_aligned(n_trunc, k_stages);
  auto tmsv = make_tmsv(SqueezingParams::from_lambda(lambda), n_trunc);
  const std::array<std::string, 1> cut{"A"};

  ConversionLedger ledger{};
  ledger.lambda = lambda;
  ledger.n_trunc = n_trunc;
  ledger.leakage = tmsv.leakage;
  ledger.e_initial = entanglement_entropy(tmsv.state, cut);
  ledger.e_initial_closed_form = tmsv_entropy_closed_form(lambda);

  PureState state = tmsv.state;
  std::vector<QubitPairState> pairs;
  double transferred = 0.0;
  for (int j = 1; j <= k_stages; ++j) {
    auto st = run_forward_stage(state, j);
    const std::array<std::string, 1> pair_cut{c_label(j)};
    StageRecord rec{};
    rec.stage = j;
    rec.e_transferred = entanglement_entropy(st.pair.state(), pair_cut);
    rec.e_transferred_closed_form = phi_k_entropy_closed_form(lambda, j);
    rec.e_residual = entanglement_entropy(st.residual, cut);
    rec.e_residual_closed_form = psi_k_entropy_closed_form(lambda, j);
    rec.pair_purity = st.purity;
    rec.pair_fidelity = overlap(closed_form_phi(lambda, j).state(), st.pair.state());
    rec.residual_fidelity = overlap(closed_form_psi(lambda, j, n_trunc), st.residual);
    transferred += rec.e_transferred;
    rec.conservation_defect = std::abs(ledger.e_initial - rec.e_residual - transferred);
    ledger.stages.push_back(rec);
    pairs.push_back(std::move(st.pair));
    state = std::move(st.residual);
  }
  ledger.e_transferred_total = transferred;
  ledger.e_residual = k_stages > 0 ? ledger.stages.back().e_residual : ledger.e_initial;
  ledger.conservation_defect = std::abs(ledger.e_initial - ledger.e_residual - transferred);
  return {std::move(ledger), std::move(state), std::move(pairs)};
}

DaResult da_convert(std::span<const QubitPairState> pairs, std::size_t n_trunc) {
  const int k = static_cast<int>(pairs.size());
  if (k > 0) {
    require_aligned(n_trunc, k);
  } else if (n_trunc < 2) {
    throw ValidationError("n_trunc must be >= 2");
  }
  for (int j = 1; j <= k; ++j) {
    if (pairs[static_cast<std::size_t>(j - 1)].stage() != j) {
      throw ValidationError("qubit pairs must be ordered by stage index 1..k");
    }
  }
  const auto cv_layout = RegisterLayout::cv_mode("A", n_trunc).concat(RegisterLayout::cv_mode("B", n_trunc));
  const std::array<std::string, 2> cv_labels{"A", "B"};
  bool all_pure = true;
  for (const auto& p : pairs) all_pure = all_pure && p.is_pure();

  double min_ground = 1.0;
  if (all_pure) {
    PureState state = PureState::basis(cv_layout, 0);
    for (int j = k; j >= 1; --j) {
      state = tensor(state, pairs[static_cast<std::size_t>(j - 1)].state());
      state = apply_stage(state, "A", c_label(j), j, Direction::Backward);
      state = apply_stage(state, "B", d_label(j), j, Direction::Backward);
      auto rest = contract(PureState::basis(QubitPairState::layout_for(j), 0), state);
      const double ground = rest.amplitudes.squaredNorm();
      min_ground = std::min(min_ground, ground);
      if (ground < kGroundOverlapThreshold) {
        throw ResidualExcitationError("qubit pair " + std::to_string(j) + " left excited after its backward stage (|--> overlap " +
                                          std::to_string(ground) + ")",
                                      static_cast<std::size_t>(j));
      }
      state = PureState::normalized(rest.layout, std::move(rest.amplitudes));
    }
    const double formula = overlap(da_amplitude_formula(pairs, n_trunc), state);
    auto dm = pure_to_dm(state);
    return {std::move(dm), std::move(state), min_ground, formula};
  }

  DensityMatrix rho = pure_to_dm(PureState::basis(cv_layout, 0));
  for (int j = k; j >= 1; --j) {
    rho = tensor(rho, pairs[static_cast<std::size_t>(j - 1)].density());
    rho = apply_stage(rho, "A", c_label(j), j, Direction::Backward);
    rho = apply_stage(rho, "B", d_label(j), j, Direction::Backward);
    const std::array<std::string, 2> pl{c_label(j), d_label(j)};
    const double ground = partial_trace(rho, pl).matrix()(0, 0).real();
    min_ground = std::min(min_ground, ground);
    if (ground < kGroundOverlapThreshold) {
      throw ResidualExcitationError("qubit pair " + std::to_string(j) + " left excited after its backward stage (|--> population " +
                                        std::to_string(ground) + ")",
                                    static_cast<std::size_t>(j));
    }
    rho = partial_trace(rho, cv_labels);
  }
  return {std::move(rho), std::nullopt, min_ground, std::nullopt};
}

PureState da_amplitude_formula(std::span<const QubitPairState> pairs, std::size_t n_trunc) {
  const int k = static_cast<int>(pairs.size());
  const std::size_t levels = std::size_t{1} << k;
  if (n_trunc == 0) n_trunc = std::max<std::size_t>(levels, 2);
  if (k > 0) require_aligned(n_trunc, k);
  const auto layout = RegisterLayout::cv_mode("A", n_trunc).concat(RegisterLayout::cv_mode("B", n_trunc));
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(layout.dimension()));
  auto bit = [](std::size_t x, int j) -> int { return j >= 1 ? static_cast<int>((x >> (j - 1)) & 1U) : 0; };
  for (std::size_t n = 0; n < levels; ++n) {
    for (std::size_t m = 0; m < levels; ++m) {
      cplx amp = 1.0;
      for (int j = 1; j <= k; ++j) {
        const int nj = bit(n, j);
        const int mj = bit(m, j);
        // Boundary convention: n_{k+1} = m_{k+1} = 0.
        const int next = j < k ? bit(n, j + 1) + bit(m, j + 1) : 0;
        const auto& pair = pairs[static_cast<std::size_t>(j - 1)].state();
        amp *= (next % 2 == 0 ? 1.0 : -1.0) * i_power(nj + mj) * pair[static_cast<std::size_t>(2 * nj + mj)];
      }
      v[static_cast<Eigen::Index>(n * n_trunc + m)] = amp;
    }
  }
  return PureState(layout, std::move(v));
}

SingleModeAdResult single_mode_ad(const DensityMatrix& rho, int k_stages) {
  const auto& layout = rho.layout();
  if (layout.size() != 1 || layout[0].role != Role::CvMode) throw ValidationError("single_mode_ad needs a one-mode state");
  const std::string mode = layout[0].label;
  require_aligned(layout[0].dim, k_stages);

  const double s_in = von_neumann_entropy(rho);
  DensityMatrix state = rho;
  std::vector<std::string> qubits;
  for (int j = 1; j <= k_stages; ++j) {
    const std::string q = q_label(j);
    state = tensor(state, pure_to_dm(PureState::basis(RegisterLayout::qubit(q), 0)));
    state = apply_stage(state, mode, q, j, Direction::Forward);
    qubits.push_back(q);
  }
  const double s_before = von_neumann_entropy(state);
  auto reg = partial_trace(state, qubits);
  const std::array<std::string, 1> keep_cv{mode};
  const auto cv = partial_trace(state, keep_cv);
  const double s_q = von_neumann_entropy(reg);
  const double s_cv = von_neumann_entropy(cv);
  return {std::move(reg), s_in, s_before, s_q, s_cv};
}

SingleModeAdResult single_mode_ad(const PureState& psi, int k_stages) {
  const auto& layout = psi.layout();
  if (layout.size() != 1 || layout[0].role != Role::CvMode) throw ValidationError("single_mode_ad needs a one-mode state");
  const std::string mode = layout[0].label;
  require_aligned(layout[0].dim, k_stages);

  PureState state = psi;
  std::vector<std::string> qubits;
  for (int j = 1; j <= k_stages; ++j) {
    const std::string q = q_label(j);
    state = tensor(state, PureState::basis(RegisterLayout::qubit(q), 0));
    state = apply_stage(state, mode, q, j, Direction::Forward);
    qubits.push_back(q);
  }
  auto reg = reduced_state(state, qubits);
  const double s_q = von_neumann_entropy(reg);
  // Global state is pure: both marginals share one spectrum.
  return {std::move(reg), 0.0, 0.0, s_q, s_q};
}

DensityMatrix two_qubit_d_coefficients(const DensityMatrix& rho) {
  const auto& layout = rho.layout();
  if (layout.size() != 1 || layout[0].role != Role::CvMode) {
    throw ValidationError("two_qubit_d_coefficients needs a one-mode state");
  }
  const std::size_t n = layout[0].dim;
  const auto& c = rho.matrix();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(4, 4);
  for (int k1 = 0; k1 < 2; ++k1) {
    for (int k2 = 0; k2 < 2; ++k2) {
      for (int l1 = 0; l1 < 2; ++l1) {
        for (int l2 = 0; l2 < 2; ++l2) {
          cplx d = 0.0;
          for (std::size_t m = 0;; ++m) {
            const std::size_t row = 4 * m + 2 * static_cast<std::size_t>(k1) + static_cast<std::size_t>(k2);
            const std::size_t col = 4 * m + 2 * static_cast<std::size_t>(l1) + static_cast<std::size_t>(l2);
            if (row >= n || col >= n) break;
            d += c(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
          }
          // Ket |k2, k1>: Q1 carries k2.
          out(2 * k2 + k1, 2 * l2 + l1) = i_power(k1 - k2 - l1 + l2) * d;
        }
      }
    }
  }
  return DensityMatrix(RegisterLayout::qubit(q_label(1)).concat(RegisterLayout::qubit(q_label(2))), std::move(out));
}

SingleModeDaResult single_mode_da(const DensityMatrix& qubits, std::size_t n_trunc) {
  const auto& ql = qubits.layout();
  for (const auto& s : ql.subsystems()) {
    if (s.role != Role::Qubit) throw ValidationError("single_mode_da needs a register of qubits");
  }
  const int k = static_cast<int>(ql.size());
  if (k == 0) throw ValidationError("single_mode_da needs at least one qubit");
  require_aligned(n_trunc, k);

  DensityMatrix rho = tensor(pure_to_dm(PureState::basis(RegisterLayout::cv_mode("A", n_trunc), 0)), qubits);
  for (int j = k; j >= 1; --j) {
    rho = apply_stage(rho, "A", ql[static_cast<std::size_t>(j - 1)].label, j, Direction::Backward);
  }
  const auto labels = ql.labels();
  const double ground = partial_trace(rho, labels).matrix()(0, 0).real();
  const std::array<std::string, 1> keep{"A"};
  return {partial_trace(rho, keep), ground};
}

}  // namespace adconv
