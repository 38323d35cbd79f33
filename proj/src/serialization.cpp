#include "adconv/serialization.hpp"

#include "adconv/errors.hpp"

namespace adconv {

namespace {

nlohmann::json complex_array(const cplx* data, std::size_t n) {
  auto arr = nlohmann::json::array();
  for (std::size_t i = 0; i < n; ++i) arr.push_back({data[i].real(), data[i].imag()});
  return arr;
}

cplx complex_from(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) throw ValidationError("complex entries are [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

nlohmann::json to_json(const RegisterLayout& layout) {
  auto arr = nlohmann::json::array();
  for (const auto& s : layout.subsystems()) {
    arr.push_back({{"role", s.role == Role::CvMode ? "cv-mode" : "qubit"}, {"dim", s.dim}, {"label", s.label}});
  }
  return arr;
}

RegisterLayout layout_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ValidationError("layout must be an array");
  std::vector<Subsystem> subs;
  for (const auto& e : j) {
    const auto role = e.at("role").get<std::string>();
    if (role != "cv-mode" && role != "qubit") throw ValidationError("unknown subsystem role '" + role + "'");
    subs.push_back({role == "cv-mode" ? Role::CvMode : Role::Qubit, e.at("dim").get<std::size_t>(),
                    e.at("label").get<std::string>()});
  }
  return RegisterLayout(std::move(subs));
}

nlohmann::json to_json(const PureState& psi) {
  return {{"layout", to_json(psi.layout())},
          {"amplitudes", complex_array(psi.amplitudes().data(), psi.dimension())}};
}

PureState pure_state_from_json(const nlohmann::json& j) {
  auto layout = layout_from_json(j.at("layout"));
  const auto& amps = j.at("amplitudes");
  Eigen::VectorXcd v(static_cast<Eigen::Index>(amps.size()));
  for (std::size_t i = 0; i < amps.size(); ++i) v[static_cast<Eigen::Index>(i)] = complex_from(amps[i]);
  return PureState(std::move(layout), std::move(v));
}

nlohmann::json to_json(const DensityMatrix& rho) {
  // Eigen is column-major; emit row-major.
  const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = rho.matrix();
  return {{"layout", to_json(rho.layout())},
          {"matrix", complex_array(rm.data(), static_cast<std::size_t>(rm.size()))}};
}

DensityMatrix density_matrix_from_json(const nlohmann::json& j) {
  auto layout = layout_from_json(j.at("layout"));
  const auto dim = static_cast<Eigen::Index>(layout.dimension());
  const auto& flat = j.at("matrix");
  if (flat.size() != static_cast<std::size_t>(dim * dim)) throw ValidationError("matrix entry count mismatch");
  Eigen::MatrixXcd m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = complex_from(flat[static_cast<std::size_t>(r * dim + c)]);
  }
  return DensityMatrix(std::move(layout), std::move(m));
}

nlohmann::json to_json(const QubitPairState& pair) {
  nlohmann::json j{{"stage", pair.stage()}};
  if (pair.is_pure()) {
    j["amplitudes"] = complex_array(pair.state().amplitudes().data(), 4);
  } else {
    j["density"] = to_json(pair.density());
  }
  return j;
}

QubitPairState qubit_pair_from_json(const nlohmann::json& j) {
  const int stage = j.at("stage").get<int>();
  if (j.contains("amplitudes")) {
    const auto& a = j.at("amplitudes");
    if (a.size() != 4) throw ValidationError("pair amplitudes need 4 entries");
    return QubitPairState::pure(stage, {complex_from(a[0]), complex_from(a[1]), complex_from(a[2]), complex_from(a[3])});
  }
  const auto dm = density_matrix_from_json(j.at("density"));
  return QubitPairState::mixed(stage, dm.matrix());
}

nlohmann::json to_json(const ConversionLedger& ledger) {
  auto stages = nlohmann::json::array();
  for (const auto& s : ledger.stages) {
    stages.push_back({{"stage", s.stage},
                      {"E_transferred", s.e_transferred},
                      {"E_transferred_closed_form", s.e_transferred_closed_form},
                      {"E_residual", s.e_residual},
                      {"E_residual_closed_form", s.e_residual_closed_form},
                      {"pair_purity", s.pair_purity},
                      {"pair_fidelity", s.pair_fidelity},
                      {"residual_fidelity", s.residual_fidelity},
                      {"conservation_defect", s.conservation_defect}});
  }
  return {{"lambda", ledger.lambda},
          {"n_trunc", ledger.n_trunc},
          {"leakage", ledger.leakage},
          {"E_initial", ledger.e_initial},
          {"E_initial_closed_form", ledger.e_initial_closed_form},
          {"E_residual", ledger.e_residual},
          {"E_transferred_total", ledger.e_transferred_total},
          {"conservation_defect", ledger.conservation_defect},
          {"stages", std::move(stages)}};
}

}  // namespace adconv
