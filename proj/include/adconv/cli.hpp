#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "adconv/pipeline.hpp"

namespace adconv::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kPropertyFailure = 2, kNumericalGuard = 3 };

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// 12 significant digits, '.' decimal separator.
std::string format_number(double x);

void write_csv(const Table& table, std::ostream& out);
/// Array of row objects, keys in column order, numbers rounded like the CSV.
void write_json(const Table& table, std::ostream& out);

Table transfer_table(double lambda, int k, std::size_t n_trunc, double tol, double* max_defect = nullptr);
Table fig1_table(const std::vector<double>& lambdas, const std::vector<int>& ks);
Table coherent_sweep_table(const std::vector<double>& alphas, double phase, std::size_t n_trunc);
Table thermal_rd_table(const std::vector<double>& vs, const std::vector<int>& ks, std::size_t n_trunc,
                       const std::vector<double>& target_distortions);

struct TrialOutcome {
  double additivity_defect;     // |E(psi_AB) - sum_j E(phi_j)|
  double ground_overlap;        // min over pairs after their backward stage
  double formula_fidelity;      // closed-form amplitudes vs simulation
  double roundtrip_fidelity;    // min over pairs after D/A then A/D
  bool pass;
};

TrialOutcome evaluate_instance(const std::vector<QubitPairState>& pairs, std::size_t n_trunc, double tol);

/// Serialized instance for replay: {"seed", "trial", "k", "n_trunc", "tol", "pairs": [...]}.
nlohmann::json instance_to_json(std::uint64_t seed, int trial, std::size_t n_trunc, double tol,
                                const std::vector<QubitPairState>& pairs);

struct RoundtripReport {
  Table table;
  int passed = 0;
  int trials = 0;
  double max_additivity_defect = 0.0;
  std::optional<nlohmann::json> first_failure;
};

RoundtripReport roundtrip(std::uint64_t seed, int k, int trials, std::size_t n_trunc, double tol);

/// Entry point shared by the executable and the tests. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace adconv::cli
