#include "adconv/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "adconv/dynamics.hpp"
#include "adconv/errors.hpp"
#include "adconv/metrics.hpp"
#include "adconv/random.hpp"
#include "adconv/rate_distortion.hpp"
#include "adconv/serialization.hpp"

namespace adconv::cli {

namespace {

double round12(double x) {
  if (!std::isfinite(x)) return x;
  return std::stod(format_number(x));
}

std::vector<double> stepped_grid(double lo, double hi, double step) {
  if (!(step > 0.0)) throw ValidationError("grid step must be positive");
  if (hi < lo) throw ValidationError("grid upper bound below lower bound");
  std::vector<double> g;
  for (long i = 0;; ++i) {
    const double x = lo + static_cast<double>(i) * step;
    if (x > hi + 1e-9 * step) break;
    g.push_back(x);
  }
  return g;
}

std::vector<double> default_lambdas() {
  std::vector<double> g;
  for (int i = 1; i <= 19; ++i) g.push_back(0.05 * i);
  return g;
}

std::vector<double> default_vs() {
  std::vector<double> g;
  for (int i = 1; i <= 9; ++i) g.push_back(0.1 * i);
  return g;
}

void require_nonempty(const auto& grid, const char* name) {
  if (grid.empty()) throw ValidationError(std::string(name) + " grid is empty");
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void write_csv(const Table& table, std::ostream& out) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              out << format_number(v);
            } else {
              out << v;
            }
          },
          row[i]);
    }
    out << '\n';
  }
}

void write_json(const Table& table, std::ostream& out) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              if (std::isfinite(v)) {
                obj[table.columns[i]] = round12(v);
              } else {
                obj[table.columns[i]] = nullptr;
              }
            } else {
              obj[table.columns[i]] = v;
            }
          },
          row[i]);
    }
    arr.push_back(std::move(obj));
  }
  out << arr.dump(2) << '\n';
}

Table transfer_table(double lambda, int k, std::size_t n_trunc, double tol, double* max_defect) {
  const auto result = ad_cascade(lambda, k, n_trunc);
  const auto& ledger = result.ledger;
  Table t{{"stage", "E_transferred", "E_transferred_closed_form", "E_transferred_cumulative", "E_residual",
           "E_residual_closed_form", "E_initial", "pair_purity", "pair_fidelity", "residual_fidelity",
           "conservation_defect"},
          {}};
  double cumulative = 0.0;
  double worst = 0.0;
  for (const auto& s : ledger.stages) {
    cumulative += s.e_transferred;
    worst = std::max(worst, s.conservation_defect);
    t.rows.push_back({std::int64_t{s.stage}, s.e_transferred, s.e_transferred_closed_form, cumulative, s.e_residual,
                      s.e_residual_closed_form, ledger.e_initial, s.pair_purity, s.pair_fidelity, s.residual_fidelity,
                      s.conservation_defect});
  }
  if (max_defect) *max_defect = worst;
  if (worst > tol) {
    throw NumericalGuardError("conservation defect " + format_number(worst) + " exceeds tolerance " +
                              format_number(tol));
  }
  return t;
}

Table fig1_table(const std::vector<double>& lambdas, const std::vector<int>& ks) {
  Table t{{"lambda", "k", "E_transferred", "E_total"}, {}};
  for (double lambda : lambdas) {
    const double total = tmsv_entropy_closed_form(lambda);
    for (int k : ks) {
      t.rows.push_back({lambda, std::int64_t{k}, transferred_entropy_closed_form(lambda, k), total});
    }
  }
  return t;
}

Table coherent_sweep_table(const std::vector<double>& alphas, double phase, std::size_t n_trunc) {
  require_aligned(n_trunc, 2);
  Tolerances tol;
  tol.trunc = 1e-10;
  Table t{{"alpha", "phase", "concurrence", "concurrence_unconjugated", "leakage"}, {}};
  for (double a : alphas) {
    const auto coh = make_coherent(std::polar(a, phase), n_trunc, tol);
    const auto ad = single_mode_ad(coh.state, 2);
    t.rows.push_back({a, phase, concurrence(ad.qubits), concurrence_unconjugated(ad.qubits), coh.leakage});
  }
  return t;
}

Table thermal_rd_table(const std::vector<double>& vs, const std::vector<int>& ks, std::size_t n_trunc,
                       const std::vector<double>& target_distortions) {
  Table t{{"v", "k", "F_formula", "D_formula", "D_sim", "abs_diff", "k_inverse"}, {}};
  for (double d : target_distortions) t.columns.push_back("k_required_D=" + format_number(d));
  for (double v : vs) {
    for (int k : ks) {
      const auto formula = thermal_distortion(v, k);
      const auto sim = simulate_rd_point(v, k, n_trunc);
      const double k_inv = formula.distortion > 0.0 && v > 0.0
                               ? required_qubits(v, formula.distortion).k_real
                               : std::numeric_limits<double>::quiet_NaN();
      std::vector<Cell> row{v, std::int64_t{k}, formula.fidelity, formula.distortion, sim.distortion,
                            std::abs(sim.distortion - formula.distortion), k_inv};
      for (double d : target_distortions) {
        if (v > 0.0) {
          row.emplace_back(std::int64_t{required_qubits(v, d).k_integer});
        } else {
          row.emplace_back(std::int64_t{1});
        }
      }
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

TrialOutcome evaluate_instance(const std::vector<QubitPairState>& pairs, std::size_t n_trunc, double tol) {
  const int k = static_cast<int>(pairs.size());
  const auto da = da_convert(pairs, n_trunc);
  const std::array<std::string, 1> cut{"A"};
  double pair_sum = 0.0;
  for (const auto& p : pairs) {
    const std::array<std::string, 1> pc{p.state().layout()[0].label};
    pair_sum += entanglement_entropy(p.state(), pc);
  }
  const double e_ab = entanglement_entropy(*da.cv_pure, cut);
  const auto back = ad_convert(*da.cv_pure, k);
  double rt = 1.0;
  for (int j = 0; j < k; ++j) {
    rt = std::min(rt, overlap(back.pairs[static_cast<std::size_t>(j)].state(), pairs[static_cast<std::size_t>(j)].state()));
  }
  TrialOutcome o{std::abs(e_ab - pair_sum), da.min_ground_overlap, *da.formula_fidelity, rt, false};
  o.pass = o.additivity_defect < tol && o.ground_overlap > 1.0 - tol && o.formula_fidelity > 1.0 - tol &&
           o.roundtrip_fidelity > 1.0 - tol;
  return o;
}

nlohmann::json instance_to_json(std::uint64_t seed, int trial, std::size_t n_trunc, double tol,
                                const std::vector<QubitPairState>& pairs) {
  auto arr = nlohmann::json::array();
  for (const auto& p : pairs) arr.push_back(to_json(p));
  return {{"seed", seed}, {"trial", trial}, {"k", pairs.size()}, {"n_trunc", n_trunc}, {"tol", tol}, {"pairs", arr}};
}

RoundtripReport roundtrip(std::uint64_t seed, int k, int trials, std::size_t n_trunc, double tol) {
  if (k < 1) throw ValidationError("roundtrip needs --stages >= 1");
  if (trials < 0) throw ValidationError("trial count must be >= 0");
  if (n_trunc == 0) n_trunc = std::max<std::size_t>(std::size_t{1} << k, 2);
  require_aligned(n_trunc, k);
  RoundtripReport report;
  report.trials = trials;
  report.table.columns = {"trial", "additivity_defect", "ground_overlap", "formula_fidelity", "roundtrip_fidelity",
                          "pass"};
  Sampler sampler(seed);
  for (int t = 0; t < trials; ++t) {
    std::vector<QubitPairState> pairs;
    for (int j = 1; j <= k; ++j) pairs.push_back(sampler.pure_pair(j));
    const auto o = evaluate_instance(pairs, n_trunc, tol);
    report.max_additivity_defect = std::max(report.max_additivity_defect, o.additivity_defect);
    if (o.pass) {
      ++report.passed;
    } else if (!report.first_failure) {
      report.first_failure = instance_to_json(seed, t, n_trunc, tol, pairs);
    }
    report.table.rows.push_back({std::int64_t{t}, o.additivity_defect, o.ground_overlap, o.formula_fidelity,
                                 o.roundtrip_fidelity, std::int64_t{o.pass ? 1 : 0}});
  }
  return report;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Analog/digital entanglement conversion experiments", "adconv"};
  app.require_subcommand(1);

  std::string format = "csv";
  std::string out_path;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", out_path, "Write output to PATH instead of stdout");
  };

  double lambda = 0.8;
  int stages = 3;
  std::size_t truncation = 0;
  double tol = 1e-9;
  auto* transfer = app.add_subcommand("transfer", "A/D cascade on a two-mode squeezed vacuum, per-stage ledger");
  transfer->add_option("--lambda", lambda, "Squeezing lambda = tanh r");
  transfer->add_option("--stages", stages, "Number of stages k");
  transfer->add_option("--truncation", truncation, "Fock cutoff per mode (default 8 * 2^k)");
  transfer->add_option("--tol", tol, "Conservation defect guard");
  add_common(transfer);

  std::vector<double> lambdas = default_lambdas();
  std::vector<int> stage_list;
  auto* fig1 = app.add_subcommand("fig1", "Closed-form transferred entanglement vs lambda for several k");
  fig1->add_option("--lambda", lambdas, "Lambda grid")->delimiter(',');
  fig1->add_option("--stages", stage_list, "Stage counts (default 1..6)")->delimiter(',');
  add_common(fig1);

  double alpha_min = 0.0;
  double alpha_max = 3.5;
  double alpha_step = 0.01;
  double alpha_phase = 0.0;
  auto* sweep = app.add_subcommand("coherent-sweep", "Two-qubit concurrence from single-mode coherent states");
  sweep->add_option("--alpha-min", alpha_min);
  sweep->add_option("--alpha-max", alpha_max);
  sweep->add_option("--alpha-step", alpha_step);
  sweep->add_option("--alpha-phase", alpha_phase, "arg(alpha) in radians; pi/2 gives imaginary alpha");
  sweep->add_option("--truncation", truncation, "Fock cutoff (default 64)");
  add_common(sweep);

  std::vector<double> vs = default_vs();
  std::vector<double> targets{0.01};
  auto* thermal = app.add_subcommand("thermal-rd", "Thermal-source distortion, closed form vs simulation");
  thermal->add_option("--v", vs, "Thermal parameter grid")->delimiter(',');
  thermal->add_option("--stages", stage_list, "Qubit counts (default 1,2,3)")->delimiter(',');
  thermal->add_option("--truncation", truncation, "Fock cutoff (default: leakage < 1e-10)");
  thermal->add_option("--target-d", targets, "Target distortions for the required-qubit columns")->delimiter(',');
  add_common(thermal);

  std::uint64_t seed = 1;
  int trials = 50;
  std::string replay_path;
  std::string failure_path;
  auto* rt = app.add_subcommand("roundtrip", "Randomized D/A -> A/D and additivity property suite");
  rt->add_option("--seed", seed, "Seed for std::mt19937_64");
  rt->add_option("--stages", stages, "Number of qubit pairs k");
  rt->add_option("--trials", trials, "Number of random instances");
  rt->add_option("--truncation", truncation, "Fock cutoff per mode (default 2^k)");
  rt->add_option("--tol", tol, "Property tolerance");
  rt->add_option("--replay", replay_path, "Re-evaluate a serialized instance");
  rt->add_option("--failure-out", failure_path, "Write the first failing instance to PATH");
  add_common(rt);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kValidation;
  }

  auto emit = [&](const Table& table) {
    std::ofstream file;
    std::ostream* sink = &out;
    if (!out_path.empty()) {
      file.open(out_path, std::ios::binary);
      if (!file) throw ValidationError("cannot open output file '" + out_path + "'");
      sink = &file;
    }
    if (format == "json") {
      write_json(table, *sink);
    } else {
      write_csv(table, *sink);
    }
  };

  try {
    if (transfer->parsed()) {
      if (stages < 1) throw ValidationError("--stages must be >= 1");
      if (truncation == 0) truncation = (std::size_t{1} << stages) * 8;
      require_aligned(truncation, stages);
      double defect = 0.0;
      emit(transfer_table(lambda, stages, truncation, tol, &defect));
      err << "conservation defect " << format_number(defect) << '\n';
    } else if (fig1->parsed()) {
      if (stage_list.empty()) stage_list = {1, 2, 3, 4, 5, 6};
      require_nonempty(lambdas, "lambda");
      emit(fig1_table(lambdas, stage_list));
    } else if (sweep->parsed()) {
      if (truncation == 0) truncation = 64;
      require_aligned(truncation, 2);
      emit(coherent_sweep_table(stepped_grid(alpha_min, alpha_max, alpha_step), alpha_phase, truncation));
    } else if (thermal->parsed()) {
      if (stage_list.empty()) stage_list = {1, 2, 3};
      require_nonempty(vs, "v");
      require_nonempty(targets, "target-d");
      if (truncation != 0) {
        for (int k : stage_list) require_aligned(truncation, k);
      }
      emit(thermal_rd_table(vs, stage_list, truncation, targets));
    } else if (rt->parsed()) {
      if (!replay_path.empty()) {
        std::ifstream in(replay_path);
        if (!in) throw ValidationError("cannot open replay file '" + replay_path + "'");
        const auto inst = nlohmann::json::parse(in);
        std::vector<QubitPairState> pairs;
        for (const auto& p : inst.at("pairs")) pairs.push_back(qubit_pair_from_json(p));
        const double replay_tol = inst.value("tol", tol);
        const auto o = evaluate_instance(pairs, inst.at("n_trunc").get<std::size_t>(), replay_tol);
        Table t{{"trial", "additivity_defect", "ground_overlap", "formula_fidelity", "roundtrip_fidelity", "pass"},
                {{std::int64_t{inst.value("trial", 0)}, o.additivity_defect, o.ground_overlap, o.formula_fidelity,
                  o.roundtrip_fidelity, std::int64_t{o.pass ? 1 : 0}}}};
        emit(t);
        return o.pass ? kOk : kPropertyFailure;
      }
      const auto report = roundtrip(seed, stages, trials, truncation, tol);
      emit(report.table);
      err << "roundtrip: " << report.passed << "/" << report.trials << " passed, max additivity defect "
          << format_number(report.max_additivity_defect) << '\n';
      if (report.first_failure) {
        err << "first failing instance: " << report.first_failure->dump() << '\n';
        if (!failure_path.empty()) {
          std::ofstream f(failure_path);
          f << report.first_failure->dump(2) << '\n';
        }
        return kPropertyFailure;
      }
    }
  } catch (const NumericalGuardError& e) {
    err << "numerical guard: " << e.what() << '\n';
    return kNumericalGuard;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kValidation;
  } catch (const nlohmann::json::exception& e) {
    err << "invalid input: " << e.what() << '\n';
    return kValidation;
  }
  return kOk;
}

}  // namespace adconv::cli
