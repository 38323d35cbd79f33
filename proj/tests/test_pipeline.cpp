#include "doctest.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "adconv/errors.hpp"
#include "adconv/metrics.hpp"
#include "adconv/pipeline.hpp"
#include "test_support.hpp"

using namespace adconv;
using namespace adconv::testing;

namespace {

const std::array<std::string, 1> kCutA{"A"};

// lambda^m on |m, m> for m < levels, embedded in an n x n register.
PureState truncated_tmsv_oracle(double lambda, std::size_t levels, std::size_t n) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n * n));
  for (std::size_t m = 0; m < levels; ++m) v[static_cast<Eigen::Index>(m * n + m)] = std::pow(lambda, m);
  return PureState::normalized(cv_pair(n), std::move(v));
}

Eigen::VectorXd sorted_spectrum(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

DensityMatrix fock(std::size_t n, std::size_t dim) {
  return pure_to_dm(PureState::basis(RegisterLayout::cv_mode("A", dim), n));
}

}  // namespace

TEST_CASE("closed-form pair and residual states") {
  const auto phi = closed_form_phi(0.5, 1).state();
  CHECK(phi[0].real() == doctest::Approx(1 / std::sqrt(1.25)));
  CHECK(phi[3].real() == doctest::Approx(-0.5 / std::sqrt(1.25)));
  CHECK(std::abs(phi[1]) == 0.0);
  CHECK(std::abs(phi[2]) == 0.0);
  const auto psi = closed_form_psi(0.6, 2, 16);
  for (std::size_t a = 0; a < 16; ++a) {
    for (std::size_t b = 0; b < 16; ++b) {
      if (a != b || a % 4 != 0) CHECK(std::abs(psi[a * 16 + b]) == 0.0);
    }
  }
  CHECK(std::abs(psi[4 * 16 + 4] / psi[0] - std::pow(0.6, 4)) < 1e-15);
  CHECK_THROWS_AS(closed_form_phi(0.5, 0), ValidationError);
}

TEST_CASE("ad_cascade") {
  SUBCASE("vacuum input transfers nothing") {
    const auto r = ad_cascade(0.0, 3, 16);
    CHECK(r.ledger.e_initial == doctest::Approx(0.0));
    for (const auto& s : r.ledger.stages) {
      CHECK(s.e_transferred == doctest::Approx(0.0));
      CHECK(s.e_residual == doctest::Approx(0.0));
    }
    for (const auto& p : r.pairs) CHECK(std::abs(p.state()[0]) == doctest::Approx(1.0));
    CHECK(std::abs(r.residual[0]) == doctest::Approx(1.0));
  }
  SUBCASE("lambda = 0.8, three stages") {
    const double lambda = 0.8;
    const auto r = ad_cascade(lambda, 3, 64);
    REQUIRE(r.pairs.size() == 3);
    for (int j = 1; j <= 3; ++j) {
      // Hand oracle: (|--> - lambda^(2^(j-1)) |++>) / norm.
      const double x = std::pow(lambda, std::ldexp(1.0, j - 1));
      Eigen::VectorXcd expect = Eigen::VectorXcd::Zero(4);
      expect[0] = 1.0;
      expect[3] = -x;
      expect.normalize();
      const auto& got = r.pairs[static_cast<std::size_t>(j - 1)].state().amplitudes();
      CHECK(std::abs(expect.dot(got)) == doctest::Approx(1.0).epsilon(1e-12));
      const auto& rec = r.ledger.stages[static_cast<std::size_t>(j - 1)];
      CHECK(rec.pair_purity > 1 - 1e-12);
      CHECK(rec.pair_fidelity > 1 - 1e-12);
      CHECK(rec.residual_fidelity > 1 - 1e-12);
      CHECK(rec.e_transferred == doctest::Approx(rec.e_transferred_closed_form).epsilon(1e-10));
      CHECK(rec.e_residual == doctest::Approx(rec.e_residual_closed_form).epsilon(1e-9));
    }
    CHECK(std::abs(overlap(r.residual, closed_form_psi(lambda, 3, 64))) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("ledger balances across a grid") {
    for (int i = 1; i <= 9; ++i) {
      for (int k = 1; k <= 4; ++k) {
        const auto r = ad_cascade(0.1 * i, k, 64);
        CHECK(r.ledger.conservation_defect < 1e-9);
        double sum = 0.0;
        for (const auto& s : r.ledger.stages) sum += s.e_transferred;
        CHECK(std::abs(sum - r.ledger.e_transferred_total) < 1e-14);
        for (std::size_t s = 1; s < r.ledger.stages.size(); ++s) {
          CHECK(r.ledger.stages[s].e_residual < r.ledger.stages[s - 1].e_residual);
        }
      }
    }
  }
  CHECK_THROWS_AS(ad_cascade(0.5, 3, 12), AlignmentError);
}

TEST_CASE("ad_convert guards") {
  Sampler rng(1);
  const auto layout = cv_pair(4);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(16);
  v[0] = v[4] = v[8] = 1.0;  // |00> + |10> + |20>
  const auto psi = PureState::normalized(layout, v);
  CHECK_THROWS_AS(ad_convert(psi, 1), FactorizationError);
  CHECK_THROWS_AS(ad_convert(random_state(rng, cv_pair(6)), 2), AlignmentError);
  CHECK_THROWS_AS(ad_convert(PureState::basis(RegisterLayout::cv_mode("A", 4), 0), 1), ValidationError);
}

TEST_CASE("da_convert") {
  Sampler rng(21);
  SUBCASE("all pairs in |--> give the vacuum") {
    std::vector<QubitPairState> pairs;
    for (int j = 1; j <= 3; ++j) pairs.push_back(QubitPairState::pure(j, {1.0, 0.0, 0.0, 0.0}));
    const auto r = da_convert(pairs, 8);
    REQUIRE(r.cv_pure.has_value());
    CHECK(std::abs((*r.cv_pure)[0]) == doctest::Approx(1.0));
    CHECK(r.min_ground_overlap == doctest::Approx(1.0));
  }
  SUBCASE("closed-form pairs rebuild the 2^k-level TMSV") {
    for (double lambda : {0.3, 0.8}) {
      std::vector<QubitPairState> pairs;
      for (int j = 1; j <= 3; ++j) pairs.push_back(closed_form_phi(lambda, j));
      const auto r = da_convert(pairs, 16);
      CHECK(overlap(*r.cv_pure, truncated_tmsv_oracle(lambda, 8, 16)) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(*r.formula_fidelity == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("round trip through the forward cascade") {
    const auto fwd = ad_cascade(0.6, 3, 64);
    const auto back = da_convert(fwd.pairs, 64);
    CHECK(overlap(*back.cv_pure, truncated_tmsv_oracle(0.6, 8, 64)) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("k = 1 amplitudes carry the exact phases") {
    for (int trial = 0; trial < 10; ++trial) {
      const auto pair = rng.pure_pair(1);
      const auto& a = pair.state();
      const auto r = da_convert(std::array<QubitPairState, 1>{pair}, 2);
      const auto& out = *r.cv_pure;
      const cplx i(0.0, 1.0);
      CHECK(std::abs(out[0] - a[0]) < 1e-13);
      CHECK(std::abs(out[1] - i * a[1]) < 1e-13);
      CHECK(std::abs(out[2] - i * a[2]) < 1e-13);
      CHECK(std::abs(out[3] + a[3]) < 1e-13);
    }
  }
  SUBCASE("entanglement is additive over random pure pairs") {
    for (int trial = 0; trial < 100; ++trial) {
      const int k = 1 + trial % 3;
      std::vector<QubitPairState> pairs;
      double sum = 0.0;
      for (int j = 1; j <= k; ++j) {
        pairs.push_back(rng.pure_pair(j));
        sum += entanglement_entropy(pairs.back().state(), std::array<std::string, 1>{"C" + std::to_string(j)});
      }
      const auto r = da_convert(pairs, std::size_t{1} << k);
      CHECK(std::abs(entanglement_entropy(*r.cv_pure, kCutA) - sum) < 1e-9);
      CHECK(*r.formula_fidelity > 1 - 1e-10);
      CHECK(r.min_ground_overlap > 1 - 1e-10);
    }
  }
  SUBCASE("mixed pairs: output spectrum is the product spectrum") {
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<QubitPairState> pairs{rng.mixed_pair(1), rng.mixed_pair(2)};
      const auto r = da_convert(pairs, 4);
      CHECK_FALSE(r.cv_pure.has_value());
      const auto product = tensor(pairs[1].density(), pairs[0].density());
      CHECK(max_abs(sorted_spectrum(r.cv.matrix()).cast<cplx>() - sorted_spectrum(product.matrix()).cast<cplx>()) <
            1e-12);
    }
  }
  SUBCASE("guards") {
    std::vector<QubitPairState> misordered{rng.pure_pair(2), rng.pure_pair(1)};
    CHECK_THROWS_AS(da_convert(misordered, 4), ValidationError);
    std::vector<QubitPairState> three{rng.pure_pair(1), rng.pure_pair(2), rng.pure_pair(3)};
    CHECK_THROWS_AS(da_convert(three, 12), AlignmentError);
    CHECK_THROWS_AS(rng.mixed_pair(1).state(), ValidationError);
  }
}

TEST_CASE("single_mode_ad") {
  SUBCASE("Fock states map to their binary digits, Q1 least significant") {
    const auto vac = single_mode_ad(fock(0, 8), 3);
    CHECK(vac.qubits.matrix()(0, 0).real() == doctest::Approx(1.0));
    // 5 = 101b -> Q1=1, Q2=0, Q3=1 -> index 4 + 0 + 1.
    CHECK(single_mode_ad(fock(5, 8), 3).qubits.matrix()(5, 5).real() == doctest::Approx(1.0));
    // 6 = 110b -> Q1=0, Q2=1, Q3=1 -> index 0 + 2 + 1.
    CHECK(single_mode_ad(fock(6, 8), 3).qubits.matrix()(3, 3).real() == doctest::Approx(1.0));
  }
  SUBCASE("thermal input gives independent bits with odds v^(2^(j-1))") {
    const double v = 0.7;
    const auto r = single_mode_ad(make_thermal(v, 8).state, 3);
    for (std::size_t idx = 0; idx < 8; ++idx) {
      double p = 1.0;
      for (int j = 1; j <= 3; ++j) {
        const double odds = std::pow(v, std::ldexp(1.0, j - 1));
        const bool one = (idx >> (3 - j)) & 1U;  // Q1 is the slowest index
        p *= (one ? odds : 1.0) / (1.0 + odds);
      }
      CHECK(r.qubits.matrix()(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(idx)).real() ==
            doctest::Approx(p).epsilon(1e-13));
    }
    CHECK(max_abs(r.qubits.matrix() - Eigen::MatrixXcd(r.qubits.matrix().diagonal().asDiagonal())) < 1e-14);
    CHECK(r.entropy_before_trace == doctest::Approx(r.entropy_input).epsilon(1e-10));
    CHECK(r.entropy_qubits == doctest::Approx(r.entropy_input).epsilon(1e-10));
    CHECK(r.entropy_cv == doctest::Approx(0.0).epsilon(1e-10));
  }
  SUBCASE("tracing never lowers the total entropy") {
    Sampler rng(4);
    for (int trial = 0; trial < 10; ++trial) {
      const auto rho = random_density(rng, RegisterLayout::cv_mode("A", 8), 2);
      const auto r = single_mode_ad(rho, 2);
      CHECK(r.entropy_before_trace == doctest::Approx(r.entropy_input).epsilon(1e-9));
      CHECK(r.entropy_after_trace() >= r.entropy_before_trace - 1e-9);
    }
  }
  SUBCASE("pure and mixed paths agree") {
    const auto c = make_coherent(cplx(0.9, 0.4), 32).state;
    const auto a = single_mode_ad(c, 3);
    const auto b = single_mode_ad(pure_to_dm(c), 3);
    CHECK(max_abs(a.qubits.matrix() - b.qubits.matrix()) < 1e-12);
    CHECK(a.entropy_qubits == doctest::Approx(b.entropy_qubits).epsilon(1e-9));
  }
  CHECK_THROWS_AS(single_mode_ad(fock(0, 6), 2), AlignmentError);
}

TEST_CASE("two-qubit d coefficients match the simulation") {
  Sampler rng(8);
  for (std::size_t n : {4u, 8u, 16u}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto rho = random_density(rng, RegisterLayout::cv_mode("A", n));
      CHECK(max_abs(two_qubit_d_coefficients(rho).matrix() - single_mode_ad(rho, 2).qubits.matrix()) < 1e-13);
    }
  }
  const auto c = pure_to_dm(make_coherent(1.29, 64).state);
  const auto sim = single_mode_ad(c, 2).qubits;
  CHECK(max_abs(two_qubit_d_coefficients(c).matrix() - sim.matrix()) < 1e-13);
  // Regression values for the two-qubit register of |1.29>.
  CHECK(concurrence(sim) == doctest::Approx(0.2398899).epsilon(1e-6));
  CHECK(concurrence_unconjugated(sim) == doctest::Approx(0.9460).epsilon(1e-3));
}

TEST_CASE("single_mode_da") {
  SUBCASE("thermal round trip keeps the low 2^k levels") {
    const double v = 0.6;
    const int k = 3;
    const auto q = single_mode_ad(make_thermal(v, 64).state, k).qubits;
    const auto r = single_mode_da(q, 64);
    CHECK(r.ground_overlap == doctest::Approx(1.0).epsilon(1e-12));
    for (int n = 0; n < 64; ++n) {
      const double expect = n < 8 ? (1 - v) * std::pow(v, n) / (1 - std::pow(v, 8)) : 0.0;
      CHECK(std::abs(r.cv.matrix()(n, n).real() - expect) < 1e-13);
    }
  }
  SUBCASE("Fock states survive the round trip") {
    for (std::size_t n : {0u, 5u, 7u}) {
      const auto q = single_mode_ad(fock(n, 8), 3).qubits;
      const auto r = single_mode_da(q, 8);
      CHECK(r.cv.matrix()(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)).real() ==
            doctest::Approx(1.0).epsilon(1e-13));
    }
  }
  SUBCASE("coherences survive when the input fits in 2^k levels") {
    Sampler rng(30);
    const auto rho = random_density(rng, RegisterLayout::cv_mode("A", 8));
    const auto r = single_mode_da(single_mode_ad(rho, 3).qubits, 8);
    CHECK(max_abs(r.cv.matrix() - rho.matrix()) < 1e-12);
  }
  CHECK_THROWS_AS(single_mode_da(fock(0, 4), 4), ValidationError);
}
