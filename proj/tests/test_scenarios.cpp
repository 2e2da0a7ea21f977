#include <doctest.h>

#include <numbers>

#include "bellmax/presets.hpp"
#include "bellmax/scenarios.hpp"
#include "test_support.hpp"

using namespace bellmax;
using std::numbers::pi;
using std::numbers::sqrt2;

namespace {

std::vector<double> optimal_chsh_angles() { return {0, 0, pi / 2, 0, 3 * pi / 4, pi, 3 * pi / 4, 0}; }

// setting 0 = Y axis, setting 1 = X axis for every party
std::vector<double> mermin_yx_angles() {
  std::vector<double> v;
  for (int p = 0; p < 3; ++p) v.insert(v.end(), {pi / 2, pi / 2, pi / 2, 0.0});
  return v;
}

}  // namespace

TEST_SUITE("scenarios") {

TEST_CASE("scenario descriptors") {
  for (auto id : {ScenarioId::Chsh, ScenarioId::Mermin3, ScenarioId::Cglmp3}) {
    const auto& sc = scenario(id);
    CHECK(sc.theta_dim == sc.parties * sc.settings_per_party * sc.params_per_setting);
    CHECK(parse_scenario(sc.name) == id);
  }
  CHECK(scenario(ScenarioId::Chsh).theta_dim == 8);
  CHECK(scenario(ScenarioId::Mermin3).theta_dim == 12);
  CHECK(scenario(ScenarioId::Cglmp3).theta_dim == 32);
  CHECK(parse_scenario("CHSH") == ScenarioId::Chsh);
  CHECK_THROWS_AS(parse_scenario("cglmp4"), std::invalid_argument);
}

TEST_CASE("SettingsVector validation") {
  CHECK_THROWS_AS(SettingsVector(ScenarioId::Chsh, std::vector<double>(7, 0.0)), std::invalid_argument);
  std::vector<double> bad(8, 0.0);
  bad[3] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(SettingsVector(ScenarioId::Chsh, bad), std::invalid_argument);
}

TEST_CASE("qubit_observable on the Bloch axes") {
  CHECK(max_abs_entry(qubit_observable(0.0, 1.234) - pauli_z()) <= 1e-15);
  CHECK(max_abs_entry(qubit_observable(pi / 2, 0.0) - pauli_x()) <= 1e-15);
  CHECK(max_abs_entry(qubit_observable(pi / 2, pi / 2) - pauli_y()) <= 1e-15);
}

TEST_CASE("qubit observables have eigenvalues +/-1") {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const auto ang = testing::random_angles(2, rng);
    const ComplexMatrix a = qubit_observable(ang[0], ang[1]);
    CHECK(is_hermitian(a, 1e-15));
    CHECK(std::abs(a.trace()) <= 1e-15);
    const auto eig = hermitian_eig(a);
    CHECK(std::abs(eig.eigenvalues(0) + 1.0) <= 1e-9);
    CHECK(std::abs(eig.eigenvalues(1) - 1.0) <= 1e-9);
  }
}

TEST_CASE("qutrit_projectors: identity rotation gives the computational basis") {
  const auto triple = qutrit_projectors(std::vector<double>(8, 0.0));
  for (int j = 0; j < 3; ++j) {
    ComplexMatrix expected = ComplexMatrix::Zero(3, 3);
    expected(j, j) = 1.0;
    CHECK(max_abs_entry(triple.projectors[j] - expected) <= 1e-15);
  }
}

TEST_CASE("qutrit_projectors form a complete orthogonal set") {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = qutrit_projectors(testing::random_angles(8, rng)).projectors;
    CHECK(max_abs_entry(p[0] + p[1] + p[2] - identity(3)) <= 1e-10);
    for (int j = 0; j < 3; ++j) {
      CHECK(is_hermitian(p[j], 1e-12));
      for (int k = 0; k < 3; ++k) {
        const ComplexMatrix expected = j == k ? p[j] : ComplexMatrix::Zero(3, 3);
        CHECK(max_abs_entry(p[j] * p[k] - expected) <= 1e-10);
      }
    }
  }
}

TEST_CASE("build_measurements: CHSH layout") {
  const auto set = build_measurements(ScenarioId::Chsh, {ScenarioId::Chsh, optimal_chsh_angles()});
  const auto obs = [&](int p, int s) { return std::get<ComplexMatrix>(set.at(p, s)); };
  CHECK(max_abs_entry(obs(0, 0) - pauli_z()) <= 1e-15);
  CHECK(max_abs_entry(obs(0, 1) - pauli_x()) <= 1e-15);
  CHECK(max_abs_entry(obs(1, 0) + (pauli_z() + pauli_x()) / sqrt2) <= 1e-15);
  CHECK(max_abs_entry(obs(1, 1) - (pauli_x() - pauli_z()) / sqrt2) <= 1e-15);
}

TEST_CASE("build_measurements: Mermin and CGLMP3 layouts") {
  const auto mermin = build_measurements(ScenarioId::Mermin3, {ScenarioId::Mermin3, mermin_yx_angles()});
  for (int p = 0; p < 3; ++p) {
    CHECK(max_abs_entry(std::get<ComplexMatrix>(mermin.at(p, 0)) - pauli_y()) <= 1e-15);
    CHECK(max_abs_entry(std::get<ComplexMatrix>(mermin.at(p, 1)) - pauli_x()) <= 1e-15);
  }
  const auto cglmp = build_measurements(ScenarioId::Cglmp3, {ScenarioId::Cglmp3, std::vector<double>(32, 0.0)});
  for (int p = 0; p < 2; ++p) {
    for (int s = 0; s < 2; ++s) {
      const auto& proj = std::get<QutritProjectors>(cglmp.at(p, s)).projectors;
      for (int j = 0; j < 3; ++j) CHECK(std::abs(proj[j](j, j) - 1.0) <= 1e-15);
    }
  }
  CHECK_THROWS_AS(build_measurements(ScenarioId::Mermin3, {ScenarioId::Chsh, optimal_chsh_angles()}),
                  std::invalid_argument);
}

TEST_CASE("bell_value reference points") {
  CHECK(bell_value(singlet(), {ScenarioId::Chsh, optimal_chsh_angles()}) ==
        doctest::Approx(2 * sqrt2).epsilon(1e-12));
  CHECK(bell_value(ghz3(), {ScenarioId::Mermin3, mermin_yx_angles()}) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(bell_value(qutrit_max_entangled(), {ScenarioId::Cglmp3, std::vector<double>(32, 0.0)}) ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("bell_value rejects mismatched states") {
  CHECK_THROWS_AS(bell_value(ghz3(), {ScenarioId::Chsh, optimal_chsh_angles()}), std::invalid_argument);
}

TEST_CASE("CHSH and Mermin probabilities route agrees with the operator route") {
  // Tr(rho B) against the correlators of the joint outcome tables
  Rng rng(6);
  for (auto id : {ScenarioId::Chsh, ScenarioId::Mermin3}) {
    const auto& sc = scenario(id);
    for (int trial = 0; trial < 30; ++trial) {
      const auto rho = testing::random_state(sc.state_dim(), rng);
      const SettingsVector theta(id, testing::random_angles(static_cast<std::size_t>(sc.theta_dim), rng));
      const auto set = build_measurements(id, theta);
      std::vector<double> corr;
      for (const auto& term : bell_terms(id)) corr.push_back(true_joint_distribution(rho, set, term.settings).correlator());
      CHECK(std::abs(combine_correlators(id, corr) - bell_value(rho, theta)) <= 1e-12);
    }
  }
}

TEST_CASE("CGLMP3 combination from hand-built tables") {
  // perfectly correlated outcomes for every pair: 3 - 1 = 2
  OutcomeTable diag{2, 3, std::vector<double>(9, 0.0)};
  for (int j = 0; j < 3; ++j) diag.probabilities[j * 3 + j] = 1.0 / 3.0;
  const std::array<OutcomeTable, 4> same{diag, diag, diag, diag};
  CHECK(cglmp_combination(same) == doctest::Approx(2.0));

  // uniform tables contribute 4/3 - 4/3 = 0
  OutcomeTable flat{2, 3, std::vector<double>(9, 1.0 / 9.0)};
  const std::array<OutcomeTable, 4> uniform{flat, flat, flat, flat};
  CHECK(std::abs(cglmp_combination(uniform)) <= 1e-15);

  // deterministic local strategy A0=A1=B0=B1=0 except B0=1: hits P(B0=A1+1)
  // and P(A1=B1), P(B1=A0) plus P(A0=B0-1): 3 - 1 = 2
  OutcomeTable a0b0{2, 3, std::vector<double>(9, 0.0)}, a0b1 = a0b0, a1b0 = a0b0, a1b1 = a0b0;
  a0b0.probabilities[0 * 3 + 1] = 1.0;
  a0b1.probabilities[0] = 1.0;
  a1b0.probabilities[0 * 3 + 1] = 1.0;
  a1b1.probabilities[0] = 1.0;
  const std::array<OutcomeTable, 4> local{a0b0, a0b1, a1b0, a1b1};
  CHECK(cglmp_combination(local) == doctest::Approx(2.0));
}

TEST_CASE("CHSH local bound holds on product states") {
  Rng rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const auto rho = testing::random_product_state(rng);
    const SettingsVector theta(ScenarioId::Chsh, testing::random_angles(8, rng));
    CHECK(bell_value(rho, theta) <= 2.0 + 1e-9);
  }
}

TEST_CASE("CHSH on the singlet never exceeds Tsirelson") {
  Rng rng(9);
  const auto s = singlet();
  for (int trial = 0; trial < 2000; ++trial) {
    CHECK(bell_value(s, {ScenarioId::Chsh, testing::random_angles(8, rng)}) <= 2 * sqrt2 + 1e-9);
  }
}

TEST_CASE("Bloch-angle periodicity") {
  Rng rng(10);
  for (auto id : {ScenarioId::Chsh, ScenarioId::Mermin3}) {
    const auto& sc = scenario(id);
    for (int trial = 0; trial < 50; ++trial) {
      const auto rho = testing::random_state(sc.state_dim(), rng);
      auto angles = testing::random_angles(static_cast<std::size_t>(sc.theta_dim), rng);
      const double before = bell_value(rho, {id, angles});
      angles[static_cast<std::size_t>(trial) % angles.size()] += 2 * pi;
      CHECK(std::abs(bell_value(rho, {id, angles}) - before) <= 1e-10);
    }
  }
}

TEST_CASE("bell_value is finite; CHSH/Mermin values are non-negative") {
  Rng rng(12);
  for (auto id : {ScenarioId::Chsh, ScenarioId::Mermin3, ScenarioId::Cglmp3}) {
    const auto& sc = scenario(id);
    for (int trial = 0; trial < 30; ++trial) {
      const auto rho = testing::random_state(sc.state_dim(), rng);
      const double v = bell_value(rho, {id, testing::random_angles(static_cast<std::size_t>(sc.theta_dim), rng)});
      CHECK(std::isfinite(v));
      if (id != ScenarioId::Cglmp3) CHECK(v >= 0.0);
      CHECK(std::abs(v) <= 4.0 + 1e-9);
    }
  }
}

TEST_CASE("true_joint_distribution tables") {
  const auto z = [](int parties) {
    std::vector<double> v;
    for (int p = 0; p < parties; ++p) v.insert(v.end(), {0.0, 0.0, 0.0, 0.0});
    return v;
  };
  const std::array<int, 2> first{0, 0};
  const auto singlet_t = true_joint_distribution(singlet(), build_measurements(ScenarioId::Chsh, {ScenarioId::Chsh, z(2)}), first);
  CHECK(singlet_t.at(0, 0) == doctest::Approx(0.0));
  CHECK(singlet_t.at(0, 1) == doctest::Approx(0.5));
  CHECK(singlet_t.at(1, 0) == doctest::Approx(0.5));
  CHECK(singlet_t.at(1, 1) == doctest::Approx(0.0));

  ComplexVector ket00 = ComplexVector::Zero(4);
  ket00(0) = 1.0;
  const auto product = true_joint_distribution(QuantumState::pure(ket00),
                                               build_measurements(ScenarioId::Chsh, {ScenarioId::Chsh, z(2)}), first);
  CHECK(product.at(0, 0) == doctest::Approx(1.0));

  const auto qutrit = true_joint_distribution(
      qutrit_max_entangled(), build_measurements(ScenarioId::Cglmp3, {ScenarioId::Cglmp3, std::vector<double>(32, 0.0)}),
      first);
  for (int j = 0; j < 3; ++j) {
    for (int l = 0; l < 3; ++l) CHECK(qutrit.at(j, l) == doctest::Approx(j == l ? 1.0 / 3.0 : 0.0));
  }

  Rng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const auto rho = testing::random_state(9, rng);
    const auto set = build_measurements(ScenarioId::Cglmp3, {ScenarioId::Cglmp3, testing::random_angles(32, rng)});
    const auto t = true_joint_distribution(rho, set, first);
    double total = 0.0;
    for (double p : t.probabilities) {
      CHECK(p >= 0.0);
      total += p;
    }
    CHECK(std::abs(total - 1.0) <= 1e-10);
  }
}

TEST_CASE("quantum_maximum constants") {
  CHECK(quantum_maximum(ScenarioId::Chsh) == doctest::Approx(2.8284271247461903));
  CHECK(quantum_maximum(ScenarioId::Mermin3) == 4.0);
  CHECK(quantum_maximum(ScenarioId::Cglmp3) == doctest::Approx(4.0 / (6.0 * std::sqrt(3.0) - 9.0)).epsilon(1e-15));
}

TEST_CASE("multistart maximization reaches the quantum maxima") {
  Rng rng(14);
  CHECK(testing::multistart_bell_max(singlet(), ScenarioId::Chsh, 5, rng) ==
        doctest::Approx(quantum_maximum(ScenarioId::Chsh)).epsilon(1e-6));
  CHECK(testing::multistart_bell_max(ghz3(), ScenarioId::Mermin3, 5, rng) ==
        doctest::Approx(4.0).epsilon(1e-5));
}

}  // TEST_SUITE
