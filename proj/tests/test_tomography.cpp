#include <doctest.h>

#include "bellmax/presets.hpp"
#include "bellmax/tomography.hpp"
#include "test_support.hpp"

using namespace bellmax;

namespace {

// counts for exact (noise-free, infinitely sampled) data rounded to n shots
TomographyData exact_data(const QuantumState& rho, std::uint64_t n) {
  TomographyData d;
  d.shots_per_setting = n;
  const std::array<ComplexMatrix, 3> axes{pauli_x(), pauli_y(), pauli_z()};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      std::uint64_t used = 0;
      for (int o = 0; o < 4; ++o) {
        const int sa = o / 2 == 0 ? 1 : -1, sb = o % 2 == 0 ? 1 : -1;
        const ComplexMatrix proj =
            tensor((identity(2) + sa * axes[i]) / 2.0, (identity(2) + sb * axes[j]) / 2.0);
        const auto c = o < 3 ? static_cast<std::uint64_t>(std::llround(expectation(rho, proj) * n)) : n - used;
        d.counts[i][j][o] = c;
        used += c;
      }
    }
  }
  return d;
}

double fidelity_with_pure(const QuantumState& rho, const ComplexVector& psi) {
  return (psi.adjoint() * rho.rho() * psi)(0, 0).real();
}

}  // namespace

TEST_SUITE("tomography") {

TEST_CASE("linear inversion of exact expectations recovers the state") {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rho = testing::random_state(4, rng);
    const ComplexMatrix back = linear_inversion(pauli_expectations(rho));
    CHECK(max_abs_entry(back - rho.rho()) <= 1e-12);
    const auto projected = project_to_physical(back);
    CHECK(projected.projection_distance == 0.0);
  }
  const auto mixed = QuantumState::maximally_mixed(4);
  CHECK(max_abs_entry(linear_inversion(pauli_expectations(mixed)) - mixed.rho()) <= 1e-15);
}

TEST_CASE("exact counts invert to the singlet") {
  const auto rec = reconstruct(exact_data(singlet(), 1'000'000));
  CHECK(max_abs_entry(rec.rho.rho() - singlet().rho()) <= 1e-5);
}

TEST_CASE("projection fixes a non-physical estimate") {
  ComplexMatrix raw = singlet().rho();
  raw(0, 0) -= 0.05;
  raw(3, 3) -= 0.05;
  raw(1, 2) += 0.02;
  raw(2, 1) += 0.02;
  const auto rec = project_to_physical(raw);
  CHECK(rec.projection_distance > 0.0);
  CHECK(std::abs(rec.rho.rho().trace().real() - 1.0) <= 1e-12);
  CHECK(hermitian_eig(rec.rho.rho()).eigenvalues.minCoeff() >= -1e-12);
}

TEST_CASE("reconstruction fidelity with 1e5 shots per setting") {
  Rng rng(2);
  ComplexVector psi = ComplexVector::Zero(4);
  psi(1) = 1.0 / std::numbers::sqrt2;
  psi(2) = -1.0 / std::numbers::sqrt2;
  const auto rec = reconstruct(tomography_measure(singlet(), 100'000, NoiseModel::ideal(), rng));
  CHECK(fidelity_with_pure(rec.rho, psi) >= 0.99);
}

TEST_CASE("TomographyData validation") {
  TomographyData d;
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
  d.shots_per_setting = 10;
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
  CHECK(exact_data(singlet(), 10).total_shots() == 90);
}

TEST_CASE("tomography rejects unsupported noise") {
  Rng rng(3);
  CHECK_THROWS_AS(tomography_measure(singlet(), 10, NoiseModel::finite_shot(5), rng), std::invalid_argument);
  CHECK_THROWS_AS(tomography_measure(ghz3(), 10, NoiseModel::ideal(), rng), std::invalid_argument);
  CHECK_THROWS_AS(tomography_measure(singlet(), 0, NoiseModel::ideal(), rng), std::invalid_argument);
}

TEST_CASE("closed-form maximal CHSH value") {
  CHECK(chsh_mbv_from_state(singlet()) == doctest::Approx(2.0 * std::numbers::sqrt2).epsilon(1e-12));
  CHECK(chsh_mbv_from_state(werner(0.5)) == doctest::Approx(std::numbers::sqrt2).epsilon(1e-12));
  ComplexVector ket00 = ComplexVector::Zero(4);
  ket00(0) = 1.0;
  CHECK(chsh_mbv_from_state(QuantumState::pure(ket00)) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("closed form matches multistart search on random states") {
  Rng rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const auto rho = testing::random_state(4, rng, 1 + trial % 2);
    const double closed = chsh_mbv_from_state(rho);
    const double searched = testing::multistart_bell_max(rho, ScenarioId::Chsh, 8, rng);
    CHECK(searched <= closed + 1e-9);
    CHECK(searched == doctest::Approx(closed).epsilon(1e-5));
  }
}

TEST_CASE("no setting beats the closed form") {
  Rng rng(5);
  const auto rho = testing::random_state(4, rng);
  const double closed = chsh_mbv_from_state(rho);
  for (int t = 0; t < 2000; ++t) {
    CHECK(bell_value(rho, SettingsVector(ScenarioId::Chsh, testing::random_angles(8, rng))) <= closed + 1e-9);
  }
}

TEST_CASE("cvt_run on the singlet") {
  Rng rng(6);
  const double many = cvt_run(singlet(), 200'000, NoiseModel::ideal(), rng);
  CHECK(std::abs(many - 2.0 * std::numbers::sqrt2) <= 0.02);
  CHECK(many <= 2.0 * std::numbers::sqrt2 + 1e-9);
  const double noisy = cvt_run(singlet(), 200'000, NoiseModel::setting_error(0.1), rng);
  CHECK(noisy < many);
}

TEST_CASE("more shots shrink the tomography error") {
  const auto mean_error = [](std::uint64_t shots) {
    Rng rng(shots);
    double total = 0.0;
    for (int r = 0; r < 40; ++r) total += std::abs(cvt_run(werner(0.8), shots, NoiseModel::ideal(), rng) - chsh_mbv_from_state(werner(0.8)));
    return total / 40.0;
  };
  const double coarse = mean_error(100), fine = mean_error(10'000);
  CHECK(fine < coarse);
}

TEST_CASE("matched shot budget") {
  // 60 iterations x 2 probes x 4 settings x n  =  60 runs x 9 settings x m
  CHECK(matched_shots_per_setting(1000) == 889);
  CHECK(matched_shots_per_setting(9) == 8);
  CHECK(matched_shots_per_setting(1) == 1);
  CHECK(matched_shots_per_setting(27, 60, 8) == 180);
  CHECK_THROWS_AS(matched_shots_per_setting(0), std::invalid_argument);
}

}  // TEST_SUITE
