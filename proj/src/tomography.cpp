#include "bellmax/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "bellmax/scenarios.hpp"

namespace bellmax {

namespace {

// nominal Bloch angles (theta, phi) of the x, y, z axes
constexpr std::array<std::array<double, 2>, 3> kAxisAngles{{
    {std::numbers::pi / 2, 0.0},
    {std::numbers::pi / 2, std::numbers::pi / 2},
    {0.0, 0.0},
}};

const std::array<ComplexMatrix, 4>& pauli_basis() {
  static const std::array<ComplexMatrix, 4> basis{identity(2), pauli_x(), pauli_y(), pauli_z()};
  return basis;
}

double setting_sigma(const NoiseModel& noise) {
  double variance = 0.0;
  for (const auto& stage : noise.stages) {
    if (const auto* e = std::get_if<SettingError>(&stage)) {
      if (!std::isfinite(e->sigma) || e->sigma < 0.0) throw std::invalid_argument("tomography: bad sigma");
      variance += e->sigma * e->sigma;
    } else {
      throw std::invalid_argument("tomography_measure: only setting-error noise applies to tomography");
    }
  }
  return std::sqrt(variance);
}

}  // namespace

void TomographyData::validate() const {
  if (shots_per_setting == 0) throw std::invalid_argument("TomographyData: zero shots per setting");
  for (const auto& row : counts) {
    for (const auto& cell : row) {
      std::uint64_t total = 0;
      for (auto c : cell) total += c;
      if (total != shots_per_setting) {
        throw std::invalid_argument("TomographyData: counts sum to " + std::to_string(total) + ", expected " +
                                    std::to_string(shots_per_setting));
      }
    }
  }
}

PauliExpectations pauli_expectations(const QuantumState& state) {
  if (state.dim() != 4) throw std::invalid_argument("pauli_expectations: two-qubit state required");
  const auto& basis = pauli_basis();
  PauliExpectations e;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) e(i, j) = expectation(state, tensor(basis[i], basis[j]));
  }
  return e;
}

PauliExpectations estimate_expectations(const TomographyData& data) {
  data.validate();
  const double n = static_cast<double>(data.shots_per_setting);
  PauliExpectations e = PauliExpectations::Zero();
  e(0, 0) = 1.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const auto& c = data.counts[i][j];
      const double pp = c[0] / n, pm = c[1] / n, mp = c[2] / n, mm = c[3] / n;
      e(i + 1, j + 1) = pp - pm - mp + mm;
      // single-party marginals averaged over the partner's three settings
      e(i + 1, 0) += (pp + pm - mp - mm) / 3.0;
      e(0, j + 1) += (pp - pm + mp - mm) / 3.0;
    }
  }
  return e;
}

ComplexMatrix linear_inversion(const PauliExpectations& expectations) {
  const auto& basis = pauli_basis();
  ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) rho += expectations(i, j) * tensor(basis[i], basis[j]);
  }
  return rho / 4.0;
}

ReconstructedState project_to_physical(const ComplexMatrix& raw) {
  const ComplexMatrix herm = 0.5 * (raw + raw.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm);
  RealVector values = solver.eigenvalues();
  const double trace = herm.trace().real();
  if (values.minCoeff() >= -1e-12 && std::abs(trace - 1.0) <= 1e-12) {
    return {QuantumState(herm), raw, 0.0};
  }
  values = values.cwiseMax(0.0);
  const double total = values.sum();
  if (!(total > 0.0)) throw std::runtime_error("project_to_physical: no positive spectrum to renormalize");
  values /= total;
  const ComplexMatrix& vecs = solver.eigenvectors();
  ComplexMatrix rho = vecs * values.cast<Complex>().asDiagonal() * vecs.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  const double distance = (rho - raw).norm();
  return {QuantumState(std::move(rho)), raw, distance};
}

TomographyData tomography_measure(const QuantumState& state, std::uint64_t shots_per_setting,
                                  const NoiseModel& noise, Rng& rng) {
  if (state.dim() != 4) throw std::invalid_argument("tomography_measure: two-qubit state required");
  if (shots_per_setting == 0) throw std::invalid_argument("tomography_measure: zero shots per setting");
  const double sigma = setting_sigma(noise);
  std::normal_distribution<double> jitter(0.0, sigma > 0.0 ? sigma : 1.0);
  const auto draw = [&](double nominal) { return sigma > 0.0 ? nominal + jitter(rng) : nominal; };

  TomographyData data;
  data.shots_per_setting = shots_per_setting;
  const std::array<int, 2> first{0, 0};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const ComplexMatrix a = qubit_observable(draw(kAxisAngles[i][0]), draw(kAxisAngles[i][1]));
      const ComplexMatrix b = qubit_observable(draw(kAxisAngles[j][0]), draw(kAxisAngles[j][1]));
      MeasurementSet set{ScenarioId::Chsh, {{a, a}, {b, b}}};
      const OutcomeTable table = true_joint_distribution(state, set, first);
      const auto counts = sample_multinomial(shots_per_setting, table.probabilities, rng);
      std::copy(counts.begin(), counts.end(), data.counts[i][j].begin());
    }
  }
  return data;
}

ReconstructedState reconstruct(const TomographyData& data) {
  return project_to_physical(linear_inversion(estimate_expectations(data)));
}

double chsh_mbv_from_state(const QuantumState& state) {
  if (state.dim() != 4) throw std::invalid_argument("chsh_mbv_from_state: two-qubit state required");
  const PauliExpectations e = pauli_expectations(state);
  const Eigen::Matrix3d t = e.bottomRightCorner<3, 3>();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(t.transpose() * t, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();  // ascending
  return 2.0 * std::sqrt(std::max(ev(2) + ev(1), 0.0));
}

double cvt_run(const QuantumState& state, std::uint64_t shots_per_setting, const NoiseModel& noise, Rng& rng) {
  return chsh_mbv_from_state(reconstruct(tomography_measure(state, shots_per_setting, noise, rng)).rho);
}

std::uint64_t matched_shots_per_setting(std::uint64_t pairs_per_measurement, std::size_t sga_iterations,
                                        std::size_t cvt_repetitions) {
  if (pairs_per_measurement == 0 || sga_iterations == 0 || cvt_repetitions == 0) {
    throw std::invalid_argument("matched_shots_per_setting: arguments must be positive");
  }
  const double sga_budget = static_cast<double>(sga_iterations) * 2.0 * 4.0 * static_cast<double>(pairs_per_measurement);
  const double per_setting = sga_budget / (static_cast<double>(cvt_repetitions) * 9.0);
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(per_setting)));
}

}  // namespace bellmax
