#pragma once

#include <array>
#include <cstdint>

#include <Eigen/Dense>

#include "bellmax/measurement_lab.hpp"
#include "bellmax/quantum_core.hpp"

namespace bellmax {

enum class PauliAxis { X = 0, Y = 1, Z = 2 };

/// Joint outcome counts for the nine two-qubit Pauli setting pairs.
/// counts[i][j][o] is the count for Alice measuring axis i, Bob axis j and
/// joint outcome o = 2 * a + b with a, b in {0: +1, 1: -1}.
struct TomographyData {
  std::uint64_t shots_per_setting = 0;
  std::array<std::array<std::array<std::uint64_t, 4>, 3>, 3> counts{};

  /// Throws std::invalid_argument when shots_per_setting is zero or a
  /// setting's counts do not sum to it.
  void validate() const;
  std::uint64_t total_shots() const { return 9 * shots_per_setting; }
};

struct ReconstructedState {
  QuantumState rho;
  ComplexMatrix raw_linear_inversion;
  double projection_distance = 0.0;  // Frobenius norm of the physicality correction
};

/// Pauli expectation table E(i, j) = <s_i (x) s_j> with index 0 the identity
/// and 1..3 the x, y, z axes; E(0, 0) = 1.
using PauliExpectations = Eigen::Matrix4d;

PauliExpectations pauli_expectations(const QuantumState& state);
PauliExpectations estimate_expectations(const TomographyData& data);

/// rho = 1/4 sum_ij E(i, j) s_i (x) s_j.
ComplexMatrix linear_inversion(const PauliExpectations& expectations);

/// Nearest PSD unit-trace matrix by eigenvalue truncation and renormalization.
/// Matrices already physical within tolerance are returned unchanged.
ReconstructedState project_to_physical(const ComplexMatrix& raw);

/// Multinomial counts for each Pauli pair. Only SettingError stages are
/// accepted in `noise`; they perturb the nominal (theta, phi) axis angles of
/// each party independently for every setting pair.
TomographyData tomography_measure(const QuantumState& state, std::uint64_t shots_per_setting,
                                  const NoiseModel& noise, Rng& rng);

ReconstructedState reconstruct(const TomographyData& data);

/// Closed-form CHSH maximum over all settings: 2 sqrt(t1 + t2), t1 >= t2 the
/// two largest eigenvalues of T^T T with T_ij = <s_i (x) s_j>.
double chsh_mbv_from_state(const QuantumState& state);

/// Measure, reconstruct and maximize once.
double cvt_run(const QuantumState& state, std::uint64_t shots_per_setting, const NoiseModel& noise, Rng& rng);

/// Per-setting shots that give the tomography baseline the same photon budget
/// as an SGA run: iterations * 2 probes * 4 settings * n spread over
/// repetitions * 9 settings, rounded to nearest.
std::uint64_t matched_shots_per_setting(std::uint64_t pairs_per_measurement, std::size_t sga_iterations = 60,
                                        std::size_t cvt_repetitions = 60);

}  // namespace bellmax
