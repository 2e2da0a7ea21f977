#pragma once

#include <array>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "bellmax/quantum_core.hpp"

namespace bellmax {

enum class ScenarioId { Chsh, Mermin3, Cglmp3 };

/// Party, setting and outcome structure of a Bell test together with the size
/// of its settings vector.
struct BellScenario {
  ScenarioId id;
  std::string_view name;
  int parties;
  int settings_per_party;
  int outcomes_per_setting;
  int params_per_setting;
  int theta_dim;
  int local_dim;

  int state_dim() const;
};

const BellScenario& scenario(ScenarioId id);
std::string_view to_string(ScenarioId id);
/// Accepts "chsh", "mermin3", "cglmp3" (case-insensitive).
ScenarioId parse_scenario(std::string_view name);

/// Measurement angles for every party and setting. Layout is party-major,
/// then setting-major, then parameter-major. Qubit settings take (theta, phi)
/// Bloch angles; qutrit settings take the 8 Gell-Mann coefficients of the
/// basis rotation. Angles are unconstrained.
struct SettingsVector {
  ScenarioId scenario;
  std::vector<double> values;

  SettingsVector(ScenarioId id, std::vector<double> v);
  std::span<const double> local(int party, int setting) const;
};

/// Three rank-1 projectors, outcome labels 0, 1, 2.
struct QutritProjectors {
  std::array<ComplexMatrix, 3> projectors;
};

/// A +/-1 qubit observable or a qutrit projector triple.
using LocalMeasurement = std::variant<ComplexMatrix, QutritProjectors>;

struct MeasurementSet {
  ScenarioId scenario;
  std::vector<std::vector<LocalMeasurement>> local;  // [party][setting]

  const LocalMeasurement& at(int party, int setting) const { return local.at(party).at(setting); }
};

/// Projectors in outcome-index order. For a qubit observable A index 0 is the
/// +1 eigenspace (I + A)/2 and index 1 is the -1 eigenspace (I - A)/2.
std::vector<ComplexMatrix> outcome_projectors(const LocalMeasurement& m);

/// Joint outcome probabilities for one setting choice per party, flattened
/// row-major with party 0 as the most significant index.
struct OutcomeTable {
  int parties = 0;
  int outcomes = 0;
  std::vector<double> probabilities;

  double at(std::span<const int> outcome) const;
  double at(int a, int b) const;
  /// Sum over outcomes of p * prod(sign), sign = +1 for index 0, -1 for index 1.
  double correlator() const;
};

/// A = a(theta, phi) . sigma with a = (sin t cos p, sin t sin p, cos t).
ComplexMatrix qubit_observable(double theta, double phi);
QutritProjectors qutrit_projectors(std::span<const double> thetas);

MeasurementSet build_measurements(ScenarioId id, const SettingsVector& theta);

OutcomeTable true_joint_distribution(const QuantumState& state, const MeasurementSet& measurements,
                                     std::span<const int> settings);

/// The setting choice per party for each of the four terms of the Bell
/// expression, with the sign each correlator enters CHSH / Mermin.
struct BellTerm {
  std::vector<int> settings;
  double coefficient;
};
std::span<const BellTerm> bell_terms(ScenarioId id);

/// |sum_k c_k E_k| for the correlator inequalities.
double combine_correlators(ScenarioId id, std::span<const double> correlators);

/// CGLMP d=3 expression from the four tables for (A0,B0), (A0,B1), (A1,B0),
/// (A1,B1), each indexed [a][b]:
///   [P(A0=B0) + P(B0=A1+1) + P(A1=B1) + P(B1=A0)]
/// - [P(A0=B0-1) + P(B0=A1) + P(A1=B1-1) + P(B1=A0-1)]
/// Signed; the positive side is the nonlocal one.
double cglmp_combination(std::span<const OutcomeTable> tables);

/// Noiseless Bell value. CHSH and Mermin go through Tr(rho B) and are
/// returned as absolute values; CGLMP3 goes through joint probabilities.
double bell_value(const QuantumState& state, const MeasurementSet& measurements);
double bell_value(const QuantumState& state, const SettingsVector& theta);

/// The Bell operator B(theta) for CHSH or Mermin.
ComplexMatrix bell_operator(const MeasurementSet& measurements);

/// Largest quantum value: 2 sqrt 2, 4, 4 / (6 sqrt 3 - 9).
double quantum_maximum(ScenarioId id);
/// Local-hidden-variable bound: 2 for all three expressions.
double local_bound(ScenarioId id);

}  // namespace bellmax
