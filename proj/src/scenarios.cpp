#include "bellmax/scenarios.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bellmax {

namespace {

constexpr std::array<BellScenario, 3> kScenarios{{
    {ScenarioId::Chsh, "chsh", 2, 2, 2, 2, 8, 2},
    {ScenarioId::Mermin3, "mermin3", 3, 2, 2, 2, 12, 2},
    {ScenarioId::Cglmp3, "cglmp3", 2, 2, 3, 8, 32, 3},
}};

const std::array<BellTerm, 4>& chsh_terms() {
  static const std::array<BellTerm, 4> terms{{
      {{0, 0}, 1.0},
      {{0, 1}, 1.0},
      {{1, 0}, 1.0},
      {{1, 1}, -1.0},
  }};
  return terms;
}

const std::array<BellTerm, 4>& mermin_terms() {
  static const std::array<BellTerm, 4> terms{{
      {{1, 0, 0}, 1.0},
      {{0, 1, 0}, 1.0},
      {{0, 0, 1}, 1.0},
      {{1, 1, 1}, -1.0},
  }};
  return terms;
}

// Setting pairs in the order expected by cglmp_combination.
const std::array<BellTerm, 4>& cglmp_terms() {
  static const std::array<BellTerm, 4> terms{{
      {{0, 0}, 1.0},
      {{0, 1}, 1.0},
      {{1, 0}, 1.0},
      {{1, 1}, 1.0},
  }};
  return terms;
}

int mod3(int x) { return ((x % 3) + 3) % 3; }

// P(A = B + k) = sum_j P(A = j + k, B = j)
double prob_a_eq_b_plus(const OutcomeTable& t, int k) {
  double p = 0.0;
  for (int j = 0; j < 3; ++j) p += t.at(mod3(j + k), j);
  return p;
}

// P(B = A + k) = sum_j P(A = j, B = j + k)
double prob_b_eq_a_plus(const OutcomeTable& t, int k) {
  double p = 0.0;
  for (int j = 0; j < 3; ++j) p += t.at(j, mod3(j + k));
  return p;
}

void require_state_dim(const QuantumState& state, const BellScenario& sc) {
  if (state.dim() != sc.state_dim()) {
    throw std::invalid_argument("bell_value: state dimension " + std::to_string(state.dim()) +
                                " does not match " + std::string(sc.name) + " (" +
                                std::to_string(sc.state_dim()) + ")");
  }
}

}  // namespace

int BellScenario::state_dim() const {
  int d = 1;
  for (int p = 0; p < parties; ++p) d *= local_dim;
  return d;
}

const BellScenario& scenario(ScenarioId id) {
  for (const auto& sc : kScenarios) {
    if (sc.id == id) return sc;
  }
  throw std::invalid_argument("unknown scenario id");
}

std::string_view to_string(ScenarioId id) { return scenario(id).name; }

ScenarioId parse_scenario(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (const auto& sc : kScenarios) {
    if (sc.name == lower) return sc.id;
  }
  throw std::invalid_argument("unknown scenario '" + std::string(name) +
                              "' (expected chsh, mermin3 or cglmp3)");
}

SettingsVector::SettingsVector(ScenarioId id, std::vector<double> v) : scenario(id), values(std::move(v)) {
  const auto& sc = bellmax::scenario(id);
  if (values.size() != static_cast<std::size_t>(sc.theta_dim)) {
    throw std::invalid_argument("SettingsVector: " + std::string(sc.name) + " expects " +
                                std::to_string(sc.theta_dim) + " parameters, got " +
                                std::to_string(values.size()));
  }
  if (!std::all_of(values.begin(), values.end(), [](double x) { return std::isfinite(x); })) {
    throw std::invalid_argument("SettingsVector: non-finite parameter");
  }
}

std::span<const double> SettingsVector::local(int party, int setting) const {
  const auto& sc = bellmax::scenario(scenario);
  const auto offset =
      static_cast<std::size_t>((party * sc.settings_per_party + setting) * sc.params_per_setting);
  return std::span<const double>(values).subspan(offset, static_cast<std::size_t>(sc.params_per_setting));
}

std::vector<ComplexMatrix> outcome_projectors(const LocalMeasurement& m) {
  if (const auto* obs = std::get_if<ComplexMatrix>(&m)) {
    const ComplexMatrix id = identity(static_cast<int>(obs->rows()));
    return {0.5 * (id + *obs), 0.5 * (id - *obs)};
  }
  const auto& triple = std::get<QutritProjectors>(m).projectors;
  return {triple.begin(), triple.end()};
}

double OutcomeTable::at(std::span<const int> outcome) const {
  std::size_t idx = 0;
  for (int o : outcome) idx = idx * static_cast<std::size_t>(outcomes) + static_cast<std::size_t>(o);
  return probabilities.at(idx);
}

double OutcomeTable::at(int a, int b) const {
  return probabilities.at(static_cast<std::size_t>(a * outcomes + b));
}

double OutcomeTable::correlator() const {
  if (outcomes != 2) throw std::logic_error("OutcomeTable::correlator: requires two-outcome settings");
  double e = 0.0;
  for (std::size_t idx = 0; idx < probabilities.size(); ++idx) {
    // parity of the number of -1 outcomes = parity of set bits
    const bool odd = std::popcount(idx) % 2 == 1;
    e += odd ? -probabilities[idx] : probabilities[idx];
  }
  return e;
}

ComplexMatrix qubit_observable(double theta, double phi) {
  const double x = std::sin(theta) * std::cos(phi);
  const double y = std::sin(theta) * std::sin(phi);
  const double z = std::cos(theta);
  ComplexMatrix a(2, 2);
  a << Complex{z, 0.0}, Complex{x, -y}, Complex{x, y}, Complex{-z, 0.0};
  return a;
}

QutritProjectors qutrit_projectors(std::span<const double> thetas) {
  if (thetas.size() != 8) throw std::invalid_argument("qutrit_projectors: expected 8 coefficients");
  const ComplexMatrix u = unitary_from_hermitian({3, std::vector<double>(thetas.begin(), thetas.end())});
  QutritProjectors out;
  for (int j = 0; j < 3; ++j) out.projectors[j] = u.col(j) * u.col(j).adjoint();
  return out;
}

MeasurementSet build_measurements(ScenarioId id, const SettingsVector& theta) {
  if (theta.scenario != id) throw std::invalid_argument("build_measurements: settings belong to another scenario");
  const auto& sc = scenario(id);
  MeasurementSet set{id, {}};
  set.local.resize(static_cast<std::size_t>(sc.parties));
  for (int p = 0; p < sc.parties; ++p) {
    for (int s = 0; s < sc.settings_per_party; ++s) {
      const auto params = theta.local(p, s);
      if (sc.local_dim == 2) {
        set.local[p].emplace_back(qubit_observable(params[0], params[1]));
      } else {
        set.local[p].emplace_back(qutrit_projectors(params));
      }
    }
  }
  return set;
}

OutcomeTable true_joint_distribution(const QuantumState& state, const MeasurementSet& measurements,
                                     std::span<const int> settings) {
  const auto& sc = scenario(measurements.scenario);
  if (settings.size() != static_cast<std::size_t>(sc.parties)) {
    throw std::invalid_argument("true_joint_distribution: need one setting per party");
  }
  require_state_dim(state, sc);

  std::vector<std::vector<ComplexMatrix>> local;
  for (int p = 0; p < sc.parties; ++p) local.push_back(outcome_projectors(measurements.at(p, settings[p])));

  OutcomeTable table{sc.parties, sc.outcomes_per_setting, {}};
  std::size_t cells = 1;
  for (int p = 0; p < sc.parties; ++p) cells *= static_cast<std::size_t>(sc.outcomes_per_setting);
  table.probabilities.resize(cells);

  std::vector<ComplexMatrix> factors(static_cast<std::size_t>(sc.parties));
  for (std::size_t idx = 0; idx < cells; ++idx) {
    std::size_t rest = idx;
    for (int p = sc.parties - 1; p >= 0; --p) {
      factors[p] = local[p][rest % sc.outcomes_per_setting];
      rest /= sc.outcomes_per_setting;
    }
    const ComplexMatrix proj = tensor(factors);
    const double prob = (state.rho().transpose().cwiseProduct(proj)).sum().real();
    table.probabilities[idx] = std::max(prob, 0.0);
  }
  return table;
}

std::span<const BellTerm> bell_terms(ScenarioId id) {
  switch (id) {
    case ScenarioId::Chsh:
      return chsh_terms();
    case ScenarioId::Mermin3:
      return mermin_terms();
    case ScenarioId::Cglmp3:
      return cglmp_terms();
  }
  throw std::invalid_argument("bell_terms: unknown scenario");
}

double combine_correlators(ScenarioId id, std::span<const double> correlators) {
  if (id == ScenarioId::Cglmp3) throw std::invalid_argument("combine_correlators: CGLMP3 uses probabilities");
  const auto terms = bell_terms(id);
  if (correlators.size() != terms.size()) throw std::invalid_argument("combine_correlators: need 4 correlators");
  double v = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i) v += terms[i].coefficient * correlators[i];
  return std::abs(v);
}

double cglmp_combination(std::span<const OutcomeTable> tables) {
  if (tables.size() != 4) throw std::invalid_argument("cglmp_combination: need 4 tables");
  const OutcomeTable& a0b0 = tables[0];
  const OutcomeTable& a0b1 = tables[1];
  const OutcomeTable& a1b0 = tables[2];
  const OutcomeTable& a1b1 = tables[3];
  const double positive = prob_a_eq_b_plus(a0b0, 0) + prob_b_eq_a_plus(a1b0, 1) +
                          prob_a_eq_b_plus(a1b1, 0) + prob_b_eq_a_plus(a0b1, 0);
  const double negative = prob_a_eq_b_plus(a0b0, -1) + prob_b_eq_a_plus(a1b0, 0) +
                          prob_a_eq_b_plus(a1b1, -1) + prob_b_eq_a_plus(a0b1, -1);
  return positive - negative;
}

ComplexMatrix bell_operator(const MeasurementSet& measurements) {
  const auto& sc = scenario(measurements.scenario);
  if (sc.local_dim != 2) throw std::invalid_argument("bell_operator: only defined for +/-1 observables");
  ComplexMatrix op = ComplexMatrix::Zero(sc.state_dim(), sc.state_dim());
  std::vector<ComplexMatrix> factors(static_cast<std::size_t>(sc.parties));
  for (const auto& term : bell_terms(sc.id)) {
    for (int p = 0; p < sc.parties; ++p) factors[p] = std::get<ComplexMatrix>(measurements.at(p, term.settings[p]));
    op += term.coefficient * tensor(factors);
  }
  return op;
}

double bell_value(const QuantumState& state, const MeasurementSet& measurements) {
  const auto& sc = scenario(measurements.scenario);
  require_state_dim(state, sc);
  if (sc.id == ScenarioId::Cglmp3) {
    std::array<OutcomeTable, 4> tables;
    const auto terms = bell_terms(sc.id);
    for (std::size_t i = 0; i < terms.size(); ++i) {
      tables[i] = true_joint_distribution(state, measurements, terms[i].settings);
    }
    return cglmp_combination(tables);
  }
  return std::abs(expectation(state, bell_operator(measurements)));
}

double bell_value(const QuantumState& state, const SettingsVector& theta) {
  return bell_value(state, build_measurements(theta.scenario, theta));
}

double quantum_maximum(ScenarioId id) {
  switch (id) {
    case ScenarioId::Chsh:
      return 2.0 * std::numbers::sqrt2;
    case ScenarioId::Mermin3:
      return 4.0;
    case ScenarioId::Cglmp3:
      return 4.0 / (6.0 * std::numbers::sqrt3 - 9.0);
  }
  throw std::invalid_argument("quantum_maximum: unknown scenario");
}

double local_bound(ScenarioId) { return 2.0; }

}  // namespace bellmax
