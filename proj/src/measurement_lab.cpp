#include "bellmax/measurement_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bellmax {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

std::uint64_t NoiseModel::pairs_per_setting() const {
  for (const auto& stage : stages) {
    if (const auto* shot = std::get_if<FiniteShot>(&stage)) return shot->pairs;
  }
  return 0;
}

void NoiseModel::validate(std::size_t theta_dim) const {
  int sampling_stages = 0;
  for (const auto& stage : stages) {
    std::visit(overloaded{
                   [&](const FiniteShot& s) {
                     if (s.pairs == 0) throw std::invalid_argument("FiniteShot: n must be at least 1");
                     ++sampling_stages;
                   },
                   [](const SettingError& s) {
                     if (!std::isfinite(s.sigma) || s.sigma < 0.0) {
                       throw std::invalid_argument("SettingError: sigma must be finite and non-negative");
                     }
                   },
                   [&](const Untrusted& u) {
                     if (u.offset.size() != theta_dim) {
                       throw std::invalid_argument("Untrusted: offset has " + std::to_string(u.offset.size()) +
                                                   " components, expected " + std::to_string(theta_dim));
                     }
                   },
               },
               stage);
  }
  if (sampling_stages > 1) throw std::invalid_argument("NoiseModel: at most one FiniteShot stage");
}

std::vector<std::uint64_t> sample_multinomial(std::uint64_t trials, std::span<const double> probabilities,
                                              Rng& rng) {
  std::vector<std::uint64_t> counts(probabilities.size(), 0);
  double remaining_mass = 0.0;
  for (double p : probabilities) remaining_mass += std::max(p, 0.0);
  std::uint64_t remaining = trials;
  for (std::size_t i = 0; i + 1 < probabilities.size() && remaining > 0; ++i) {
    const double p = std::max(probabilities[i], 0.0);
    if (remaining_mass <= 0.0) break;
    const double conditional = std::clamp(p / remaining_mass, 0.0, 1.0);
    std::binomial_distribution<std::uint64_t> binom(remaining, conditional);
    counts[i] = binom(rng);
    remaining -= counts[i];
    remaining_mass -= p;
  }
  if (!counts.empty()) counts.back() += remaining;
  return counts;
}

MeasurementOracle::MeasurementOracle(QuantumState state, ScenarioId scenario, NoiseModel noise,
                                     std::uint64_t seed)
    : state_(std::move(state)), scenario_(scenario), noise_(std::move(noise)), rng_(seed) {
  const auto& sc = bellmax::scenario(scenario_);
  if (state_.dim() != sc.state_dim()) {
    throw std::invalid_argument("MeasurementOracle: state dimension " + std::to_string(state_.dim()) +
                                " does not match " + std::string(sc.name));
  }
  noise_.validate(static_cast<std::size_t>(sc.theta_dim));
  offset_.assign(static_cast<std::size_t>(sc.theta_dim), 0.0);
  for (const auto& stage : noise_.stages) {
    if (const auto* u = std::get_if<Untrusted>(&stage)) {
      for (std::size_t i = 0; i < offset_.size(); ++i) offset_[i] += u->offset[i];
    }
  }
}

std::size_t MeasurementOracle::dimension() const {
  return static_cast<std::size_t>(bellmax::scenario(scenario_).theta_dim);
}

std::uint64_t MeasurementOracle::shots_per_evaluation() const {
  return noise_.pairs_per_setting() * bell_terms(scenario_).size();
}

std::vector<double> MeasurementOracle::realized_settings(std::span<const double> theta, bool with_random_error) {
  if (theta.size() != dimension()) {
    throw std::invalid_argument("MeasurementOracle: settings vector has " + std::to_string(theta.size()) +
                                " components, expected " + std::to_string(dimension()));
  }
  std::vector<double> realized(theta.begin(), theta.end());
  for (const auto& stage : noise_.stages) {
    if (const auto* u = std::get_if<Untrusted>(&stage)) {
      for (std::size_t i = 0; i < realized.size(); ++i) realized[i] += u->offset[i];
    } else if (const auto* e = std::get_if<SettingError>(&stage); e && with_random_error && e->sigma > 0.0) {
      std::normal_distribution<double> jitter(0.0, e->sigma);
      for (auto& x : realized) x += jitter(rng_);
    }
  }
  return realized;
}

double MeasurementOracle::evaluate(std::span<const double> theta) {
  const SettingsVector realized(scenario_, realized_settings(theta, true));
  const std::uint64_t pairs = noise_.pairs_per_setting();
  if (pairs == 0) return bell_value(state_, realized);

  const MeasurementSet measurements = build_measurements(scenario_, realized);
  const auto terms = bell_terms(scenario_);
  std::vector<OutcomeTable> empirical;
  empirical.reserve(terms.size());
  for (const auto& term : terms) {
    OutcomeTable table = true_joint_distribution(state_, measurements, term.settings);
    const auto counts = sample_multinomial(pairs, table.probabilities, rng_);
    for (std::size_t i = 0; i < counts.size(); ++i) {
      table.probabilities[i] = static_cast<double>(counts[i]) / static_cast<double>(pairs);
    }
    empirical.push_back(std::move(table));
  }
  shots_ += pairs * terms.size();

  if (scenario_ == ScenarioId::Cglmp3) return cglmp_combination(empirical);
  std::vector<double> correlators;
  correlators.reserve(empirical.size());
  for (const auto& t : empirical) correlators.push_back(t.correlator());
  return combine_correlators(scenario_, correlators);
}

double MeasurementOracle::reference_value(std::span<const double> theta) {
  return bell_value(state_, SettingsVector(scenario_, realized_settings(theta, false)));
}

std::span<const double> hidden_offset(const MeasurementOracle& oracle) { return oracle.offset_; }

std::vector<double> draw_untrusted_offset(ScenarioId scenario, std::uint64_t seed) {
  Rng rng(seed);
  return random_initial_theta(static_cast<std::size_t>(bellmax::scenario(scenario).theta_dim), rng);
}

MeasurementOracle make_untrusted(QuantumState state, ScenarioId scenario, std::uint64_t seed, NoiseModel extra) {
  NoiseModel noise;
  noise.stages.emplace_back(Untrusted{draw_untrusted_offset(scenario, seed)});
  for (auto& stage : extra.stages) noise.stages.push_back(std::move(stage));
  return MeasurementOracle(std::move(state), scenario, std::move(noise), oracle_stream_seed(seed));
}

std::uint64_t oracle_stream_seed(std::uint64_t run_seed) {
  // splitmix64 finalizer
  std::uint64_t z = run_seed + 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace bellmax
