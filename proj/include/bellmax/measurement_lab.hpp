#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "bellmax/scenarios.hpp"
#include "bellmax/spsa.hpp"

namespace bellmax {

/// n photon pairs per joint setting combination per evaluation.
struct FiniteShot {
  std::uint64_t pairs = 1000;
};

/// Fresh Gaussian error (std sigma, radians) on every angle parameter at every
/// evaluation.
struct SettingError {
  double sigma = 0.0;
};

/// Fixed hidden additive offset on the settings vector.
struct Untrusted {
  std::vector<double> offset;
};

using NoiseStage = std::variant<FiniteShot, SettingError, Untrusted>;

/// Ordered list of noise stages. Angle stages (Untrusted, SettingError) are
/// applied in list order, finite sampling last. An empty list is the ideal
/// device.
struct NoiseModel {
  std::vector<NoiseStage> stages;

  static NoiseModel ideal() { return {}; }
  static NoiseModel finite_shot(std::uint64_t pairs) { return {{FiniteShot{pairs}}}; }
  static NoiseModel setting_error(double sigma) { return {{SettingError{sigma}}}; }

  bool is_ideal() const { return stages.empty(); }
  /// Photon pairs per setting combination, 0 when sampling is exact.
  std::uint64_t pairs_per_setting() const;
  /// Throws std::invalid_argument on n = 0, negative sigma, more than one
  /// sampling stage, or an offset whose length differs from theta_dim.
  void validate(std::size_t theta_dim) const;
};

/// Draws a multinomial sample of `trials` over `probabilities` by sequential
/// conditional binomials.
std::vector<std::uint64_t> sample_multinomial(std::uint64_t trials, std::span<const double> probabilities,
                                              Rng& rng);

/// Simulated experiment wrapping a state and a Bell scenario behind a
/// noisy evaluation interface. Owns its random stream and the cumulative
/// photon-pair counter, so one oracle serves one run at a time.
class MeasurementOracle final : public Objective {
 public:
  MeasurementOracle(QuantumState state, ScenarioId scenario, NoiseModel noise, std::uint64_t seed);

  std::size_t dimension() const override;
  double evaluate(std::span<const double> theta) override;
  /// Noiseless value of the settings actually realized by the device (hidden
  /// offset included, random setting error excluded). Consumes no pairs.
  double reference_value(std::span<const double> theta) override;
  std::uint64_t shots_used() const override { return shots_; }
  std::optional<ScenarioId> scenario() const override { return scenario_; }

  const QuantumState& state() const { return state_; }
  /// Pairs consumed by one evaluate() call.
  std::uint64_t shots_per_evaluation() const;

 private:
  friend std::span<const double> hidden_offset(const MeasurementOracle& oracle);

  std::vector<double> realized_settings(std::span<const double> theta, bool with_random_error);

  QuantumState state_;
  ScenarioId scenario_;
  NoiseModel noise_;
  std::vector<double> offset_;  // sum of all Untrusted offsets
  Rng rng_;
  std::uint64_t shots_ = 0;
};

/// Test hook: the offset an untrusted oracle adds to every settings vector.
std::span<const double> hidden_offset(const MeasurementOracle& oracle);

/// Uniform [0, 2 pi) offset per component, drawn from `seed`.
std::vector<double> draw_untrusted_offset(ScenarioId scenario, std::uint64_t seed);

/// Oracle whose settings carry a hidden fixed offset. `extra` stages (for
/// example finite sampling) are appended after the offset.
MeasurementOracle make_untrusted(QuantumState state, ScenarioId scenario, std::uint64_t seed,
                                 NoiseModel extra = {});

/// Independent stream for an oracle derived from a run seed.
std::uint64_t oracle_stream_seed(std::uint64_t run_seed);

}  // namespace bellmax
