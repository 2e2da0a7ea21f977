#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "bellmax/scenarios.hpp"

namespace bellmax {

using Rng = std::mt19937_64;

/// Gain parameters for the ascent. alpha_k = a / (k+1)^s is the update gain,
/// beta_k = b / (k+1)^t the probe half-width.
struct SpsaConfig {
  double a = 0.2;
  double b = 0.2;
  double s = 2.0;
  double t = 1.0;
  std::size_t iterations = 50;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument for non-positive gains or zero iterations.
  void validate() const;
};

/// Default iteration counts: 50 for CHSH, 80 for Mermin, 100 for CGLMP3.
std::size_t default_iterations(ScenarioId id);

/// Black-box objective maximized by the engine.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual std::size_t dimension() const = 0;
  /// One (possibly noisy, possibly resource-consuming) measurement of V.
  virtual double evaluate(std::span<const double> theta) = 0;
  /// Value reported in telemetry. Must not consume measurement resources;
  /// defaults to evaluate().
  virtual double reference_value(std::span<const double> theta) { return evaluate(theta); }
  /// Cumulative measurement resources consumed so far.
  virtual std::uint64_t shots_used() const { return 0; }
  virtual std::optional<ScenarioId> scenario() const { return std::nullopt; }
};

struct IterationRecord {
  std::size_t k = 0;
  std::vector<double> theta;  // Theta_k
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<double> delta;
  double g = 0.0;
  double v_plus = 0.0;
  double v_minus = 0.0;
  double v_current = 0.0;       // reference value at Theta_k
  std::uint64_t shots_used = 0;  // cumulative, after the two probes
};

struct RunTrace {
  SpsaConfig config;
  std::optional<ScenarioId> scenario;
  std::vector<IterationRecord> records;
  std::vector<double> final_theta;
  double final_value = 0.0;  // reference value at Theta_N
  std::uint64_t total_shots = 0;
};

struct Gains {
  double alpha;
  double beta;
};

Gains gain_schedule(std::size_t k, const SpsaConfig& config);

/// Rademacher vector: each component independently +1 or -1.
std::vector<double> sample_perturbation(std::size_t dim, Rng& rng);

struct StepResult {
  std::vector<double> theta_next;
  IterationRecord record;
};

/// One ascent step: probe V at theta +/- beta_k delta, form
/// g_k = (V+ - V-) / (2 beta_k) and move to theta + alpha_k g_k delta.
StepResult spsa_step(Objective& objective, std::span<const double> theta, std::size_t k,
                     const SpsaConfig& config, Rng& rng);

/// Runs config.iterations steps from theta0. Throws on zero iterations or a
/// dimension mismatch; objective exceptions propagate.
RunTrace run(Objective& objective, std::vector<double> theta0, const SpsaConfig& config, Rng& rng);

/// Each component uniform in [0, 2 pi).
std::vector<double> random_initial_theta(std::size_t dim, Rng& rng);
SettingsVector random_initial_theta(ScenarioId id, Rng& rng);

}  // namespace bellmax
