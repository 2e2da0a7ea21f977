#include "bellmax/spsa.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bellmax {

void SpsaConfig::validate() const {
  const auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (!positive(a) || !positive(b) || !positive(s) || !positive(t)) {
    throw std::invalid_argument("SpsaConfig: gains a, b, s, t must be positive and finite");
  }
  if (iterations == 0) throw std::invalid_argument("SpsaConfig: iterations must be at least 1");
}

std::size_t default_iterations(ScenarioId id) {
  switch (id) {
    case ScenarioId::Chsh:
      return 50;
    case ScenarioId::Mermin3:
      return 80;
    case ScenarioId::Cglmp3:
      return 100;
  }
  return 50;
}

Gains gain_schedule(std::size_t k, const SpsaConfig& config) {
  const double kp1 = static_cast<double>(k) + 1.0;
  return {config.a / std::pow(kp1, config.s), config.b / std::pow(kp1, config.t)};
}

std::vector<double> sample_perturbation(std::size_t dim, Rng& rng) {
  std::vector<double> delta(dim);
  // one random bit per component, taken from a full 64-bit draw at a time
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < dim; ++i) {
    if (i % 64 == 0) bits = rng();
    delta[i] = (bits & 1u) ? 1.0 : -1.0;
    bits >>= 1;
  }
  return delta;
}

StepResult spsa_step(Objective& objective, std::span<const double> theta, std::size_t k,
                     const SpsaConfig& config, Rng& rng) {
  const std::size_t dim = theta.size();
  if (dim != objective.dimension()) {
    throw std::invalid_argument("spsa_step: theta has " + std::to_string(dim) + " components, objective expects " +
                                std::to_string(objective.dimension()));
  }
  IterationRecord rec;
  rec.k = k;
  rec.theta.assign(theta.begin(), theta.end());
  rec.v_current = objective.reference_value(theta);

  const auto [alpha, beta] = gain_schedule(k, config);
  rec.alpha = alpha;
  rec.beta = beta;
  rec.delta = sample_perturbation(dim, rng);

  std::vector<double> plus(dim);
  std::vector<double> minus(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    plus[i] = theta[i] + beta * rec.delta[i];
    minus[i] = theta[i] - beta * rec.delta[i];
  }
  rec.v_plus = objective.evaluate(plus);
  rec.v_minus = objective.evaluate(minus);
  rec.g = (rec.v_plus - rec.v_minus) / (2.0 * beta);
  rec.shots_used = objective.shots_used();

  std::vector<double> next(dim);
  for (std::size_t i = 0; i < dim; ++i) next[i] = theta[i] + alpha * rec.g * rec.delta[i];
  return {std::move(next), std::move(rec)};
}

RunTrace run(Objective& objective, std::vector<double> theta0, const SpsaConfig& config, Rng& rng) {
  config.validate();
  if (theta0.size() != objective.dimension()) {
    throw std::invalid_argument("run: initial point has wrong dimension");
  }
  RunTrace trace;
  trace.config = config;
  trace.scenario = objective.scenario();
  trace.records.reserve(config.iterations);

  std::vector<double> theta = std::move(theta0);
  for (std::size_t k = 0; k < config.iterations; ++k) {
    auto step = spsa_step(objective, theta, k, config, rng);
    theta = std::move(step.theta_next);
    trace.records.push_back(std::move(step.record));
  }
  trace.final_value = objective.reference_value(theta);
  trace.final_theta = std::move(theta);
  trace.total_shots = objective.shots_used();
  return trace;
}

std::vector<double> random_initial_theta(std::size_t dim, Rng& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<double> theta(dim);
  for (auto& x : theta) {
    x = angle(rng);
    if (x >= 2.0 * std::numbers::pi) x = 0.0;  // libstdc++ can round up to the open bound
  }
  return theta;
}

SettingsVector random_initial_theta(ScenarioId id, Rng& rng) {
  return {id, random_initial_theta(static_cast<std::size_t>(scenario(id).theta_dim), rng)};
}

}  // namespace bellmax
