#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "bellmax/measurement_lab.hpp"
#include "bellmax/spsa.hpp"

namespace bellmax {

enum class ExperimentKind { Single, Convergence, ShotNoiseSweep, SgaVsCvt, Untrusted };

std::string_view to_string(ExperimentKind kind);
/// "single", "fig1", "fig2", "fig3", "fig4".
ExperimentKind parse_experiment(std::string_view name);

/// Textual noise description: "ideal" or a comma-separated list of
/// "shot:n", "angle:sigma", "untrusted".
struct NoiseSpec {
  std::optional<std::uint64_t> pairs;
  std::optional<double> sigma;
  bool untrusted = false;

  std::string to_string() const;
};

NoiseSpec parse_noise(std::string_view text);

/// Noise model for one repetition; the hidden offset of an untrusted device
/// is drawn from `offset_seed`.
NoiseModel make_noise_model(const NoiseSpec& spec, ScenarioId scenario, std::uint64_t offset_seed);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Single;
  ScenarioId scenario = ScenarioId::Chsh;
  std::vector<std::string> states;  // presets or state files; empty selects the experiment default
  SpsaConfig spsa{.iterations = 0};  // iterations == 0 selects the experiment default
  NoiseSpec noise;
  std::size_t repetitions = 0;  // 0 selects the experiment default
  std::uint64_t seed = 1;
  std::filesystem::path out_dir = "bellmax_out";
  std::vector<std::uint64_t> shot_levels;  // fig2
  std::vector<double> sigma_levels;        // fig3
  std::uint64_t pairs_per_measurement = 1000;  // fig3 SGA photon pairs per setting
  std::size_t cvt_repetitions = 60;            // fig3
  std::size_t threads = 0;                     // 0 = hardware concurrency

  /// Fills every unset field with the experiment's default.
  ExperimentConfig resolved() const;
  /// Throws std::invalid_argument for unusable configurations.
  void validate() const;
  nlohmann::json to_json() const;
};

struct Summary {
  std::vector<double> values;
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
  double min = 0.0;
  double max = 0.0;
};

/// Throws std::invalid_argument on empty input.
Summary summarize(std::span<const double> values);
Summary summarize(std::span<const RunTrace> traces);

struct GroupResult {
  std::string label;
  std::string state;
  std::string noise;
  std::optional<double> reference_mbv;
  std::vector<RunTrace> traces;
  std::vector<std::uint64_t> seeds;
  std::vector<std::filesystem::path> trace_files;
  Summary sga;
  std::uint64_t total_shots = 0;
  // fig3 only: per-trial mean tomography estimate and its budget
  std::optional<Summary> cvt;
  std::uint64_t cvt_shots_per_setting = 0;
  std::uint64_t cvt_total_shots = 0;
};

struct ExperimentResult {
  ExperimentConfig config;  // resolved
  std::vector<GroupResult> groups;
  Summary overall;
  std::uint64_t total_shots = 0;
  double wall_time_seconds = 0.0;
  std::filesystem::path summary_file;
};

/// Runs the experiment without touching the filesystem.
ExperimentResult execute_experiment(const ExperimentConfig& config);

/// Validates, runs, then writes one trace CSV per repetition and a JSON
/// summary into config.out_dir. The summary is written atomically after all
/// traces.
ExperimentResult run_experiment(const ExperimentConfig& config);

inline constexpr std::string_view kTraceHeader = "iteration,v_current,v_plus,v_minus,alpha,beta,g,shots_used";

void write_trace_csv(std::ostream& out, const RunTrace& trace);
nlohmann::json summary_json(const ExperimentResult& result);
nlohmann::json summary_json(const Summary& summary);

}  // namespace bellmax
