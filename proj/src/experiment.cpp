#include "bellmax/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "bellmax/presets.hpp"
#include "bellmax/tomography.hpp"

namespace bellmax {

namespace {

constexpr std::uint64_t kOffsetStream = 0x5DEECE66Dull;
constexpr std::uint64_t kTomographyStream = 0xC2B2AE3D27D4EB4Full;

std::string format_double(double x) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

std::string format_level(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

std::string sanitize(std::string_view text) {
  std::string out;
  for (char c : text) {
    const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    out.push_back(keep ? c : '_');
  }
  return out;
}

std::string state_label(const std::string& spec) {
  std::error_code ec;
  const std::filesystem::path p(spec);
  if (std::filesystem::is_regular_file(p, ec)) return sanitize(p.stem().string());
  return sanitize(spec);
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.emplace_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <class T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("bad " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

// One SGA repetition (plus, for fig3, its tomography comparison).
struct Job {
  std::size_t group = 0;
  std::size_t rep = 0;
  std::uint64_t seed = 0;
};

struct JobOutput {
  RunTrace trace;
  std::optional<double> cvt_mean;
};

struct GroupPlan {
  std::string label;
  std::string state_spec;
  NoiseSpec noise;
  std::optional<double> sigma_level;  // fig3
};

std::vector<GroupPlan> plan_groups(const ExperimentConfig& c) {
  std::vector<GroupPlan> groups;
  switch (c.kind) {
    case ExperimentKind::Single:
    case ExperimentKind::Convergence:
      for (const auto& s : c.states) groups.push_back({state_label(s), s, c.noise, std::nullopt});
      break;
    case ExperimentKind::ShotNoiseSweep:
      for (auto n : c.shot_levels) {
        NoiseSpec noise = c.noise;
        noise.pairs = n;
        groups.push_back({"n" + std::to_string(n), c.states.front(), noise, std::nullopt});
      }
      break;
    case ExperimentKind::SgaVsCvt:
      for (double sigma : c.sigma_levels) {
        NoiseSpec noise;
        noise.sigma = sigma;
        noise.pairs = c.pairs_per_measurement;
        groups.push_back({"sigma" + format_level(sigma), c.states.front(), noise, sigma});
      }
      break;
    case ExperimentKind::Untrusted: {
      NoiseSpec noise = c.noise;
      noise.untrusted = true;
      groups.push_back({"untrusted", c.states.front(), noise, std::nullopt});
      break;
    }
  }
  return groups;
}

JobOutput run_job(const ExperimentConfig& c, const GroupPlan& group, const QuantumState& state, std::uint64_t seed) {
  const auto& sc = scenario(c.scenario);
  Rng rng(seed);
  auto theta0 = random_initial_theta(static_cast<std::size_t>(sc.theta_dim), rng);
  NoiseModel noise = make_noise_model(group.noise, c.scenario, oracle_stream_seed(seed ^ kOffsetStream));
  MeasurementOracle oracle(state, c.scenario, std::move(noise), oracle_stream_seed(seed));
  SpsaConfig spsa = c.spsa;
  spsa.seed = seed;

  JobOutput out{run(oracle, std::move(theta0), spsa, rng), std::nullopt};
  if (group.sigma_level) {
    Rng cvt_rng(oracle_stream_seed(seed ^ kTomographyStream));
    const auto shots = matched_shots_per_setting(c.pairs_per_measurement, spsa.iterations, c.cvt_repetitions);
    const NoiseModel cvt_noise = NoiseModel::setting_error(*group.sigma_level);
    double total = 0.0;
    for (std::size_t r = 0; r < c.cvt_repetitions; ++r) total += cvt_run(state, shots, cvt_noise, cvt_rng);
    out.cvt_mean = total / static_cast<double>(c.cvt_repetitions);
  }
  return out;
}

void write_file_atomically(const std::filesystem::path& path, const std::string& content) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Single:
      return "single";
    case ExperimentKind::Convergence:
      return "fig1";
    case ExperimentKind::ShotNoiseSweep:
      return "fig2";
    case ExperimentKind::SgaVsCvt:
      return "fig3";
    case ExperimentKind::Untrusted:
      return "fig4";
  }
  return "unknown";
}

ExperimentKind parse_experiment(std::string_view name) {
  for (auto kind : {ExperimentKind::Single, ExperimentKind::Convergence, ExperimentKind::ShotNoiseSweep,
                    ExperimentKind::SgaVsCvt, ExperimentKind::Untrusted}) {
    if (to_string(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown experiment '" + std::string(name) + "'");
}

std::string NoiseSpec::to_string() const {
  std::vector<std::string> parts;
  if (untrusted) parts.emplace_back("untrusted");
  if (sigma) parts.push_back("angle:" + format_double(*sigma));
  if (pairs) parts.push_back("shot:" + std::to_string(*pairs));
  if (parts.empty()) return "ideal";
  std::string out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out += "," + parts[i];
  return out;
}

NoiseSpec parse_noise(std::string_view text) {
  NoiseSpec spec;
  for (const auto& token : split(text, ',')) {
    if (token == "ideal") continue;
    if (token == "untrusted") {
      spec.untrusted = true;
    } else if (token.starts_with("shot:")) {
      const auto n = parse_number<std::uint64_t>(std::string_view(token).substr(5), "photon pair count");
      if (n == 0) throw std::invalid_argument("noise shot:n needs n >= 1");
      spec.pairs = n;
    } else if (token.starts_with("angle:")) {
      const auto sigma = parse_number<double>(std::string_view(token).substr(6), "angle sigma");
      if (!std::isfinite(sigma) || sigma < 0.0) throw std::invalid_argument("noise angle:sigma needs sigma >= 0");
      spec.sigma = sigma;
    } else {
      throw std::invalid_argument("unknown noise '" + token + "' (expected ideal, shot:n, angle:sigma, untrusted)");
    }
  }
  return spec;
}

NoiseModel make_noise_model(const NoiseSpec& spec, ScenarioId id, std::uint64_t offset_seed) {
  NoiseModel model;
  if (spec.untrusted) model.stages.emplace_back(Untrusted{draw_untrusted_offset(id, offset_seed)});
  if (spec.sigma) model.stages.emplace_back(SettingError{*spec.sigma});
  if (spec.pairs) model.stages.emplace_back(FiniteShot{*spec.pairs});
  return model;
}

ExperimentConfig ExperimentConfig::resolved() const {
  ExperimentConfig c = *this;
  const bool chsh_only = kind == ExperimentKind::ShotNoiseSweep || kind == ExperimentKind::SgaVsCvt ||
                         kind == ExperimentKind::Untrusted;
  if (c.states.empty()) {
    if (kind == ExperimentKind::Convergence) {
      c.states = convergence_presets(scenario);
    } else {
      c.states = {default_preset(chsh_only ? ScenarioId::Chsh : scenario)};
    }
  }
  if (c.spsa.iterations == 0) {
    c.spsa.iterations = kind == ExperimentKind::SgaVsCvt ? 60 : default_iterations(scenario);
  }
  if (c.repetitions == 0) {
    switch (kind) {
      case ExperimentKind::Single:
      case ExperimentKind::Convergence:
        c.repetitions = 1;
        break;
      case ExperimentKind::ShotNoiseSweep:
      case ExperimentKind::SgaVsCvt:
        c.repetitions = 10;
        break;
      case ExperimentKind::Untrusted:
        c.repetitions = 5;
        break;
    }
  }
  if (kind == ExperimentKind::ShotNoiseSweep && c.shot_levels.empty()) c.shot_levels = {200, 500, 1000, 5000, 10000};
  if (kind == ExperimentKind::SgaVsCvt && c.sigma_levels.empty()) c.sigma_levels = {0.02, 0.05, 0.10};
  return c;
}

void ExperimentConfig::validate() const {
  const ExperimentConfig c = resolved();
  if (c.repetitions < 1) throw std::invalid_argument("repetitions must be at least 1");
  c.spsa.validate();
  const bool chsh_only = kind == ExperimentKind::ShotNoiseSweep || kind == ExperimentKind::SgaVsCvt ||
                         kind == ExperimentKind::Untrusted;
  if (chsh_only && scenario != ScenarioId::Chsh) {
    throw std::invalid_argument(std::string(to_string(kind)) + " requires --scenario chsh");
  }
  if (chsh_only && c.states.size() != 1) throw std::invalid_argument(std::string(to_string(kind)) + " takes one state");
  for (const auto& s : c.states) {
    const QuantumState state = resolve_state(s);
    if (state.dim() != bellmax::scenario(scenario).state_dim()) {
      throw std::invalid_argument("state '" + s + "' has dimension " + std::to_string(state.dim()) + ", " +
                                  std::string(bellmax::to_string(scenario)) + " needs " +
                                  std::to_string(bellmax::scenario(scenario).state_dim()));
    }
  }
  if (kind == ExperimentKind::ShotNoiseSweep) {
    for (auto n : c.shot_levels) {
      if (n == 0) throw std::invalid_argument("shot levels must be positive");
    }
  }
  if (kind == ExperimentKind::SgaVsCvt) {
    for (double s : c.sigma_levels) {
      if (!std::isfinite(s) || s < 0.0) throw std::invalid_argument("sigma levels must be non-negative");
    }
    if (c.pairs_per_measurement == 0) throw std::invalid_argument("pairs per measurement must be positive");
    if (c.cvt_repetitions == 0) throw std::invalid_argument("tomography repetitions must be positive");
  }
  if (c.noise.pairs && *c.noise.pairs == 0) throw std::invalid_argument("noise shot:n needs n >= 1");
  if (c.noise.sigma && (!std::isfinite(*c.noise.sigma) || *c.noise.sigma < 0.0)) {
    throw std::invalid_argument("noise angle:sigma needs sigma >= 0");
  }
  if (c.out_dir.empty()) throw std::invalid_argument("output directory must not be empty");
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["experiment"] = std::string(bellmax::to_string(kind));
  j["scenario"] = std::string(bellmax::to_string(scenario));
  j["states"] = states;
  j["spsa"] = {{"a", spsa.a}, {"b", spsa.b}, {"s", spsa.s}, {"t", spsa.t}, {"iterations", spsa.iterations}};
  j["noise"] = noise.to_string();
  j["repetitions"] = repetitions;
  j["seed"] = seed;
  j["out_dir"] = out_dir.string();
  if (kind == ExperimentKind::ShotNoiseSweep) j["shot_levels"] = shot_levels;
  if (kind == ExperimentKind::SgaVsCvt) {
    j["sigma_levels"] = sigma_levels;
    j["pairs_per_measurement"] = pairs_per_measurement;
    j["cvt_repetitions"] = cvt_repetitions;
  }
  return j;
}

Summary summarize(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("summarize: no values");
  Summary s;
  s.values.assign(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(ss / n);
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  return s;
}

Summary summarize(std::span<const RunTrace> traces) {
  std::vector<double> finals;
  finals.reserve(traces.size());
  for (const auto& t : traces) finals.push_back(t.final_value);
  return summarize(finals);
}

ExperimentResult execute_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const ExperimentConfig c = config.resolved();
  const auto plans = plan_groups(c);

  std::vector<QuantumState> states;
  states.reserve(plans.size());
  for (const auto& p : plans) states.push_back(resolve_state(p.state_spec));

  std::vector<Job> jobs;
  for (std::size_t g = 0; g < plans.size(); ++g) {
    for (std::size_t r = 0; r < c.repetitions; ++r) jobs.push_back({g, r, c.seed + r});
  }

  std::vector<std::optional<JobOutput>> outputs(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        outputs[i] = run_job(c, plans[jobs[i].group], states[jobs[i].group], jobs[i].seed);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::size_t threads = c.threads ? c.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, jobs.size());
  std::vector<std::jthread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ExperimentResult result;
  result.config = c;
  std::vector<double> all_finals;
  for (std::size_t g = 0; g < plans.size(); ++g) {
    GroupResult group;
    group.label = plans[g].label;
    group.state = plans[g].state_spec;
    group.noise = plans[g].noise.to_string();
    group.reference_mbv = reference_mbv(plans[g].state_spec, c.scenario);
    std::vector<double> cvt_means;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      if (jobs[i].group != g) continue;
      auto& out = *outputs[i];
      group.total_shots += out.trace.total_shots;
      group.seeds.push_back(jobs[i].seed);
      if (out.cvt_mean) cvt_means.push_back(*out.cvt_mean);
      group.traces.push_back(std::move(out.trace));
    }
    group.sga = summarize(group.traces);
    if (!cvt_means.empty()) {
      group.cvt = summarize(cvt_means);
      group.cvt_shots_per_setting =
          matched_shots_per_setting(c.pairs_per_measurement, c.spsa.iterations, c.cvt_repetitions);
      group.cvt_total_shots = group.cvt_shots_per_setting * 9 * c.cvt_repetitions * cvt_means.size();
    }
    all_finals.insert(all_finals.end(), group.sga.values.begin(), group.sga.values.end());
    result.total_shots += group.total_shots;
    result.groups.push_back(std::move(group));
  }
  result.overall = summarize(all_finals);
  result.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::filesystem::create_directories(config.out_dir);
  ExperimentResult result = execute_experiment(config);
  const std::string prefix(to_string(result.config.kind));
  for (auto& group : result.groups) {
    for (std::size_t r = 0; r < group.traces.size(); ++r) {
      char rep[16];
      std::snprintf(rep, sizeof(rep), "rep%02zu", r);
      const auto path = result.config.out_dir / (prefix + "_" + group.label + "_" + rep + ".csv");
      std::ostringstream csv;
      write_trace_csv(csv, group.traces[r]);
      write_file_atomically(path, csv.str());
      group.trace_files.push_back(path);
    }
  }
  result.summary_file = result.config.out_dir / (prefix + "_summary.json");
  write_file_atomically(result.summary_file, summary_json(result).dump(2) + "\n");
  return result;
}

void write_trace_csv(std::ostream& out, const RunTrace& trace) {
  out << kTraceHeader << '\n';
  for (const auto& r : trace.records) {
    out << r.k << ',' << format_double(r.v_current) << ',' << format_double(r.v_plus) << ','
        << format_double(r.v_minus) << ',' << format_double(r.alpha) << ',' << format_double(r.beta) << ','
        << format_double(r.g) << ',' << r.shots_used << '\n';
  }
}

nlohmann::json summary_json(const Summary& s) {
  return {{"final_values", s.values}, {"mean", s.mean}, {"std", s.std}, {"min", s.min}, {"max", s.max}};
}

nlohmann::json summary_json(const ExperimentResult& result) {
  nlohmann::json j;
  j["config"] = result.config.to_json();
  j["groups"] = nlohmann::json::array();
  for (const auto& g : result.groups) {
    nlohmann::json group = summary_json(g.sga);
    group["label"] = g.label;
    group["state"] = g.state;
    group["noise"] = g.noise;
    group["reference_mbv"] = g.reference_mbv ? nlohmann::json(*g.reference_mbv) : nlohmann::json(nullptr);
    group["seeds"] = g.seeds;
    std::vector<std::string> files;
    for (const auto& f : g.trace_files) files.push_back(f.filename().string());
    group["trace_files"] = files;
    group["total_shots"] = g.total_shots;
    if (g.cvt) {
      nlohmann::json cvt = summary_json(*g.cvt);
      cvt["shots_per_setting"] = g.cvt_shots_per_setting;
      cvt["total_shots"] = g.cvt_total_shots;
      group["cvt"] = cvt;
    }
    j["groups"].push_back(group);
  }
  const auto overall = summary_json(result.overall);
  for (const auto& [key, value] : overall.items()) j[key] = value;
  j["total_shots"] = result.total_shots;
  j["wall_time_seconds"] = result.wall_time_seconds;
  return j;
}

}  // namespace bellmax
