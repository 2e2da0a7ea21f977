// bellmax: run Bell-violation search experiments and write CSV traces plus a
// JSON summary.
//
//   bellmax single --scenario mermin3 --noise shot:500 --reps 3 --out runs/
//   bellmax fig2 --levels 200,1000,10000 --seed 7

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bellmax/experiment.hpp"
#include "bellmax/scenarios.hpp"

namespace {

struct Options {
  std::string scenario = "chsh";
  std::vector<std::string> states;
  std::size_t iterations = 0;
  std::size_t reps = 0;
  std::uint64_t seed = 1;
  std::string noise = "ideal";
  double a = 0.2;
  double b = 0.2;
  double s = 2.0;
  double t = 1.0;
  std::string out = "bellmax_out";
  std::vector<std::string> levels;
  std::uint64_t pairs = 1000;
  std::size_t cvt_reps = 60;
  std::size_t threads = 0;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--scenario", o.scenario, "Bell scenario: chsh, mermin3 or cglmp3")->capture_default_str();
  cmd->add_option("--state", o.states, "State preset (singlet, werner:p, partial:gamma, ghz3, ghz_mixed:p, "
                                       "qutrit_max, qutrit_iso:p, mixed:dim) or state file; repeatable");
  cmd->add_option("--iterations,-N", o.iterations, "SGA iterations (default depends on scenario/experiment)");
  cmd->add_option("--reps", o.reps, "Repetitions (default depends on experiment)");
  cmd->add_option("--seed", o.seed, "Master seed; repetition r uses seed + r")->capture_default_str();
  cmd->add_option("--noise", o.noise, "ideal | shot:n | angle:sigma | untrusted, comma-combinable")
      ->capture_default_str();
  cmd->add_option("--a", o.a, "Update gain numerator")->capture_default_str();
  cmd->add_option("--b", o.b, "Perturbation gain numerator")->capture_default_str();
  cmd->add_option("--s", o.s, "Update gain decay exponent")->capture_default_str();
  cmd->add_option("--t", o.t, "Perturbation gain decay exponent")->capture_default_str();
  cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
  cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
}

bellmax::ExperimentConfig to_config(bellmax::ExperimentKind kind, const Options& o) {
  bellmax::ExperimentConfig c;
  c.kind = kind;
  c.scenario = bellmax::parse_scenario(o.scenario);
  c.states = o.states;
  c.spsa = {o.a, o.b, o.s, o.t, o.iterations, o.seed};
  c.noise = bellmax::parse_noise(o.noise);
  c.repetitions = o.reps;
  c.seed = o.seed;
  c.out_dir = o.out;
  c.pairs_per_measurement = o.pairs;
  c.cvt_repetitions = o.cvt_reps;
  c.threads = o.threads;
  for (const auto& level : o.levels) {
    if (kind == bellmax::ExperimentKind::ShotNoiseSweep) {
      c.shot_levels.push_back(std::stoull(level));
    } else if (kind == bellmax::ExperimentKind::SgaVsCvt) {
      c.sigma_levels.push_back(std::stod(level));
    }
  }
  return c;
}

void print_result(const bellmax::ExperimentResult& r) {
  std::printf("%-28s %6s %10s %10s %10s %10s %12s\n", "group", "reps", "mean", "std", "min", "max", "reference");
  for (const auto& g : r.groups) {
    const std::string ref = g.reference_mbv ? std::to_string(*g.reference_mbv) : "-";
    std::printf("%-28s %6zu %10.5f %10.5f %10.5f %10.5f %12s\n", g.label.c_str(), g.sga.values.size(), g.sga.mean,
                g.sga.std, g.sga.min, g.sga.max, ref.c_str());
    if (g.cvt) {
      std::printf("%-28s %6zu %10.5f %10.5f %10.5f %10.5f\n", (g.label + " (tomography)").c_str(),
                  g.cvt->values.size(), g.cvt->mean, g.cvt->std, g.cvt->min, g.cvt->max);
    }
  }
  std::printf("summary: %s (%.2f s)\n", r.summary_file.string().c_str(), r.wall_time_seconds);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Search for maximal Bell violations with stochastic gradient ascent"};
  app.require_subcommand(1);

  Options o;
  struct Entry {
    const char* name;
    const char* help;
    bellmax::ExperimentKind kind;
  };
  const std::vector<Entry> entries{
      {"single", "Ad-hoc SGA runs for one scenario, state and noise model", bellmax::ExperimentKind::Single},
      {"fig1", "Noiseless convergence for three states of a scenario", bellmax::ExperimentKind::Convergence},
      {"fig2", "CHSH final value versus photon pairs per measurement", bellmax::ExperimentKind::ShotNoiseSweep},
      {"fig3", "SGA versus tomography under wave-plate angle errors", bellmax::ExperimentKind::SgaVsCvt},
      {"fig4", "CHSH search with an uncalibrated (hidden-offset) device", bellmax::ExperimentKind::Untrusted},
  };
  std::vector<std::pair<CLI::App*, bellmax::ExperimentKind>> commands;
  for (const auto& e : entries) {
    auto* cmd = app.add_subcommand(e.name, e.help);
    add_common(cmd, o);
    commands.emplace_back(cmd, e.kind);
  }
  commands[2].first->add_option("--levels", o.levels, "Photon pairs per measurement to sweep")->delimiter(',');
  commands[3].first->add_option("--levels", o.levels, "Angle error levels (radians)")->delimiter(',');
  commands[3].first->add_option("--pairs", o.pairs, "SGA photon pairs per measurement")->capture_default_str();
  commands[3].first->add_option("--cvt-reps", o.cvt_reps, "Tomography repetitions per trial")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& [cmd, kind] : commands) {
      if (!cmd->parsed()) continue;
      const auto result = bellmax::run_experiment(to_config(kind, o));
      print_result(result);
    }
  } catch (const std::exception& e) {
    std::cerr << "bellmax: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
