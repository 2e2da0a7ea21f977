#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bellmax/experiment.hpp"
#include "bellmax/measurement_lab.hpp"
#include "bellmax/presets.hpp"
#include "bellmax/tomography.hpp"

namespace py = pybind11;
using namespace bellmax;

namespace {

NoiseModel noise_from(const std::string& text, ScenarioId id, std::uint64_t seed) {
  return make_noise_model(parse_noise(text), id, oracle_stream_seed(seed ^ 0x5DEECE66Dull));
}

py::dict trace_dict(const RunTrace& t) {
  std::vector<double> v_current, v_plus, v_minus;
  for (const auto& r : t.records) {
    v_current.push_back(r.v_current);
    v_plus.push_back(r.v_plus);
    v_minus.push_back(r.v_minus);
  }
  py::dict d;
  d["final_value"] = t.final_value;
  d["final_theta"] = t.final_theta;
  d["v_current"] = v_current;
  d["v_plus"] = v_plus;
  d["v_minus"] = v_minus;
  d["total_shots"] = t.total_shots;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bell-violation search core";

  py::enum_<ScenarioId>(m, "Scenario")
      .value("CHSH", ScenarioId::Chsh)
      .value("MERMIN3", ScenarioId::Mermin3)
      .value("CGLMP3", ScenarioId::Cglmp3);

  m.def("theta_dim", [](ScenarioId id) { return scenario(id).theta_dim; });
  m.def("quantum_maximum", &quantum_maximum);
  m.def("local_bound", &local_bound);

  m.def("make_preset", [](const std::string& spec) { return ComplexMatrix(resolve_state(spec).rho()); },
        py::arg("spec"), "Density matrix for a preset name or state file.");

  m.def(
      "bell_value",
      [](const ComplexMatrix& rho, ScenarioId id, std::vector<double> theta) {
        return bell_value(QuantumState(rho), SettingsVector(id, std::move(theta)));
      },
      py::arg("rho"), py::arg("scenario"), py::arg("theta"));

  m.def("chsh_mbv_from_state", [](const ComplexMatrix& rho) { return chsh_mbv_from_state(QuantumState(rho)); });

  m.def(
      "cvt_run",
      [](const ComplexMatrix& rho, std::uint64_t shots, double sigma, std::uint64_t seed) {
        Rng rng(seed);
        const NoiseModel noise = sigma > 0.0 ? NoiseModel::setting_error(sigma) : NoiseModel::ideal();
        return cvt_run(QuantumState(rho), shots, noise, rng);
      },
      py::arg("rho"), py::arg("shots_per_setting"), py::arg("sigma") = 0.0, py::arg("seed") = 0);

  m.def("matched_shots_per_setting", &matched_shots_per_setting, py::arg("pairs"), py::arg("iterations") = 60,
        py::arg("repetitions") = 60);

  py::class_<MeasurementOracle>(m, "Oracle")
      .def(py::init([](const ComplexMatrix& rho, ScenarioId id, const std::string& noise, std::uint64_t seed) {
             return MeasurementOracle(QuantumState(rho), id, noise_from(noise, id, seed), oracle_stream_seed(seed));
           }),
           py::arg("rho"), py::arg("scenario"), py::arg("noise") = "ideal", py::arg("seed") = 0)
      .def("evaluate", [](MeasurementOracle& o, const std::vector<double>& x) { return o.evaluate(x); })
      .def("reference_value", [](MeasurementOracle& o, const std::vector<double>& x) { return o.reference_value(x); })
      .def_property_readonly("shots_used", &MeasurementOracle::shots_used)
      .def_property_readonly("dimension", &MeasurementOracle::dimension);

  m.def(
      "run_sga",
      [](const ComplexMatrix& rho, ScenarioId id, const std::string& noise, std::size_t iterations,
         std::uint64_t seed, double a, double b, double s, double t) {
        Rng rng(seed);
        auto theta0 = random_initial_theta(static_cast<std::size_t>(scenario(id).theta_dim), rng);
        MeasurementOracle oracle(QuantumState(rho), id, noise_from(noise, id, seed), oracle_stream_seed(seed));
        const SpsaConfig config{a, b, s, t, iterations ? iterations : default_iterations(id), seed};
        RunTrace trace;
        {
          py::gil_scoped_release release;
          trace = run(oracle, std::move(theta0), config, rng);
        }
        return trace_dict(trace);
      },
      py::arg("rho"), py::arg("scenario"), py::arg("noise") = "ideal", py::arg("iterations") = 0,
      py::arg("seed") = 1, py::arg("a") = 0.2, py::arg("b") = 0.2, py::arg("s") = 2.0, py::arg("t") = 1.0);

  m.def(
      "run_experiment",
      [](const std::string& kind, const std::string& scenario_name, std::vector<std::string> states,
         const std::string& noise, std::size_t repetitions, std::size_t iterations, std::uint64_t seed,
         const std::string& out_dir) {
        ExperimentConfig c;
        c.kind = parse_experiment(kind);
        c.scenario = parse_scenario(scenario_name);
        c.states = std::move(states);
        c.noise = parse_noise(noise);
        c.repetitions = repetitions;
        c.spsa.iterations = iterations;
        c.seed = seed;
        c.out_dir = out_dir;
        ExperimentResult result;
        {
          py::gil_scoped_release release;
          result = run_experiment(c);
        }
        return summary_json(result).dump();
      },
      py::arg("kind"), py::arg("scenario") = "chsh", py::arg("states") = std::vector<std::string>{},
      py::arg("noise") = "ideal", py::arg("repetitions") = 0, py::arg("iterations") = 0, py::arg("seed") = 1,
      py::arg("out_dir") = "bellmax_out",
      "Runs an experiment, writes its files and returns the summary as a JSON string.");
}
