#include "bellmax/presets.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "bellmax/tomography.hpp"

namespace bellmax {

namespace {

struct ParsedSpec {
  std::string name;
  std::optional<double> parameter;
};

ParsedSpec parse_spec(std::string_view spec) {
  ParsedSpec out;
  const auto colon = spec.find(':');
  out.name = std::string(spec.substr(0, colon));
  if (colon != std::string_view::npos) {
    const auto text = spec.substr(colon + 1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
      throw std::invalid_argument("state preset '" + std::string(spec) + "': bad parameter");
    }
    out.parameter = value;
  }
  return out;
}

double require_parameter(const ParsedSpec& s) {
  if (!s.parameter) throw std::invalid_argument("state preset '" + s.name + "' needs a parameter, e.g. " + s.name + ":0.9");
  return *s.parameter;
}

double require_probability(const ParsedSpec& s) {
  const double p = require_parameter(s);
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("state preset '" + s.name + "': p must lie in [0, 1]");
  return p;
}

QuantumState mixture(const QuantumState& pure, double p) {
  const int dim = pure.dim();
  ComplexMatrix rho = p * pure.rho() + (1.0 - p) * identity(dim) / static_cast<double>(dim);
  return QuantumState(std::move(rho));
}

}  // namespace

QuantumState singlet() {
  ComplexVector psi = ComplexVector::Zero(4);
  psi(1) = 1.0;
  psi(2) = -1.0;
  return QuantumState::pure(psi);
}

QuantumState ghz3() {
  ComplexVector psi = ComplexVector::Zero(8);
  psi(0) = 1.0;
  psi(7) = 1.0;
  return QuantumState::pure(psi);
}

QuantumState qutrit_max_entangled() {
  ComplexVector psi = ComplexVector::Zero(9);
  psi(0) = psi(4) = psi(8) = 1.0;
  return QuantumState::pure(psi);
}

QuantumState werner(double p) { return mixture(singlet(), p); }

QuantumState partially_entangled(double gamma) {
  ComplexVector psi = ComplexVector::Zero(4);
  psi(0) = std::cos(gamma);
  psi(3) = std::sin(gamma);
  return QuantumState::pure(psi);
}

QuantumState ghz_mixed(double p) { return mixture(ghz3(), p); }

QuantumState qutrit_isotropic(double p) { return mixture(qutrit_max_entangled(), p); }

QuantumState make_preset(std::string_view spec) {
  const ParsedSpec s = parse_spec(spec);
  if (s.name == "singlet") return singlet();
  if (s.name == "ghz3") return ghz3();
  if (s.name == "qutrit_max") return qutrit_max_entangled();
  if (s.name == "werner") return werner(require_probability(s));
  if (s.name == "partial") return partially_entangled(require_parameter(s));
  if (s.name == "ghz_mixed") return ghz_mixed(require_probability(s));
  if (s.name == "qutrit_iso") return qutrit_isotropic(require_probability(s));
  if (s.name == "mixed") {
    const double d = require_parameter(s);
    if (d != 4.0 && d != 8.0 && d != 9.0) throw std::invalid_argument("state preset 'mixed': dim must be 4, 8 or 9");
    return QuantumState::maximally_mixed(static_cast<int>(d));
  }
  throw std::invalid_argument("unknown state preset '" + std::string(spec) + "'");
}

bool is_preset(std::string_view spec) {
  try {
    make_preset(spec);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

QuantumState resolve_state(std::string_view spec_or_path) {
  std::error_code ec;
  const std::filesystem::path path{std::string(spec_or_path)};
  if (std::filesystem::is_regular_file(path, ec)) return load_state_file(path);
  return make_preset(spec_or_path);
}

QuantumState read_state(std::istream& in) {
  long long dim = 0;
  if (!(in >> dim) || dim <= 0 || dim > 64) throw std::invalid_argument("state file: bad dimension line");
  ComplexMatrix rho(dim, dim);
  for (long long i = 0; i < dim; ++i) {
    for (long long j = 0; j < dim; ++j) {
      double re = 0.0, im = 0.0;
      if (!(in >> re >> im)) {
        throw std::invalid_argument("state file: expected " + std::to_string(dim * dim) + " 're im' entries");
      }
      rho(i, j) = Complex{re, im};
    }
  }
  std::string trailing;
  if (in >> trailing) throw std::invalid_argument("state file: unexpected trailing content");
  return QuantumState(std::move(rho));
}

QuantumState load_state_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open state file " + path.string());
  return read_state(in);
}

void write_state(std::ostream& out, const QuantumState& state) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << state.dim() << '\n';
  for (int i = 0; i < state.dim(); ++i) {
    for (int j = 0; j < state.dim(); ++j) {
      out << state.rho()(i, j).real() << ' ' << state.rho()(i, j).imag() << '\n';
    }
  }
  out.precision(old_precision);
}

std::optional<double> reference_mbv(std::string_view spec, ScenarioId id) {
  const QuantumState state = resolve_state(spec);
  if (state.dim() != scenario(id).state_dim()) return std::nullopt;
  if (id == ScenarioId::Chsh) return chsh_mbv_from_state(state);
  if (!is_preset(spec)) return std::nullopt;
  const ParsedSpec s = parse_spec(spec);
  if (id == ScenarioId::Mermin3) {
    if (s.name == "ghz3") return quantum_maximum(id);
    if (s.name == "ghz_mixed") return *s.parameter * quantum_maximum(id);
    if (s.name == "mixed") return 0.0;
  }
  if (id == ScenarioId::Cglmp3) {
    if (s.name == "qutrit_max") return quantum_maximum(id);
    if (s.name == "qutrit_iso") return *s.parameter * quantum_maximum(id);
    if (s.name == "mixed") return 0.0;
  }
  return std::nullopt;
}

std::vector<std::string> convergence_presets(ScenarioId id) {
  switch (id) {
    case ScenarioId::Chsh:
      return {"singlet", "werner:0.9", "partial:0.5235987755982988"};
    case ScenarioId::Mermin3:
      return {"ghz3", "ghz_mixed:0.9", "ghz_mixed:0.8"};
    case ScenarioId::Cglmp3:
      return {"qutrit_max", "qutrit_iso:0.9", "qutrit_iso:0.8"};
  }
  return {};
}

std::string default_preset(ScenarioId id) { return convergence_presets(id).front(); }

}  // namespace bellmax
