#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bellmax/quantum_core.hpp"
#include "bellmax/scenarios.hpp"

namespace bellmax {

// Named state families. A spec is "name" or "name:parameter":
//   singlet                 (|01> - |10>) / sqrt 2
//   werner:p                p singlet + (1 - p) I/4
//   partial:gamma           cos(gamma)|00> + sin(gamma)|11>
//   ghz3                    (|000> + |111>) / sqrt 2
//   ghz_mixed:p             p GHZ + (1 - p) I/8
//   qutrit_max              (|00> + |11> + |22>) / sqrt 3
//   qutrit_iso:p            p qutrit_max + (1 - p) I/9
//   mixed:dim               I/dim

QuantumState singlet();
QuantumState ghz3();
QuantumState qutrit_max_entangled();
QuantumState werner(double p);
QuantumState partially_entangled(double gamma);
QuantumState ghz_mixed(double p);
QuantumState qutrit_isotropic(double p);

/// Builds a preset from its spec. Throws std::invalid_argument for unknown
/// names or out-of-range parameters.
QuantumState make_preset(std::string_view spec);
bool is_preset(std::string_view spec);

/// Preset spec, or a path to a state file when one exists at that path.
QuantumState resolve_state(std::string_view spec_or_path);

/// Plain text: first line dim, then dim^2 lines "re im" in row-major order.
QuantumState read_state(std::istream& in);
QuantumState load_state_file(const std::filesystem::path& path);
void write_state(std::ostream& out, const QuantumState& state);

/// Maximal Bell value of a preset for a scenario when a closed form is known
/// (CHSH for any two-qubit state; linear scaling of the maximally entangled
/// value for the GHZ and qutrit mixtures).
std::optional<double> reference_mbv(std::string_view spec, ScenarioId id);

/// Maximally entangled state followed by two mixtures, per scenario.
std::vector<std::string> convergence_presets(ScenarioId id);
/// The maximally entangled preset of a scenario.
std::string default_preset(ScenarioId id);

}  // namespace bellmax
