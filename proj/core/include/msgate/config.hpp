#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "msgate/dynamics.hpp"
#include "msgate/fockspace.hpp"
#include "msgate/open_system.hpp"

namespace msgate {

// Flat key-value configuration with sections; keys are stored "section.key".
// Lines are `key = value`, `[section]` headers, blank lines, and comments
// starting with '#'.
struct ConfigMap {
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const { return values.count(key) != 0; }
  const std::string& get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  long get_long(const std::string& key) const;
  long get_long_or(const std::string& key, long fallback) const;
  bool get_bool_or(const std::string& key, bool fallback) const;
};

ConfigMap parse_config_text(const std::string& text);
ConfigMap parse_config_file(const std::string& path);

enum class ExperimentKind { rabi, echo, heating, cnot, n_independence };

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from(const std::string& name);

struct InitialStateSpec {
  std::string internal = "gg";      // gg | ge | eg | ee | gg+eg | gg+ge
  std::string vibration = "fock:0"; // fock:N | coherent:RE[,IM] | thermal:N_BAR

  Eigen::Vector4cd internal_amps() const;
  // Thermal specs get their per-trajectory seed injected by the runner.
  VibKind vibration_kind() const;
};

struct RunSettings {
  std::uint64_t seed = 12345;
  int n_trajectories = 10;
  std::string out_dir = "out";
  double sample_dt = 0.0;  // 0 = auto: t_final / 2400
  bool check = false;
};

// Optional SI conversion; 0 means "no physical units configured".
struct PhysicalUnits {
  double nu_hz = 0.0;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::rabi;
  SimParams params;
  std::vector<DriveField> fields;
  std::vector<double> flip_times;  // detuning sign flips (echo protocol)
  HeatingParams heating;
  bool has_heating = false;
  InitialStateSpec initial;
  RunSettings run;
  PhysicalUnits units;
  bool compare_no_flip = true;  // echo: also run the no-flip mixture comparison
  bool compare_closed = true;   // heating: also run the gamma = 0 reference

  DetuningSchedule schedule() const;
  void validate() const;
};

// Builds and validates a config from parsed key-values; error messages name
// the offending field.
ExperimentConfig config_from_map(const ConfigMap& map);

// Serializes every parameter including defaults; the result parses back to
// an identical config (that is what config.resolved holds).
std::string resolve_config_text(const ExperimentConfig& config);

// Built-in parameter sets: fig2, fig3, fig4, cnot, n-independence.
ExperimentConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace msgate
