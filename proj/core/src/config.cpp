#include "msgate/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "msgate/effective.hpp"

namespace msgate {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& key, const std::string& raw) {
  try {
    std::size_t used = 0;
    const double v = std::stod(raw, &used);
    if (used != raw.size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("field '" + key + "': expected a number, got '" + raw + "'");
  }
}

long parse_long(const std::string& key, const std::string& raw) {
  try {
    std::size_t used = 0;
    const long v = std::stol(raw, &used);
    if (used != raw.size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("field '" + key + "': expected an integer, got '" + raw + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(trim(cur));
  return out;
}

}  // namespace

const std::string& ConfigMap::get(const std::string& key) const {
  const auto it = values.find(key);
  if (it == values.end()) throw ConfigError("missing required field '" + key + "'");
  return it->second;
}

std::string ConfigMap::get_or(const std::string& key, const std::string& fallback) const {
  const auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

double ConfigMap::get_double(const std::string& key) const { return parse_double(key, get(key)); }

double ConfigMap::get_double_or(const std::string& key, double fallback) const {
  const auto it = values.find(key);
  return it == values.end() ? fallback : parse_double(key, it->second);
}

long ConfigMap::get_long(const std::string& key) const { return parse_long(key, get(key)); }

long ConfigMap::get_long_or(const std::string& key, long fallback) const {
  const auto it = values.find(key);
  return it == values.end() ? fallback : parse_long(key, it->second);
}

bool ConfigMap::get_bool_or(const std::string& key, bool fallback) const {
  const auto it = values.find(key);
  if (it == values.end()) return fallback;
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("field '" + key + "': expected a boolean, got '" + v + "'");
}

ConfigMap parse_config_text(const std::string& text) {
  ConfigMap map;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (section.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": key outside any [section]");
    const std::string full = section + "." + key;
    if (map.values.count(full))
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate field '" + full + "'");
    map.values[full] = value;
  }
  return map;
}

ConfigMap parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::rabi: return "rabi";
    case ExperimentKind::echo: return "echo";
    case ExperimentKind::heating: return "heating";
    case ExperimentKind::cnot: return "cnot";
    case ExperimentKind::n_independence: return "n_independence";
  }
  throw ConfigError("unknown experiment kind");
}

ExperimentKind experiment_kind_from(const std::string& name) {
  if (name == "rabi") return ExperimentKind::rabi;
  if (name == "echo") return ExperimentKind::echo;
  if (name == "heating") return ExperimentKind::heating;
  if (name == "cnot") return ExperimentKind::cnot;
  if (name == "n_independence" || name == "n-independence") return ExperimentKind::n_independence;
  throw ConfigError("field 'experiment.name': unknown experiment '" + name +
                    "' (expected rabi|echo|heating|cnot|n_independence)");
}

Eigen::Vector4cd InitialStateSpec::internal_amps() const {
  const double r = 1.0 / std::sqrt(2.0);
  if (internal == "gg") return Eigen::Vector4cd::Unit(GG);
  if (internal == "ge") return Eigen::Vector4cd::Unit(GE);
  if (internal == "eg") return Eigen::Vector4cd::Unit(EG);
  if (internal == "ee") return Eigen::Vector4cd::Unit(EE);
  if (internal == "gg+eg") return r * (Eigen::Vector4cd::Unit(GG) + Eigen::Vector4cd::Unit(EG));
  if (internal == "gg+ge") return r * (Eigen::Vector4cd::Unit(GG) + Eigen::Vector4cd::Unit(GE));
  throw ConfigError("field 'initial.internal': unknown state '" + internal +
                    "' (expected gg|ge|eg|ee|gg+eg|gg+ge)");
}

VibKind InitialStateSpec::vibration_kind() const {
  const std::size_t colon = vibration.find(':');
  const std::string head = vibration.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : vibration.substr(colon + 1);
  if (head == "fock") return Fock{static_cast<int>(parse_long("initial.vibration", rest))};
  if (head == "coherent") {
    const auto parts = split(rest, ',');
    if (parts.empty() || parts.size() > 2)
      throw ConfigError("field 'initial.vibration': expected coherent:RE[,IM]");
    const double re = parse_double("initial.vibration", parts[0]);
    const double im = parts.size() == 2 ? parse_double("initial.vibration", parts[1]) : 0.0;
    return Coherent{Complex(re, im)};
  }
  if (head == "thermal")
    return ThermalSample{parse_double("initial.vibration", rest), 0};
  throw ConfigError("field 'initial.vibration': unknown kind '" + vibration +
                    "' (expected fock:N | coherent:RE[,IM] | thermal:N_BAR)");
}

DetuningSchedule ExperimentConfig::schedule() const {
  DetuningSchedule s;
  s.entries = {{0.0, +1}};
  int sign = +1;
  for (double t : flip_times) {
    sign = -sign;
    s.entries.push_back({t, sign});
  }
  return s;
}

void ExperimentConfig::validate() const {
  params.validate();
  if (fields.empty()) throw ConfigError("field 'physics.drive1.ion': at least one drive is required");
  for (std::size_t k = 0; k < fields.size(); ++k) {
    const std::string prefix = "physics.drive" + std::to_string(k + 1) + ".";
    if (fields[k].ion != 1 && fields[k].ion != 2)
      throw ConfigError("field '" + prefix + "ion': must be 1 or 2");
    if (fields[k].rabi < 0) throw ConfigError("field '" + prefix + "rabi': must be >= 0");
    if (std::abs(fields[k].detuning) >= 2.0 * params.nu)
      throw ConfigError("field '" + prefix + "detuning': |detuning| must be < 2*nu");
  }
  for (std::size_t k = 0; k < flip_times.size(); ++k) {
    if (flip_times[k] <= 0 || (k > 0 && flip_times[k] <= flip_times[k - 1]))
      throw ConfigError("field 'physics.flip_times': must be positive and strictly increasing");
  }
  if (run.n_trajectories < 1)
    throw ConfigError("field 'run.trajectories': must be >= 1");
  if (run.sample_dt < 0) throw ConfigError("field 'run.sample_dt': must be >= 0");
  if (units.nu_hz < 0) throw ConfigError("field 'units.nu_hz': must be >= 0");
  if (experiment == ExperimentKind::heating && !has_heating)
    throw ConfigError("field 'heating.gamma': the heating experiment requires a [heating] section");
  if (has_heating) heating.validate();
  initial.internal_amps();
  initial.vibration_kind();
  schedule().validate();
}

ExperimentConfig config_from_map(const ConfigMap& map) {
  static const std::regex drive_key("physics\\.drive[0-9]+\\.(ion|rabi|detuning|phase)");
  static const std::set<std::string> known{
      "experiment.name",      "physics.eta",        "physics.nu",
      "physics.n_max",        "physics.dt",         "physics.t_final",
      "physics.flip_times",   "initial.internal",   "initial.vibration",
      "heating.gamma",        "heating.n_therm",    "run.seed",
      "run.trajectories",     "run.out_dir",        "run.sample_dt",
      "run.check",            "units.nu_hz",        "options.compare_no_flip",
      "options.compare_closed"};
  for (const auto& [key, value] : map.values) {
    (void)value;
    if (!known.count(key) && !std::regex_match(key, drive_key))
      throw ConfigError("unknown field '" + key + "'");
  }

  ExperimentConfig c;
  c.experiment = experiment_kind_from(map.get("experiment.name"));

  c.params.eta = map.get_double("physics.eta");
  c.params.nu = map.get_double_or("physics.nu", 1.0);
  c.params.basis.n_max = static_cast<int>(map.get_long_or("physics.n_max", 30));
  const std::string dt_raw = map.get_or("physics.dt", "auto");
  c.params.dt = (dt_raw == "auto") ? 0.0 : parse_double("physics.dt", dt_raw);
  c.params.t_final = map.get_double("physics.t_final");

  for (int k = 1;; ++k) {
    const std::string prefix = "physics.drive" + std::to_string(k) + ".";
    if (!map.has(prefix + "ion")) break;
    DriveField f;
    f.ion = static_cast<int>(map.get_long(prefix + "ion"));
    f.rabi = map.get_double(prefix + "rabi");
    f.detuning = map.get_double(prefix + "detuning");
    f.phase = map.get_double_or(prefix + "phase", 0.0);
    c.fields.push_back(f);
  }

  const std::string flips = map.get_or("physics.flip_times", "");
  if (!trim(flips).empty())
    for (const auto& part : split(flips, ','))
      c.flip_times.push_back(parse_double("physics.flip_times", part));

  c.initial.internal = map.get_or("initial.internal", "gg");
  c.initial.vibration = map.get_or("initial.vibration", "fock:0");

  c.has_heating = map.has("heating.gamma") || map.has("heating.n_therm");
  if (c.has_heating) {
    c.heating.gamma = map.get_double("heating.gamma");
    c.heating.n_therm = map.get_double("heating.n_therm");
  }

  c.run.seed = static_cast<std::uint64_t>(map.get_long_or("run.seed", 12345));
  c.run.n_trajectories = static_cast<int>(map.get_long_or("run.trajectories", 10));
  c.run.out_dir = map.get_or("run.out_dir", "out");
  const std::string sample_raw = map.get_or("run.sample_dt", "auto");
  c.run.sample_dt = (sample_raw == "auto") ? 0.0 : parse_double("run.sample_dt", sample_raw);
  c.run.check = map.get_bool_or("run.check", false);

  c.units.nu_hz = map.get_double_or("units.nu_hz", 0.0);
  c.compare_no_flip = map.get_bool_or("options.compare_no_flip", true);
  c.compare_closed = map.get_bool_or("options.compare_closed", true);

  c.validate();
  return c;
}

std::string resolve_config_text(const ExperimentConfig& config) {
  std::ostringstream out;
  out << "# resolved configuration (all values explicit; times and rates in trap units)\n";
  out << "[experiment]\n";
  out << "name = " << to_string(config.experiment) << "\n\n";
  out << "[physics]\n";
  out << "eta = " << fmt(config.params.eta) << "\n";
  out << "nu = " << fmt(config.params.nu) << "\n";
  out << "n_max = " << config.params.basis.n_max << "\n";
  if (config.params.dt > 0)
    out << "dt = " << fmt(config.params.dt) << "\n";
  else
    out << "dt = auto  # resolves to " << fmt(config.params.dt_bound()) << "\n";
  out << "t_final = " << fmt(config.params.t_final) << "\n";
  std::string flips;
  for (std::size_t k = 0; k < config.flip_times.size(); ++k)
    flips += (k ? "," : "") + fmt(config.flip_times[k]);
  out << "flip_times = " << flips << "\n";
  for (std::size_t k = 0; k < config.fields.size(); ++k) {
    const std::string p = "drive" + std::to_string(k + 1) + ".";
    out << p << "ion = " << config.fields[k].ion << "\n";
    out << p << "rabi = " << fmt(config.fields[k].rabi) << "\n";
    out << p << "detuning = " << fmt(config.fields[k].detuning) << "\n";
    out << p << "phase = " << fmt(config.fields[k].phase) << "\n";
  }
  if (!config.params.lamb_dicke_ok())
    out << "# warning: eta*sqrt(n_max+1) >= 1; the Lamb-Dicke truncation guard is unreliable\n";
  out << "\n[initial]\n";
  out << "internal = " << config.initial.internal << "\n";
  out << "vibration = " << config.initial.vibration << "\n";
  if (config.has_heating) {
    out << "\n[heating]\n";
    out << "gamma = " << fmt(config.heating.gamma) << "\n";
    out << "n_therm = " << fmt(config.heating.n_therm) << "\n";
  }
  out << "\n[run]\n";
  out << "seed = " << config.run.seed << "\n";
  out << "trajectories = " << config.run.n_trajectories << "\n";
  out << "out_dir = " << config.run.out_dir << "\n";
  if (config.run.sample_dt > 0)
    out << "sample_dt = " << fmt(config.run.sample_dt) << "\n";
  else
    out << "sample_dt = auto\n";
  out << "check = " << (config.run.check ? "true" : "false") << "\n";
  if (config.units.nu_hz > 0) {
    out << "\n[units]\n";
    out << "nu_hz = " << fmt(config.units.nu_hz) << "\n";
  }
  out << "\n[options]\n";
  out << "compare_no_flip = " << (config.compare_no_flip ? "true" : "false") << "\n";
  out << "compare_closed = " << (config.compare_closed ? "true" : "false") << "\n";
  return out.str();
}

ExperimentConfig preset_config(const std::string& name) {
  const double root2 = std::sqrt(2.0);
  ExperimentConfig c;
  c.params.eta = 0.1;
  c.params.nu = 1.0;

  auto mono_pair = [](double rabi, double delta) {
    return std::vector<DriveField>{{1, rabi, delta, 0.0}, {2, rabi, -delta, 0.0}};
  };
  auto bichromatic = [](double rabi, double delta) {
    return std::vector<DriveField>{
        {1, rabi, delta, 0.0}, {1, rabi, -delta, 0.0}, {2, rabi, delta, 0.0}, {2, rabi, -delta, 0.0}};
  };

  if (name == "fig2") {
    // Slow coherent population exchange gg -> ee, coherent vibration n_bar = 2.
    c.experiment = ExperimentKind::rabi;
    c.fields = mono_pair(0.1, 0.9);
    c.params.basis.n_max = 30;
    EffectiveParams ep{0.1, 0.1, 0.9, false};
    c.params.t_final = 1.2 * inversion_time(ep);
    c.initial.internal = "gg";
    c.initial.vibration = "coherent:" + fmt(root2);
    return c;
  }
  if (name == "fig3") {
    // Detuning-flip echo at half the inversion time, weaker drive.
    c.experiment = ExperimentKind::echo;
    c.fields = mono_pair(0.05, 0.9);
    c.params.basis.n_max = 30;
    EffectiveParams ep{0.05, 0.1, 0.9, false};
    c.params.t_final = inversion_time(ep);
    c.initial.internal = "gg+eg";
    c.initial.vibration = "coherent:" + fmt(root2);
    return c;
  }
  if (name == "fig4") {
    // Bichromatic gate under reservoir heating, thermal vibration n_bar = 2.
    c.experiment = ExperimentKind::heating;
    c.fields = bichromatic(0.1, 0.9);
    c.params.basis.n_max = 30;
    EffectiveParams ep{0.1, 0.1, 0.9, true};
    c.params.t_final = 2.5 * std::acos(-1.0) / std::abs(effective_rabi(ep));
    c.initial.internal = "gg";
    c.initial.vibration = "thermal:2";
    c.has_heating = true;
    c.heating = {2e-4, 2.0};
    c.run.n_trajectories = 10;
    return c;
  }
  if (name == "cnot") {
    // Entangling-sequence check with the quarter-period bichromatic pulse.
    c.experiment = ExperimentKind::cnot;
    c.fields = bichromatic(0.1, 0.9);
    c.params.basis.n_max = 10;
    EffectiveParams ep{0.1, 0.1, 0.9, true};
    c.params.t_final = 0.5 * std::acos(-1.0) / std::abs(effective_rabi(ep));
    c.initial.internal = "gg";
    c.initial.vibration = "fock:0";
    return c;
  }
  if (name == "n-independence" || name == "n_independence") {
    // Exchange frequency for Fock n = 0, 1, 2.
    c.experiment = ExperimentKind::n_independence;
    c.fields = mono_pair(0.1, 0.9);
    c.params.basis.n_max = 12;
    c.params.t_final = 7200.0;
    c.initial.internal = "gg";
    c.initial.vibration = "fock:0";
    return c;
  }
  throw ConfigError("unknown preset '" + name + "' (expected fig2|fig3|fig4|cnot|n-independence)");
}

std::vector<std::string> preset_names() {
  return {"fig2", "fig3", "fig4", "cnot", "n-independence"};
}

}  // namespace msgate
