#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "msgate/config.hpp"
#include "msgate/errors.hpp"
#include "msgate/experiments.hpp"
#include "msgate/extract.hpp"

using namespace msgate;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& leaf) {
  const fs::path dir = fs::temp_directory_path() / ("msgate_tests_" + leaf);
  fs::remove_all(dir);
  return dir;
}

long count_lines(const std::string& text) {
  long n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("oscillation frequency extraction recovers a clean cosine-squared") {
  const double w0 = 5e-4;
  std::vector<double> t, y;
  for (int k = 0; k <= 1200; ++k) {
    const double tk = k * (1.2 * kPi / w0) / 1200.0;
    t.push_back(tk);
    y.push_back(std::cos(0.5 * w0 * tk) * std::cos(0.5 * w0 * tk));
  }
  const double w = extract_oscillation_frequency(t, y);
  CHECK(w == doctest::Approx(w0).epsilon(1e-3));
}

TEST_CASE("oscillation frequency extraction tolerates a fast additive ripple") {
  const double w0 = 5e-4;
  std::vector<double> t, y;
  for (int k = 0; k <= 2400; ++k) {
    const double tk = k * (1.2 * kPi / w0) / 2400.0;
    t.push_back(tk);
    y.push_back(std::cos(0.5 * w0 * tk) * std::cos(0.5 * w0 * tk) + 0.05 * std::sin(0.1 * tk));
  }
  const double w = extract_oscillation_frequency(t, y);
  CHECK(w == doctest::Approx(w0).epsilon(1e-2));
}

TEST_CASE("oscillation frequency extraction rejects flat or tiny inputs") {
  std::vector<double> t, y;
  for (int k = 0; k <= 100; ++k) {
    t.push_back(k * 10.0);
    y.push_back(0.97 + 0.01 * std::sin(0.3 * k));  // range below the 0.1 floor
  }
  CHECK_THROWS_AS(extract_oscillation_frequency(t, y), NoOscillation);
  CHECK_THROWS_AS(extract_oscillation_frequency({0.0, 1.0}, {1.0, 0.0}), NoOscillation);
}

TEST_CASE("config text parses sections, comments, and drive blocks") {
  const std::string text =
      "# comment line\n"
      "[experiment]\n"
      "name = rabi\n"
      "[physics]\n"
      "nu = 1.0\n"
      "eta = 0.1\n"
      "n_max = 10\n"
      "t_final = 100.0  # trailing comment\n"
      "drive1.ion = 1\n"
      "drive1.rabi = 0.1\n"
      "drive1.detuning = 0.9\n"
      "drive2.ion = 2\n"
      "drive2.rabi = 0.1\n"
      "drive2.detuning = -0.9\n";
  const ExperimentConfig cfg = config_from_map(parse_config_text(text));
  CHECK(cfg.experiment == ExperimentKind::rabi);
  CHECK(cfg.params.basis.n_max == 10);
  CHECK(cfg.params.t_final == doctest::Approx(100.0));
  REQUIRE(cfg.fields.size() == 2);
  CHECK(cfg.fields[0].ion == 1);
  CHECK(cfg.fields[1].detuning == doctest::Approx(-0.9));
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("config errors name the offending field") {
  const std::string base =
      "[experiment]\nname = rabi\n[physics]\nnu = 1.0\nn_max = 10\nt_final = 100.0\n"
      "drive1.ion = 1\ndrive1.rabi = 0.1\ndrive1.detuning = 0.9\n";
  bool threw = false;
  try {
    config_from_map(parse_config_text(base));  // eta missing
  } catch (const ConfigError& e) {
    threw = true;
    CHECK(std::string(e.what()).find("physics.eta") != std::string::npos);
  }
  CHECK(threw);

  CHECK_THROWS_AS(config_from_map(parse_config_text(base + "eta = 0.1\nbogus_key = 3\n")),
                  ConfigError);
  // Duplicate assignment within one file is rejected by the parser itself.
  CHECK_THROWS_AS(parse_config_text("[physics]\neta = 0.1\neta = 0.2\n"), ConfigError);
  // Assignments before any section header are rejected.
  CHECK_THROWS_AS(parse_config_text("eta = 0.1\n"), ConfigError);
  // Unknown experiment kinds are rejected.
  CHECK_THROWS_AS(experiment_kind_from("bogus"), ConfigError);
  CHECK(experiment_kind_from("n-independence") == ExperimentKind::n_independence);
  CHECK(experiment_kind_from("n_independence") == ExperimentKind::n_independence);
}

TEST_CASE("initial state specs map to amplitudes and vibrational kinds") {
  InitialStateSpec s;
  s.internal = "gg+eg";
  const Eigen::Vector4cd a = s.internal_amps();
  CHECK(std::abs(a(0) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(a(2) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(a(1)) + std::abs(a(3)) == 0.0);

  s.vibration = "coherent:1.5";
  CHECK(std::holds_alternative<Coherent>(s.vibration_kind()));
  s.vibration = "thermal:2";
  CHECK(std::holds_alternative<ThermalSample>(s.vibration_kind()));
  s.vibration = "fock:3";
  CHECK(std::get<Fock>(s.vibration_kind()).n == 3);

  s.internal = "xx";
  CHECK_THROWS_AS(s.internal_amps(), ConfigError);
  s.internal = "gg";
  s.vibration = "squeezed:1";
  CHECK_THROWS_AS(s.vibration_kind(), ConfigError);
}

TEST_CASE("every preset validates and round-trips through its resolved text") {
  for (const std::string& name : preset_names()) {
    CAPTURE(name);
    const ExperimentConfig cfg = preset_config(name);
    CHECK_NOTHROW(cfg.validate());
    const std::string text = resolve_config_text(cfg);
    const ExperimentConfig back = config_from_map(parse_config_text(text));
    CHECK(resolve_config_text(back) == text);
  }
  CHECK_THROWS_AS(preset_config("nope"), ConfigError);
}

TEST_CASE("inversion-scan preset covers 1.2 inversion periods of the weak-drive prediction") {
  const ExperimentConfig cfg = preset_config("fig2");
  CHECK(cfg.experiment == ExperimentKind::rabi);
  // |effective rabi| = (0.1*0.1)^2 / (2*(1-0.9)) = 5e-4, inversion at pi/|..|.
  CHECK(cfg.params.t_final == doctest::Approx(1.2 * kPi / 5e-4).epsilon(1e-9));
  REQUIRE(cfg.fields.size() == 2);
  CHECK(cfg.fields[0].detuning == doctest::Approx(0.9));
  CHECK(cfg.fields[1].detuning == doctest::Approx(-0.9));
}

TEST_CASE("experiment runs are byte-deterministic and reproducible from the resolved config") {
  ExperimentConfig cfg = preset_config("fig2");
  cfg.params.basis.n_max = 8;
  cfg.initial.vibration = "fock:0";
  cfg.run.sample_dt = 10.0;

  const fs::path dir_a = fresh_dir("exp_a");
  const fs::path dir_b = fresh_dir("exp_b");
  const fs::path dir_c = fresh_dir("exp_c");

  cfg.run.out_dir = dir_a.string();
  const ExperimentOutputs out_a = run_experiment(cfg);
  cfg.run.out_dir = dir_b.string();
  const ExperimentOutputs out_b = run_experiment(cfg);

  const std::string csv_a = read_file(dir_a / "timeseries.csv");
  CHECK(csv_a == read_file(dir_b / "timeseries.csv"));
  CHECK(csv_a.rfind("# schema=1\n", 0) == 0);
  CHECK(out_a.metrics.at("extracted_rabi") == out_b.metrics.at("extracted_rabi"));

  // Re-running from the resolved config file reproduces the same trace.
  ExperimentConfig back = config_from_map(parse_config_file((dir_a / "config.resolved").string()));
  back.run.out_dir = dir_c.string();
  run_experiment(back);
  CHECK(csv_a == read_file(dir_c / "timeseries.csv"));

  for (const char* leaf : {"timeseries.csv", "summary.txt", "plot.gp", "config.resolved"})
    CHECK(fs::exists(dir_a / leaf));
  for (const auto& d : {dir_a, dir_b, dir_c}) fs::remove_all(d);
}

TEST_CASE("trajectory experiments record the first trajectory's jumps deterministically") {
  ExperimentConfig cfg = preset_config("fig4");
  cfg.params.basis.n_max = 12;
  cfg.params.t_final = 100.0;
  cfg.initial.vibration = "fock:1";
  cfg.heating = HeatingParams{0.01, 0.5};
  cfg.run.n_trajectories = 2;
  cfg.run.sample_dt = 5.0;
  cfg.compare_closed = false;
  for (auto& f : cfg.fields) f.rabi = 0.02;

  const fs::path dir_a = fresh_dir("heat_a");
  const fs::path dir_b = fresh_dir("heat_b");
  cfg.run.out_dir = dir_a.string();
  const ExperimentOutputs out_a = run_experiment(cfg);
  cfg.run.out_dir = dir_b.string();
  run_experiment(cfg);

  const std::string jumps_a = read_file(dir_a / "jumps.csv");
  CHECK(jumps_a == read_file(dir_b / "jumps.csv"));
  // schema line + header + one row per recorded jump of trajectory 0
  CHECK(count_lines(jumps_a) == 2 + static_cast<long>(out_a.metrics.at("jumps_traj0")));
  CHECK(out_a.metrics.at("mean_jumps") >= 0.0);
  for (const auto& d : {dir_a, dir_b}) fs::remove_all(d);
}

TEST_CASE("summary text carries the metrics block") {
  ExperimentConfig cfg = preset_config("cnot");
  cfg.params.basis.n_max = 8;  // keep the preset's quarter-period pulse time
  const fs::path dir = fresh_dir("cnot_small");
  cfg.run.out_dir = dir.string();
  const ExperimentOutputs out = run_experiment(cfg);
  CHECK(out.summary_text.find("[metrics]") != std::string::npos);
  CHECK(out.metrics.count("fidelity_simulated") == 1);
  CHECK(out.metrics.at("fidelity_ideal") > 1.0 - 1e-10);
  CHECK(out.metrics.at("fidelity_simulated") > 0.9);
  fs::remove_all(dir);
}

}  // TEST_SUITE
