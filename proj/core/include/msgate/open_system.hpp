#pragma once

#include <cstdint>
#include <vector>

#include "msgate/basis.hpp"
#include "msgate/dynamics.hpp"
#include "msgate/fockspace.hpp"

namespace msgate {

// Thermal reservoir coupled to the vibrational mode: quanta leak out through
// sqrt(gamma*(1+n_therm))*a and in through sqrt(gamma*n_therm)*adag.
struct HeatingParams {
  double gamma = 0.0;
  double n_therm = 0.0;

  void validate() const {
    if (gamma < 0) throw InvalidParams("HeatingParams: gamma must be >= 0");
    if (n_therm < 0) throw InvalidParams("HeatingParams: n_therm must be >= 0");
  }
};

struct JumpEvent {
  double time = 0.0;
  int operator_id = 0;  // 1 = quantum lost (a), 2 = quantum gained (adag)
};

// One Monte Carlo wavefunction realization. Observables are evaluated on the
// normalized state at the same sample grid evolve() would use.
struct TrajectoryRecord {
  std::uint64_t seed = 0;
  std::vector<JumpEvent> jump_times;
  std::vector<double> times;
  std::vector<InternalDensityMatrix> observables;
  std::vector<double> mean_n;
  int quanta_exchanged = 0;
};

struct EnsembleResult {
  int n_traj = 0;
  std::vector<double> times;
  std::vector<InternalDensityMatrix> mean_observables;
  std::vector<double> mean_n;
  // Per-element standard error of the mean, separately for real and
  // imaginary parts.
  std::vector<Eigen::Matrix4d> stderr_re;
  std::vector<Eigen::Matrix4d> stderr_im;
  double mean_jumps = 0.0;
};

// Integrates with the non-Hermitian generator H - (i/2)*sum c_k^dag c_k (the
// decay is diagonal in the Fock index and is folded into the same local-frame
// factor that removes the free phonon rotation); when the squared norm falls
// below a pre-drawn uniform threshold the jump time is located by bisection
// inside the step, one jump operator is applied with probability proportional
// to its rate, and the threshold is redrawn. Deterministic given the seed.
TrajectoryRecord mcwf_trajectory(const StateVector& state0, const std::vector<DriveField>& fields,
                                 const DetuningSchedule& schedule, const SimParams& params,
                                 const HeatingParams& heating, std::uint64_t seed,
                                 const EvolveOptions& opts = {});

// Element-wise mean and standard error over trajectories sharing a time grid.
EnsembleResult ensemble_average(const std::vector<TrajectoryRecord>& records);

// Convenience runner: trajectory i gets the sub-seed stream(master_seed, i),
// used both for its jump randomness and, when vibration is thermal_sample,
// for its own initial Fock draw.
struct EnsembleSpec {
  Eigen::Vector4cd internal = Eigen::Vector4cd::Unit(0);
  VibKind vibration = Fock{0};
  int n_trajectories = 10;
  std::uint64_t master_seed = 12345;
};
std::vector<TrajectoryRecord> run_ensemble(const EnsembleSpec& spec,
                                           const std::vector<DriveField>& fields,
                                           const DetuningSchedule& schedule,
                                           const SimParams& params, const HeatingParams& heating,
                                           const EvolveOptions& opts = {});

// Dense master-equation integration used to validate the trajectory method.
// Works in the phonon interaction picture (the reduced internal matrix and
// <n> are picture-invariant). Restricted to small cutoffs.
struct OracleResult {
  std::vector<double> times;
  std::vector<InternalDensityMatrix> internal_rhos;
  std::vector<double> mean_n;
  Eigen::MatrixXcd final_rho;  // full density matrix at t_final (lab frame)
  double max_trace_error = 0.0;
};
OracleResult lindblad_oracle(const Eigen::MatrixXcd& rho0, const std::vector<DriveField>& fields,
                             const DetuningSchedule& schedule, const SimParams& params,
                             const HeatingParams& heating, const EvolveOptions& opts = {});

// Product density matrix internal (x) thermal mixture, for oracle inputs.
Eigen::MatrixXcd thermal_product_dm(const Eigen::Vector4cd& internal, double n_bar,
                                    const BasisSpec& basis);

constexpr int kOracleMaxCutoff = 15;

}  // namespace msgate
