#include "msgate/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "msgate/fockspace.hpp"
#include "stepper.hpp"

namespace msgate {

void DetuningSchedule::validate() const {
  if (entries.empty()) throw ScheduleGap("DetuningSchedule: no entries");
  if (entries.front().t_start != 0.0)
    throw ScheduleGap("DetuningSchedule: first entry must start at t = 0");
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (entries[k].sign != 1 && entries[k].sign != -1)
      throw InvalidParams("DetuningSchedule: sign must be +1 or -1");
    if (k > 0 && entries[k].t_start <= entries[k - 1].t_start)
      throw InvalidParams("DetuningSchedule: entries must be strictly increasing in time");
  }
}

std::size_t DetuningSchedule::segment_at(double t) const {
  if (entries.empty() || t < entries.front().t_start - 1e-12)
    throw ScheduleGap("DetuningSchedule: time precedes schedule coverage");
  std::size_t k = entries.size() - 1;
  while (k > 0 && entries[k].t_start > t) --k;
  return k;
}

int DetuningSchedule::sign_at(double t) const { return entries[segment_at(t)].sign; }

bool SimParams::lamb_dicke_ok() const {
  return std::abs(eta) * std::sqrt(basis.n_max + 1.0) < 1.0;
}

void SimParams::validate() const {
  basis.validate();
  if (nu <= 0) throw InvalidParams("SimParams: nu must be positive");
  if (t_final < 0) throw InvalidParams("SimParams: t_final must be >= 0");
  if (guard_threshold <= 0) throw InvalidParams("SimParams: guard_threshold must be > 0");
  if (dt < 0) throw InvalidParams("SimParams: dt must be >= 0");
  if (dt > dt_bound() * (1.0 + 1e-12))
    throw InvalidParams("SimParams: dt exceeds the stability bound 2*pi/(20*nu*(n_max+1))");
}

OperatorMatrix build_hamiltonian(const std::vector<DriveField>& fields,
                                 const DetuningSchedule& schedule, const SimParams& params,
                                 double t) {
  params.validate();
  schedule.validate();
  const int sign = schedule.sign_at(t);
  const BasisSpec& basis = params.basis;
  const Eigen::MatrixXcd u_eta = displacement_unitary(params.eta, basis).mat;

  Eigen::MatrixXcd h = params.nu * compose_op(Eigen::Matrix4cd::Identity(), number_op(basis), basis);
  for (const auto& f : fields) {
    if (f.ion != 1 && f.ion != 2) throw InvalidParams("DriveField: ion must be 1 or 2");
    if (f.rabi < 0) throw InvalidParams("DriveField: rabi must be >= 0");
    if (std::abs(f.detuning) >= 2.0 * params.nu)
      throw InvalidParams("DriveField: |detuning| must be < 2*nu");
    const Complex z = 0.5 * f.rabi * std::polar(1.0, -sign * f.detuning * t + f.phase);
    const Eigen::MatrixXcd coupling = compose_op(z * sigma_plus(f.ion), u_eta, basis);
    h += coupling + coupling.adjoint();
  }
  return {std::move(h), OpFlag::hermitian};
}

EvolutionRecord evolve(const StateVector& state0, const std::vector<DriveField>& fields,
                       const DetuningSchedule& schedule, const SimParams& params,
                       const EvolveOptions& opts) {
  params.validate();
  schedule.validate();
  if (state0.basis != params.basis)
    throw InvalidParams("evolve: state basis does not match SimParams basis");
  if (std::abs(state0.norm() - 1.0) > 1e-9)
    throw InvalidParams("evolve: initial state must be normalized");

  const double dt = params.resolved_dt();
  const long n_steps = static_cast<long>(std::ceil(params.t_final / dt - 1e-9));
  const long stride =
      opts.sample_dt > 0 ? std::max(1L, std::lround(opts.sample_dt / dt)) : 1L;

  detail::Stepper stepper(fields, params);
  Eigen::VectorXcd psi = state0.amps;

  EvolutionRecord rec;
  rec.times.reserve(static_cast<std::size_t>(n_steps / stride + 2));

  auto sample = [&](double t) {
    const double nm = psi.norm();
    rec.times.push_back(t);
    StateVector cur{params.basis, psi};
    rec.internal_rhos.push_back(partial_trace_internal(cur));
    rec.norms.push_back(nm);
    rec.norm_drift = std::max(rec.norm_drift, std::abs(nm - 1.0));
    if (rec.norm_drift >= kNormDriftBudget)
      throw NormDrift("evolve: norm drift " + std::to_string(rec.norm_drift) +
                      " reached the 1e-6 budget; reduce dt");
    if (guard_population(cur) >= params.guard_threshold)
      throw TruncationBreach("evolve: population reached the top 5 Fock levels; raise n_max");
  };

  sample(0.0);
  for (long k = 0; k < n_steps; ++k) {
    const double t0 = k * dt;
    const double t1 = std::min((k + 1) * dt, params.t_final);
    // Split the step at detuning-schedule boundaries so each sub-step sees a
    // constant drive sign.
    double t = t0;
    while (t < t1 - 1e-12 * dt) {
      const std::size_t seg = schedule.segment_at(t + 1e-12);
      double t_end = t1;
      if (seg + 1 < schedule.entries.size())
        t_end = std::min(t_end, schedule.entries[seg + 1].t_start);
      stepper.step(psi, t, t_end - t, schedule.entries[seg].sign);
      t = t_end;
    }
    if ((k + 1) % stride == 0 || k + 1 == n_steps) sample(t1);
  }

  rec.final_state = StateVector{params.basis, std::move(psi)};
  return rec;
}

}  // namespace msgate
