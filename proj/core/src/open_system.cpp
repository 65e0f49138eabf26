#include "msgate/open_system.hpp"

#include <algorithm>
#include <cmath>

#include "msgate/rng.hpp"
#include "stepper.hpp"

namespace msgate {

namespace {

// Per-Fock-level half decay rate (1/2)*sum_k <n|c_k^dag c_k|n> with the
// truncated-space products: adag annihilates the top level, so (a adag) has a
// zero there. The trajectory decay and the oracle dissipator must use the
// same truncated expressions or the two methods converge to different
// stationary states.
Eigen::VectorXd half_decay_rates(const HeatingParams& heating, const BasisSpec& basis) {
  Eigen::VectorXd kappa(basis.vib_dim());
  for (int n = 0; n <= basis.n_max; ++n) {
    const double up = (n < basis.n_max) ? n + 1.0 : 0.0;
    kappa(n) = 0.5 * (heating.gamma * (1.0 + heating.n_therm) * n +
                      heating.gamma * heating.n_therm * up);
  }
  return kappa;
}

double loss_weight(const Eigen::VectorXcd& psi, const HeatingParams& h, const BasisSpec& basis) {
  const int v = basis.vib_dim();
  double w = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int n = 1; n < v; ++n) w += n * std::norm(psi(i * v + n));
  return h.gamma * (1.0 + h.n_therm) * w;
}

double gain_weight(const Eigen::VectorXcd& psi, const HeatingParams& h, const BasisSpec& basis) {
  const int v = basis.vib_dim();
  double w = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int n = 0; n < v - 1; ++n) w += (n + 1.0) * std::norm(psi(i * v + n));
  return h.gamma * h.n_therm * w;
}

void apply_loss(Eigen::VectorXcd& psi, const BasisSpec& basis) {
  const int v = basis.vib_dim();
  for (int i = 0; i < 4; ++i) {
    for (int n = 0; n < v - 1; ++n) psi(i * v + n) = std::sqrt(n + 1.0) * psi(i * v + n + 1);
    psi(i * v + v - 1) = 0.0;
  }
  psi /= psi.norm();
}

void apply_gain(Eigen::VectorXcd& psi, const BasisSpec& basis) {
  const int v = basis.vib_dim();
  for (int i = 0; i < 4; ++i) {
    for (int n = v - 1; n >= 1; --n) psi(i * v + n) = std::sqrt(static_cast<double>(n)) * psi(i * v + n - 1);
    psi(i * v) = 0.0;
  }
  psi /= psi.norm();
}

double state_mean_n(const Eigen::VectorXcd& psi, const BasisSpec& basis) {
  const int v = basis.vib_dim();
  double num = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int n = 1; n < v; ++n) num += n * std::norm(psi(i * v + n));
  const double den = psi.squaredNorm();
  return den > 0 ? num / den : 0.0;
}

}  // namespace

TrajectoryRecord mcwf_trajectory(const StateVector& state0, const std::vector<DriveField>& fields,
                                 const DetuningSchedule& schedule, const SimParams& params,
                                 const HeatingParams& heating, std::uint64_t seed,
                                 const EvolveOptions& opts) {
  params.validate();
  schedule.validate();
  heating.validate();
  if (state0.basis != params.basis)
    throw InvalidParams("mcwf_trajectory: state basis does not match SimParams basis");
  if (std::abs(state0.norm() - 1.0) > 1e-9)
    throw InvalidParams("mcwf_trajectory: initial state must be normalized");

  const BasisSpec& basis = params.basis;
  const double dt = params.resolved_dt();
  const long n_steps = static_cast<long>(std::ceil(params.t_final / dt - 1e-9));
  const long stride = opts.sample_dt > 0 ? std::max(1L, std::lround(opts.sample_dt / dt)) : 1L;

  detail::Stepper stepper(fields, params, half_decay_rates(heating, basis));
  std::mt19937_64 rng(splitmix64(seed));
  Eigen::VectorXcd psi = state0.amps;
  double threshold = uniform01(rng);

  TrajectoryRecord rec;
  rec.seed = seed;

  auto sample = [&](double t) {
    const double nm = psi.norm();
    StateVector cur{basis, psi / nm};
    rec.times.push_back(t);
    rec.observables.push_back(partial_trace_internal(cur));
    rec.mean_n.push_back(state_mean_n(psi, basis));
    if (guard_population(cur) >= params.guard_threshold)
      throw TruncationBreach("mcwf_trajectory: population reached the top 5 Fock levels");
  };

  // Integrate [t_from, t_from+h] watching for threshold crossings; recurses
  // into the post-jump remainder so several jumps inside one step still work.
  auto advance = [&](double t_from, double h, int sign, auto&& self) -> void {
    const Eigen::VectorXcd start = psi;
    stepper.step(psi, t_from, h, sign);
    if (psi.squaredNorm() >= threshold) return;
    // Bisect the crossing time; the squared norm decreases monotonically.
    double lo = 0.0, hi = h;
    for (int it = 0; it < 50 && (hi - lo) > 1e-13 * h; ++it) {
      const double mid = 0.5 * (lo + hi);
      psi = start;
      stepper.step(psi, t_from, mid, sign);
      (psi.squaredNorm() >= threshold ? lo : hi) = mid;
    }
    psi = start;
    if (hi > 0) stepper.step(psi, t_from, hi, sign);
    const double t_jump = t_from + hi;
    const double w_loss = loss_weight(psi, heating, basis);
    const double w_gain = gain_weight(psi, heating, basis);
    if (w_loss + w_gain <= 0.0)
      throw Error("mcwf_trajectory: jump triggered with zero jump rates");
    const double pick = uniform01(rng) * (w_loss + w_gain);
    if (pick < w_loss) {
      apply_loss(psi, basis);
      rec.jump_times.push_back({t_jump, 1});
    } else {
      apply_gain(psi, basis);
      rec.jump_times.push_back({t_jump, 2});
    }
    threshold = uniform01(rng);
    const double rest = t_from + h - t_jump;
    if (rest > 1e-13 * h) self(t_jump, rest, sign, self);
  };

  sample(0.0);
  for (long k = 0; k < n_steps; ++k) {
    const double t0 = k * dt;
    const double t1 = std::min((k + 1) * dt, params.t_final);
    double t = t0;
    while (t < t1 - 1e-12 * dt) {
      const std::size_t seg = schedule.segment_at(t + 1e-12);
      double t_end = t1;
      if (seg + 1 < schedule.entries.size())
        t_end = std::min(t_end, schedule.entries[seg + 1].t_start);
      advance(t, t_end - t, schedule.entries[seg].sign, advance);
      t = t_end;
    }
    if ((k + 1) % stride == 0 || k + 1 == n_steps) sample(t1);
  }
  rec.quanta_exchanged = static_cast<int>(rec.jump_times.size());
  return rec;
}

EnsembleResult ensemble_average(const std::vector<TrajectoryRecord>& records) {
  if (records.empty()) throw InvalidParams("ensemble_average: no records");
  const std::size_t n_samples = records.front().times.size();
  for (const auto& r : records) {
    if (r.times.size() != n_samples)
      throw GridMismatch("ensemble_average: records have different sample counts");
    for (std::size_t s = 0; s < n_samples; ++s)
      if (std::abs(r.times[s] - records.front().times[s]) > 1e-9)
        throw GridMismatch("ensemble_average: records have different time grids");
  }

  const int m = static_cast<int>(records.size());
  EnsembleResult out;
  out.n_traj = m;
  out.times = records.front().times;
  out.mean_observables.assign(n_samples, InternalDensityMatrix::Zero());
  out.mean_n.assign(n_samples, 0.0);
  out.stderr_re.assign(n_samples, Eigen::Matrix4d::Zero());
  out.stderr_im.assign(n_samples, Eigen::Matrix4d::Zero());

  for (std::size_t s = 0; s < n_samples; ++s) {
    for (const auto& r : records) {
      out.mean_observables[s] += r.observables[s];
      out.mean_n[s] += r.mean_n[s];
    }
    out.mean_observables[s] /= static_cast<double>(m);
    out.mean_n[s] /= m;
    if (m > 1) {
      Eigen::Matrix4d vr = Eigen::Matrix4d::Zero();
      Eigen::Matrix4d vi = Eigen::Matrix4d::Zero();
      for (const auto& r : records) {
        const Eigen::Matrix4cd d = r.observables[s] - out.mean_observables[s];
        vr += d.real().cwiseAbs2();
        vi += d.imag().cwiseAbs2();
      }
      const double denom = static_cast<double>(m) * (m - 1);
      out.stderr_re[s] = (vr / denom).cwiseSqrt();
      out.stderr_im[s] = (vi / denom).cwiseSqrt();
    }
  }
  double jumps = 0.0;
  for (const auto& r : records) jumps += static_cast<double>(r.quanta_exchanged);
  out.mean_jumps = jumps / m;
  return out;
}

std::vector<TrajectoryRecord> run_ensemble(const EnsembleSpec& spec,
                                           const std::vector<DriveField>& fields,
                                           const DetuningSchedule& schedule,
                                           const SimParams& params, const HeatingParams& heating,
                                           const EvolveOptions& opts) {
  if (spec.n_trajectories < 1) throw InvalidParams("run_ensemble: need at least one trajectory");
  std::vector<TrajectoryRecord> records;
  records.reserve(static_cast<std::size_t>(spec.n_trajectories));
  for (int i = 0; i < spec.n_trajectories; ++i) {
    const std::uint64_t sub = seed_stream(spec.master_seed, static_cast<std::uint64_t>(i));
    VibKind vib = spec.vibration;
    if (auto* th = std::get_if<ThermalSample>(&vib)) th->seed = sub;
    const StateVector s0 = product_state(spec.internal, make_vib_state(vib, params.basis), params.basis);
    // Jump randomness draws from a stream distinct from the initial-state draw.
    records.push_back(
        mcwf_trajectory(s0, fields, schedule, params, heating, splitmix64(sub ^ 0x6A09E667F3BCC909ULL), opts));
  }
  return records;
}

Eigen::MatrixXcd thermal_product_dm(const Eigen::Vector4cd& internal, double n_bar,
                                    const BasisSpec& basis) {
  const Eigen::VectorXd w = thermal_weights(n_bar, basis);
  const Eigen::Vector4cd ic = internal / internal.norm();
  const int v = basis.vib_dim();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(basis.dim(), basis.dim());
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const Complex c = ic(i) * std::conj(ic(j));
      for (int n = 0; n < v; ++n) rho(i * v + n, j * v + n) = c * w(n);
    }
  return rho;
}

OracleResult lindblad_oracle(const Eigen::MatrixXcd& rho0, const std::vector<DriveField>& fields,
                             const DetuningSchedule& schedule, const SimParams& params,
                             const HeatingParams& heating, const EvolveOptions& opts) {
  params.validate();
  schedule.validate();
  heating.validate();
  const BasisSpec& basis = params.basis;
  if (basis.n_max > kOracleMaxCutoff)
    throw DimensionTooLarge("lindblad_oracle: n_max above the dense-evolution limit");
  const int d = basis.dim();
  const int v = basis.vib_dim();
  if (rho0.rows() != d || rho0.cols() != d)
    throw InvalidParams("lindblad_oracle: rho0 does not match basis dimension");
  if (std::abs(rho0.trace().real() - 1.0) > 1e-9 || std::abs(rho0.trace().imag()) > 1e-9)
    throw InvalidParams("lindblad_oracle: rho0 must have unit trace");

  // Cached constant pieces (the interaction-picture mask is applied per stage).
  const Eigen::MatrixXcd u_eta = displacement_unitary(params.eta, basis).mat;
  std::array<Eigen::MatrixXcd, 2> coupling{};
  std::array<std::vector<detail::Tone>, 2> tones{};
  for (const auto& f : fields) {
    if (f.ion != 1 && f.ion != 2) throw InvalidParams("DriveField: ion must be 1 or 2");
    if (f.rabi < 0) throw InvalidParams("DriveField: rabi must be >= 0");
    if (std::abs(f.detuning) >= 2.0 * params.nu)
      throw InvalidParams("DriveField: |detuning| must be < 2*nu");
    tones[f.ion - 1].push_back({0.5 * f.rabi, f.detuning, f.phase});
  }
  for (int ion = 0; ion < 2; ++ion)
    if (!tones[ion].empty())
      coupling[ion] = compose_op(sigma_plus(ion + 1), u_eta, basis);

  const Eigen::MatrixXcd a_full = compose_op(Eigen::Matrix4cd::Identity(), lowering_op(basis), basis);
  const Eigen::MatrixXcd ad_full = a_full.adjoint();
  Eigen::VectorXd decay = Eigen::VectorXd::Zero(d);  // diag of sum_k c_k^dag c_k
  for (int i = 0; i < 4; ++i)
    for (int n = 0; n < v; ++n) {
      const double up = (n < basis.n_max) ? n + 1.0 : 0.0;
      decay(i * v + n) =
          heating.gamma * (1.0 + heating.n_therm) * n + heating.gamma * heating.n_therm * up;
    }
  const double g_loss = heating.gamma * (1.0 + heating.n_therm);
  const double g_gain = heating.gamma * heating.n_therm;
  const Eigen::VectorXcd decay_c = decay.cast<Complex>();

  Eigen::VectorXcd mask(d);
  auto rhs = [&](const Eigen::MatrixXcd& rho, double t, int sign, Eigen::MatrixXcd& out) {
    for (int i = 0; i < 4; ++i)
      for (int n = 0; n < v; ++n) mask(i * v + n) = std::polar(1.0, params.nu * n * t);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d, d);
    for (int ion = 0; ion < 2; ++ion) {
      if (tones[ion].empty()) continue;
      Complex z(0.0, 0.0);
      for (const auto& tn : tones[ion])
        z += tn.half_rabi * std::polar(1.0, -sign * tn.detuning * t + tn.phase);
      h += z * coupling[ion];
    }
    h = mask.asDiagonal() * h * mask.conjugate().asDiagonal();
    h += Eigen::MatrixXcd(h.adjoint());
    out.noalias() = Complex(0, -1) * (h * rho - rho * h);
    if (heating.gamma > 0) {
      out.noalias() += g_loss * (a_full * rho * ad_full);
      out.noalias() += g_gain * (ad_full * rho * a_full);
      out -= 0.5 * (decay_c.asDiagonal() * rho + rho * decay_c.asDiagonal());
    }
  };

  const double dt = params.resolved_dt();
  const long n_steps = static_cast<long>(std::ceil(params.t_final / dt - 1e-9));
  const long stride = opts.sample_dt > 0 ? std::max(1L, std::lround(opts.sample_dt / dt)) : 1L;

  Eigen::MatrixXcd rho = rho0;
  Eigen::MatrixXcd k1(d, d), k2(d, d), k3(d, d), k4(d, d), tmp(d, d);
  OracleResult out;

  auto sample = [&](double t) {
    out.times.push_back(t);
    InternalDensityMatrix r4;
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) r4(i, k) = rho.block(i * v, k * v, v, v).trace();
    out.internal_rhos.push_back(r4);
    double mn = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int n = 0; n < v; ++n) mn += n * rho(i * v + n, i * v + n).real();
    out.mean_n.push_back(mn);
    out.max_trace_error = std::max(out.max_trace_error, std::abs(rho.trace().real() - 1.0) +
                                                            std::abs(rho.trace().imag()));
    if (out.max_trace_error > 1e-7)
      throw NormDrift("lindblad_oracle: trace drift exceeded 1e-7");
  };

  auto rk4 = [&](double t, double h, int sign) {
    rhs(rho, t, sign, k1);
    tmp = rho + (0.5 * h) * k1;
    rhs(tmp, t + 0.5 * h, sign, k2);
    tmp = rho + (0.5 * h) * k2;
    rhs(tmp, t + 0.5 * h, sign, k3);
    tmp = rho + h * k3;
    rhs(tmp, t + h, sign, k4);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  };

  sample(0.0);
  for (long k = 0; k < n_steps; ++k) {
    const double t0 = k * dt;
    const double t1 = std::min((k + 1) * dt, params.t_final);
    double t = t0;
    while (t < t1 - 1e-12 * dt) {
      const std::size_t seg = schedule.segment_at(t + 1e-12);
      double t_end = t1;
      if (seg + 1 < schedule.entries.size())
        t_end = std::min(t_end, schedule.entries[seg + 1].t_start);
      rk4(t, t_end - t, schedule.entries[seg].sign);
      t = t_end;
    }
    if ((k + 1) % stride == 0 || k + 1 == n_steps) sample(t1);
  }
  // The integration ran in the frame rotating with the free vibration; undress
  // the final state back to the lab frame.
  for (int i = 0; i < 4; ++i)
    for (int n = 0; n < v; ++n) mask(i * v + n) = std::polar(1.0, params.nu * n * params.t_final);
  out.final_rho = mask.conjugate().asDiagonal() * rho * mask.asDiagonal();
  return out;
}

}  // namespace msgate
