#pragma once

// Internal fixed-step integrator core shared by the closed-system evolution
// and the Monte Carlo trajectory engine. Not installed.
//
// Each step of width h anchored at time t0 is taken in a local frame that
// absorbs the free phonon rotation and (for trajectories) the anti-Hermitian
// decay: psi(t0+tau) = E(tau) u(tau) with E = exp(-(i*nu*n + kappa_n)*tau)
// diagonal in the Fock index. The remaining drive term, dressed as
// f (row) ... b (column) with f = 1/E and b = E, is integrated with classical
// RK4. The dressing vectors for the stage offsets {0, h/2, h} depend only on
// h, so for the regular step width they are computed once.

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "msgate/basis.hpp"
#include "msgate/dynamics.hpp"
#include "msgate/fockspace.hpp"

namespace msgate::detail {

struct Tone {
  double half_rabi = 0.0;
  double detuning = 0.0;
  double phase = 0.0;
};

class Stepper {
 public:
  // kappa may be empty (closed system) or hold per-Fock-level decay rates
  // (half the total jump rate), in which case E acquires a real decay factor.
  Stepper(const std::vector<DriveField>& fields, const SimParams& params,
          Eigen::VectorXd kappa = {})
      : basis_(params.basis), nu_(params.nu), dt_(params.resolved_dt()), kappa_(std::move(kappa)) {
    const int v = basis_.vib_dim();
    if (kappa_.size() == 0) kappa_ = Eigen::VectorXd::Zero(v);
    has_decay_ = kappa_.cwiseAbs().maxCoeff() > 0.0;
    Eigen::MatrixXcd u = displacement_unitary(params.eta, basis_).mat;
    stacked_.resize(2 * v, v);
    stacked_.topRows(v) = u;
    stacked_.bottomRows(v) = u.adjoint();
    for (const auto& f : fields) {
      if (f.ion != 1 && f.ion != 2) throw InvalidParams("DriveField: ion must be 1 or 2");
      if (f.rabi < 0) throw InvalidParams("DriveField: rabi must be >= 0");
      if (std::abs(f.detuning) >= 2.0 * params.nu)
        throw InvalidParams("DriveField: |detuning| must be < 2*nu");
      tones_[f.ion - 1].push_back({0.5 * f.rabi, f.detuning, f.phase});
    }
    dressing(0.5 * dt_, f_half_, b_half_);
    dressing(dt_, f_full_, b_full_);
  }

  double regular_dt() const { return dt_; }
  const Eigen::VectorXd& kappa() const { return kappa_; }

  // Advance psi across [t0, t0+h] with the drive sign fixed to `sign`.
  // h must not exceed the regular step width.
  void step(Eigen::VectorXcd& psi, double t0, double h, int sign) const {
    const bool regular = std::abs(h - dt_) < 1e-15 * dt_;
    Eigen::VectorXcd fh, bh, ff, bf;
    const Eigen::VectorXcd *f2 = &f_half_, *b2 = &b_half_, *f3 = &f_full_, *b3 = &b_full_;
    if (!regular) {
      dressing(0.5 * h, fh, bh);
      dressing(h, ff, bf);
      f2 = &fh;
      b2 = &bh;
      f3 = &ff;
      b3 = &bf;
    }
    const int d = basis_.dim();
    if (k1_.size() != d) {
      k1_.resize(d);
      k2_.resize(d);
      k3_.resize(d);
      k4_.resize(d);
      tmp_.resize(d);
    }
    rhs(psi, t0, sign, nullptr, nullptr, k1_);
    tmp_ = psi + (0.5 * h) * k1_;
    rhs(tmp_, t0 + 0.5 * h, sign, f2, b2, k2_);
    tmp_ = psi + (0.5 * h) * k2_;
    rhs(tmp_, t0 + 0.5 * h, sign, f2, b2, k3_);
    tmp_ = psi + h * k3_;
    rhs(tmp_, t0 + h, sign, f3, b3, k4_);
    psi += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
    // Leave the local frame: apply E(h) blockwise (b3 is exactly E(h)).
    const int v = basis_.vib_dim();
    for (int i = 0; i < 4; ++i)
      psi.segment(i * v, v).array() *= b3->array();
  }

 private:
  // f[n] = exp((i*nu*n + kappa_n)*tau), b = elementwise inverse.
  void dressing(double tau, Eigen::VectorXcd& f, Eigen::VectorXcd& b) const {
    const int v = basis_.vib_dim();
    f.resize(v);
    b.resize(v);
    for (int n = 0; n < v; ++n) {
      const Complex z(kappa_(n) * tau, nu_ * n * tau);
      f(n) = std::exp(z);
      b(n) = std::exp(-z);
    }
  }

  // out = -i * Htilde(t_abs) * u with the given stage dressing (nullptr = identity).
  void rhs(const Eigen::VectorXcd& u, double t_abs, int sign, const Eigen::VectorXcd* f,
           const Eigen::VectorXcd* b, Eigen::VectorXcd& out) const {
    const int v = basis_.vib_dim();
    using ColMap = Eigen::Map<const Eigen::MatrixXcd>;
    using MutMap = Eigen::Map<Eigen::MatrixXcd>;
    ColMap q(u.data(), v, 4);
    out.setZero(u.size());
    MutMap o(out.data(), v, 4);

    if (qin_.rows() != v) {
      qin_.resize(v, 4);
      w_.resize(2 * v, 4);
    }
    if (b)
      qin_.noalias() = b->asDiagonal() * q;
    else
      qin_ = q;
    // One product covers both the coupling and its conjugate: rows 0..v-1 are
    // U*qin, rows v.. are U^dag*qin.
    w_.noalias() = stacked_ * qin_;
    const Eigen::MatrixXcd& w = w_;

    const Complex mi(0.0, -1.0);
    for (int ion = 0; ion < 2; ++ion) {
      if (tones_[ion].empty()) continue;
      Complex z(0.0, 0.0);
      for (const auto& tn : tones_[ion])
        z += tn.half_rabi * std::polar(1.0, -sign * tn.detuning * t_abs + tn.phase);
      const Complex zu = mi * z;           // multiplies sigma_plus terms
      const Complex zd = mi * std::conj(z);  // multiplies sigma_minus terms
      const int from0 = GG;
      const int from1 = (ion == 0) ? GE : EG;
      const int to0 = (ion == 0) ? EG : GE;
      const int to1 = EE;
      auto up = [&](int to, int from) {
        if (f)
          o.col(to) += zu * f->cwiseProduct(w.col(from).head(v));
        else
          o.col(to) += zu * w.col(from).head(v);
      };
      auto down = [&](int to, int from) {
        if (f)
          o.col(to) += zd * f->cwiseProduct(w.col(from).tail(v));
        else
          o.col(to) += zd * w.col(from).tail(v);
      };
      up(to0, from0);
      up(to1, from1);
      down(from0, to0);
      down(from1, to1);
    }
  }

  BasisSpec basis_;
  double nu_;
  double dt_;
  Eigen::VectorXd kappa_;
  bool has_decay_ = false;
  Eigen::MatrixXcd stacked_;
  std::array<std::vector<Tone>, 2> tones_;
  Eigen::VectorXcd f_half_, b_half_, f_full_, b_full_;
  // Scratch buffers for the hot loop; a Stepper is therefore not safe to share
  // across threads (give each trajectory its own instance if parallelizing).
  mutable Eigen::MatrixXcd qin_, w_;
  mutable Eigen::VectorXcd k1_, k2_, k3_, k4_, tmp_;
};

}  // namespace msgate::detail
