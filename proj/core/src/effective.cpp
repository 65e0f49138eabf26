#include "msgate/effective.hpp"

#include <cmath>

namespace msgate {

namespace {

constexpr double kPoleWindow = 1e-6;

void check_sideband_pole(const EffectiveParams& p) {
  if (std::abs(p.detuning - 1.0) < kPoleWindow)
    throw PoleAtResonance("detuning within 1e-6 of the trap frequency");
}

}  // namespace

double effective_rabi(const EffectiveParams& p) {
  check_sideband_pole(p);
  const double w = -(p.rabi * p.eta) * (p.rabi * p.eta) / (2.0 * (1.0 - p.detuning));
  return p.bichromatic ? 2.0 * w : w;
}

double second_order_rabi(const EffectiveParams& p, int n) {
  if (n < 0) throw InvalidParams("second_order_rabi: n must be >= 0");
  check_sideband_pole(p);
  // Two interfering paths from |gg,n> to |ee,n>: through |eg,n+1> (laser one
  // quantum below the upper sideband, denominator -(1-detuning)) and through
  // |ge,n-1> (one above the lower sideband, denominator +(1-detuning)). The
  // matrix elements are rabi*eta*sqrt(n+1)/2 and rabi*eta*sqrt(n)/2; the sum
  // defines half the two-photon Rabi frequency.
  const double me_up = 0.5 * p.rabi * p.eta * std::sqrt(static_cast<double>(n + 1));
  const double me_dn = 0.5 * p.rabi * p.eta * std::sqrt(static_cast<double>(n));
  const double half = me_up * me_up / (-(1.0 - p.detuning)) + me_dn * me_dn / (1.0 - p.detuning);
  const double w = 2.0 * half;
  return p.bichromatic ? 2.0 * w : w;
}

StarkShifts stark_shifts(const EffectiveParams& p, int n) {
  if (n < 0) throw InvalidParams("stark_shifts: n must be >= 0");
  check_sideband_pole(p);
  if (std::abs(p.detuning) < kPoleWindow)
    throw CarrierPole("detuning within 1e-6 of the carrier");
  const double eo = p.eta * p.rabi;
  const double sideband = eo * eo / (1.0 - p.detuning);
  const double carrier = p.rabi * p.rabi / (2.0 * p.detuning);
  StarkShifts s;
  s.gg = -0.25 * sideband;
  s.ee = s.gg;
  s.eg = 0.5 * sideband * n - carrier;
  s.ge = -0.5 * sideband * (n + 1) + carrier;
  return s;
}

double inversion_time(const EffectiveParams& p) {
  check_sideband_pole(p);
  const double pi = std::acos(-1.0);
  return 2.0 * pi * (1.0 - p.detuning) / (p.eta * p.eta * p.rabi * p.rabi);
}

Eigen::Matrix4cd bichromatic_propagator(double omega_tilde, double T) {
  const double theta = 0.5 * omega_tilde * T;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
  u(GG, GG) = c;
  u(EE, EE) = c;
  u(GG, EE) = Complex(0.0, s);
  u(EE, GG) = Complex(0.0, s);
  u(GE, GE) = c;
  u(EG, EG) = c;
  u(GE, EG) = Complex(0.0, -s);
  u(EG, GE) = Complex(0.0, -s);
  return u;
}

}  // namespace msgate
