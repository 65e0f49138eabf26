#pragma once

#include <Eigen/Dense>

#include "msgate/basis.hpp"

namespace msgate {

// Drive parameters of the perturbative model, all in units of the trap
// frequency (nu = 1): rabi is Omega, detuning is delta. The model has a pole
// at the sideband resonance delta = 1 and (for Stark shifts) at delta = 0.
struct EffectiveParams {
  double rabi = 0.1;
  double eta = 0.1;
  double detuning = 0.9;
  bool bichromatic = false;
};

// Second-order two-photon Rabi frequency -(rabi*eta)^2 / (2*(1-detuning)),
// doubled when both tones drive both ions.
double effective_rabi(const EffectiveParams& p);

// The same frequency evaluated as the explicit two-path perturbative sum over
// intermediate states with one extra and one missing vibrational quantum;
// the n dependence cancels algebraically.
double second_order_rabi(const EffectiveParams& p, int n);

// Light shifts of the four internal levels at vibrational level n, in units
// of the trap quantum. gg and ee are equal and n-independent; the n-dependent
// parts of eg and ge are opposite, which is what the detuning-flip echo undoes.
struct StarkShifts {
  double gg = 0.0;
  double ee = 0.0;
  double eg = 0.0;
  double ge = 0.0;
};
StarkShifts stark_shifts(const EffectiveParams& p, int n);

// Full inversion time 2*pi*(1-detuning)/(eta^2*rabi^2) = pi/|effective_rabi|
// for the monochromatic pair.
double inversion_time(const EffectiveParams& p);

// Ideal internal-state propagator of the bichromatic drive after time T:
// {gg,ee} rotate into each other with +i*sin(omega_tilde*T/2), {ge,eg} with
// -i*sin (the two blocks rotate with opposite sense).
Eigen::Matrix4cd bichromatic_propagator(double omega_tilde, double T);

}  // namespace msgate
