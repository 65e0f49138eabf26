#pragma once

#include <string>
#include <vector>

#include "msgate/basis.hpp"
#include "msgate/dynamics.hpp"

namespace msgate {

// 4x4 unitary over {gg, ge, eg, ee}, same ordering as InternalDensityMatrix.
using TwoQubitUnitary = Eigen::Matrix4cd;

// Named gate: P/P_inv/H take an ion (1 or 2); R takes the accumulated angle
// omega_tilde*T of the two-block entangling evolution instead of an ion.
struct GateOp {
  std::string name;  // "P", "P_inv", "H", "R"
  int ion = 0;
  double angle = 0.0;
};

struct GateSequence {
  std::vector<GateOp> ops;  // temporal order: ops.front() acts first
};

// P(ion) = diag(1, i) on that ion's {g, e}; H is the pi/2 rotation
// (1/sqrt2)[[1,-1],[1,1]] (the resonant-pulse convention; see gates.cpp for
// why the sequence below pins this variant); R is the ideal bichromatic
// propagator at angle omega_tilde*T.
TwoQubitUnitary gate(const GateOp& op);

// Matrix product of the sequence in temporal order (first listed acts first).
TwoQubitUnitary compose(const GateSequence& seq);

// |trace(U^dag V)| / 4: 1 iff U and V agree up to a global phase.
double fidelity_up_to_phase(const TwoQubitUnitary& u, const TwoQubitUnitary& v);

// The 9-gate entangling sequence that composes to a controlled-NOT with
// control on ion 1; omega_tilde_T = -pi/2 corresponds to the quarter-period
// entangling evolution with the negative effective Rabi frequency.
GateSequence cnot_sequence(double omega_tilde_T = -1.5707963267948966);

// Controlled-NOT with control on ion 1, target ion 2.
TwoQubitUnitary cnot_ideal();

// Runs the monochromatic-pair evolution for one full inversion time with the
// detuning sign flipped halfway, undoing the phonon-number-dependent phase
// spread; returns the full record (final internal state included).
// fields must be a monochromatic pair: one tone per ion, equal Rabi
// frequencies, opposite detunings. params.t_final is ignored and replaced by
// the inversion time.
EvolutionRecord echo_gate_run(const StateVector& initial, const SimParams& params,
                              const std::vector<DriveField>& fields,
                              const EvolveOptions& opts = {});

}  // namespace msgate
