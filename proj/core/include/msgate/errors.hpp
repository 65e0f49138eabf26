#pragma once

#include <stdexcept>
#include <string>

namespace msgate {

// Base class for all library errors so callers can catch msgate failures wholesale.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// State construction asked for support beyond the Fock cutoff guard.
class CutoffExceeded : public Error {
 public:
  using Error::Error;
};

// Truncated state has no weight left to normalize (all coefficients below 1e-15).
class NonNormalizable : public Error {
 public:
  using Error::Error;
};

// A parameter violates a documented precondition (bad ion index, dt above the
// stability bound, non-normalized input state, malformed drive configuration).
class InvalidParams : public Error {
 public:
  using Error::Error;
};

// Detuning schedule does not cover the requested time.
class ScheduleGap : public Error {
 public:
  using Error::Error;
};

// Population climbed into the reserved headroom below the Fock cutoff.
class TruncationBreach : public Error {
 public:
  using Error::Error;
};

// Closed-system integrator lost more norm than the documented budget.
class NormDrift : public Error {
 public:
  using Error::Error;
};

// Perturbative formulas diverge when the detuning hits the sideband resonance.
class PoleAtResonance : public Error {
 public:
  using Error::Error;
};

// Perturbative Stark shift diverges when the detuning hits the carrier.
class CarrierPole : public Error {
 public:
  using Error::Error;
};

// Trajectory records that should share a time grid do not.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

// Dense master-equation evolution requested on a space too large to handle.
class DimensionTooLarge : public Error {
 public:
  using Error::Error;
};

// Gate name does not resolve to a defined gate.
class UnknownGate : public Error {
 public:
  using Error::Error;
};

// Experiment configuration is malformed; message names the offending field.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Frequency extraction found no oscillation to measure.
class NoOscillation : public Error {
 public:
  using Error::Error;
};

}  // namespace msgate
