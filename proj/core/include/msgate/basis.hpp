#pragma once

#include <complex>
#include <Eigen/Dense>

#include "msgate/errors.hpp"

namespace msgate {

using Complex = std::complex<double>;

// Two ions share one vibrational mode truncated at Fock level n_max.
// Composite ordering is internal-major, Fock-minor: index = internal*(n_max+1) + n.
// Internal labels {gg=0, ge=1, eg=2, ee=3}; the first letter is ion 1.
struct BasisSpec {
  int n_max = 30;

  static constexpr int n_ions = 2;
  static constexpr int internal_dim = 4;

  int vib_dim() const { return n_max + 1; }
  int dim() const { return internal_dim * (n_max + 1); }
  int index(int internal, int n) const { return internal * (n_max + 1) + n; }

  void validate() const {
    if (n_max < 1) throw InvalidParams("BasisSpec: n_max must be >= 1");
  }

  bool operator==(const BasisSpec&) const = default;
};

enum Internal : int { GG = 0, GE = 1, EG = 2, EE = 3 };

// Amplitudes over the composite basis, carrying the basis they refer to.
struct StateVector {
  BasisSpec basis;
  Eigen::VectorXcd amps;

  Complex amp(int internal, int n) const { return amps(basis.index(internal, n)); }
  double norm() const { return amps.norm(); }
};

// Vibrational factor alone (length n_max+1); composed with an internal state
// via product_state below.
using VibState = Eigen::VectorXcd;

enum class OpFlag { general, hermitian, unitary };

// Square complex matrix plus a promise about its structure. Vibrational-only
// operators have dimension n_max+1, composite ones 4*(n_max+1).
struct OperatorMatrix {
  Eigen::MatrixXcd mat;
  OpFlag flag = OpFlag::general;
};

// Reduced 4x4 density matrix over {gg, ge, eg, ee} after tracing out vibration,
// element (i, k) = <i|rho|k>.
using InternalDensityMatrix = Eigen::Matrix4cd;

}  // namespace msgate
