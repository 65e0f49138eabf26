#pragma once

#include <cstdint>
#include <variant>

#include "msgate/basis.hpp"

namespace msgate {

// Vibrational state factories. thermal_sample draws a single Fock level from the
// geometric distribution p(n) ~ n_bar^n/(1+n_bar)^{n+1} truncated to 0..n_max;
// mixtures for density-matrix evolution are built from thermal_weights instead.
struct Fock {
  int n = 0;
};
struct Coherent {
  Complex alpha{0.0, 0.0};
};
struct ThermalSample {
  double n_bar = 0.0;
  std::uint64_t seed = 0;
};
using VibKind = std::variant<Fock, Coherent, ThermalSample>;

// Normalized vibrational amplitude vector of length n_max+1.
VibState make_vib_state(const VibKind& kind, const BasisSpec& basis);

// internal (x) vib product state on the composite basis; internal need not be
// a basis state. Both factors are normalized before composing.
StateVector product_state(const Eigen::Vector4cd& internal, const VibState& vib,
                          const BasisSpec& basis);

// Truncated ladder operators on the vibrational space (dimension n_max+1).
// a raising past n_max annihilates; products like a*adag are truncated too.
Eigen::MatrixXcd lowering_op(const BasisSpec& basis);
Eigen::MatrixXcd raising_op(const BasisSpec& basis);
Eigen::MatrixXcd number_op(const BasisSpec& basis);

// Internal-state ladder operators on the 4-dim space {gg, ge, eg, ee};
// sigma_plus(1) maps gg->eg and ge->ee, sigma_plus(2) maps gg->ge and eg->ee.
Eigen::Matrix4cd sigma_plus(int ion);
Eigen::Matrix4cd sigma_minus(int ion);

// Kronecker embedding internal_op (x) vib_op with the shared internal-major ordering.
Eigen::MatrixXcd compose_op(const Eigen::Matrix4cd& internal_op,
                            const Eigen::MatrixXcd& vib_op, const BasisSpec& basis);

// exp(i*eta*(a+adag)) on the truncated vibrational space, computed by
// eigendecomposition of the Hermitian generator so that truncation is the only
// approximation. Unitary away from the cutoff corner.
OperatorMatrix displacement_unitary(double eta, const BasisSpec& basis);

// Reduced internal density matrix: rho(i,k) = sum_n amp(i,n)*conj(amp(k,n)).
InternalDensityMatrix partial_trace_internal(const StateVector& state);

// Geometric thermal occupation probabilities over 0..n_max, renormalized.
Eigen::VectorXd thermal_weights(double n_bar, const BasisSpec& basis);

// Total population at Fock levels n > n_max-5; runs abort when this exceeds 1e-6.
double guard_population(const StateVector& state);

constexpr double kGuardThreshold = 1e-6;
constexpr int kGuardLevels = 5;

}  // namespace msgate
