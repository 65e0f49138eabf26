#include "msgate/fockspace.hpp"

#include <cmath>
#include <random>

#include "msgate/rng.hpp"

namespace msgate {

namespace {

VibState fock_state(const Fock& f, const BasisSpec& basis) {
  if (f.n < 0) throw InvalidParams("fock: n must be >= 0");
  if (f.n > basis.n_max) throw CutoffExceeded("fock: n exceeds n_max");
  VibState v = VibState::Zero(basis.vib_dim());
  v(f.n) = 1.0;
  return v;
}

VibState coherent_state(const Coherent& c, const BasisSpec& basis) {
  const double mean_n = std::norm(c.alpha);
  if (mean_n > basis.n_max / 4.0)
    throw CutoffExceeded("coherent: |alpha|^2 exceeds n_max/4 truncation guard");
  VibState v(basis.vib_dim());
  // c_n = alpha^n e^{-|alpha|^2/2} / sqrt(n!) by stable recurrence.
  Complex cn = std::exp(Complex(-mean_n / 2.0, 0.0));
  v(0) = cn;
  for (int n = 1; n <= basis.n_max; ++n) {
    cn *= c.alpha / std::sqrt(static_cast<double>(n));
    v(n) = cn;
  }
  if ((v.cwiseAbs().array() >= 1e-15).count() == 0)
    throw NonNormalizable("coherent: all truncated weights below 1e-15");
  v /= v.norm();
  return v;
}

VibState thermal_sample_state(const ThermalSample& t, const BasisSpec& basis) {
  if (t.n_bar < 0) throw InvalidParams("thermal_sample: n_bar must be >= 0");
  const Eigen::VectorXd w = thermal_weights(t.n_bar, basis);
  std::mt19937_64 rng(splitmix64(t.seed));
  const double u = uniform01(rng);
  double acc = 0.0;
  int pick = basis.n_max;
  for (int n = 0; n <= basis.n_max; ++n) {
    acc += w(n);
    if (u < acc) {
      pick = n;
      break;
    }
  }
  return fock_state(Fock{pick}, basis);
}

}  // namespace

VibState make_vib_state(const VibKind& kind, const BasisSpec& basis) {
  basis.validate();
  return std::visit(
      [&](const auto& k) -> VibState {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Fock>) return fock_state(k, basis);
        if constexpr (std::is_same_v<T, Coherent>) return coherent_state(k, basis);
        if constexpr (std::is_same_v<T, ThermalSample>) return thermal_sample_state(k, basis);
      },
      kind);
}

StateVector product_state(const Eigen::Vector4cd& internal, const VibState& vib,
                          const BasisSpec& basis) {
  if (vib.size() != basis.vib_dim())
    throw InvalidParams("product_state: vibrational factor does not match basis");
  const double ni = internal.norm();
  const double nv = vib.norm();
  if (ni < 1e-15 || nv < 1e-15) throw NonNormalizable("product_state: zero factor");
  StateVector s{basis, Eigen::VectorXcd(basis.dim())};
  for (int i = 0; i < BasisSpec::internal_dim; ++i)
    s.amps.segment(i * basis.vib_dim(), basis.vib_dim()) = (internal(i) / ni) * (vib / nv);
  return s;
}

Eigen::MatrixXcd lowering_op(const BasisSpec& basis) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(basis.vib_dim(), basis.vib_dim());
  for (int n = 1; n <= basis.n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Eigen::MatrixXcd raising_op(const BasisSpec& basis) {
  return lowering_op(basis).adjoint();
}

Eigen::MatrixXcd number_op(const BasisSpec& basis) {
  Eigen::MatrixXcd n = Eigen::MatrixXcd::Zero(basis.vib_dim(), basis.vib_dim());
  for (int k = 0; k <= basis.n_max; ++k) n(k, k) = k;
  return n;
}

Eigen::Matrix4cd sigma_plus(int ion) {
  if (ion != 1 && ion != 2) throw InvalidParams("sigma_plus: ion must be 1 or 2");
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  if (ion == 1) {
    m(EG, GG) = 1.0;
    m(EE, GE) = 1.0;
  } else {
    m(GE, GG) = 1.0;
    m(EE, EG) = 1.0;
  }
  return m;
}

Eigen::Matrix4cd sigma_minus(int ion) {
  return sigma_plus(ion).adjoint();
}

Eigen::MatrixXcd compose_op(const Eigen::Matrix4cd& internal_op,
                            const Eigen::MatrixXcd& vib_op, const BasisSpec& basis) {
  const int v = basis.vib_dim();
  if (vib_op.rows() != v || vib_op.cols() != v)
    throw InvalidParams("compose_op: vibrational operator does not match basis");
  Eigen::MatrixXcd out(basis.dim(), basis.dim());
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out.block(i * v, j * v, v, v) = internal_op(i, j) * vib_op;
  return out;
}

OperatorMatrix displacement_unitary(double eta, const BasisSpec& basis) {
  basis.validate();
  const int v = basis.vib_dim();
  // Generator eta*(a+adag) is real symmetric; exponentiate its spectrum.
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(v, v);
  for (int n = 1; n <= basis.n_max; ++n) {
    const double s = eta * std::sqrt(static_cast<double>(n));
    x(n - 1, n) = s;
    x(n, n - 1) = s;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x);
  const Eigen::MatrixXd& vec = es.eigenvectors();
  Eigen::VectorXcd phases(v);
  for (int k = 0; k < v; ++k) phases(k) = std::polar(1.0, es.eigenvalues()(k));
  OperatorMatrix u;
  u.mat = vec.cast<Complex>() * phases.asDiagonal() * vec.transpose().cast<Complex>();
  u.flag = OpFlag::unitary;
  return u;
}

InternalDensityMatrix partial_trace_internal(const StateVector& state) {
  const int v = state.basis.vib_dim();
  if (state.amps.size() != state.basis.dim())
    throw InvalidParams("partial_trace_internal: state does not match basis");
  InternalDensityMatrix rho;
  // Eigen's dot conjugates its left argument, so seg_k.dot(seg_i) gives
  // rho(i,k) = sum_n amp(i,n)*conj(amp(k,n)).
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k)
      rho(i, k) = state.amps.segment(k * v, v).dot(state.amps.segment(i * v, v));
  return rho;
}

Eigen::VectorXd thermal_weights(double n_bar, const BasisSpec& basis) {
  if (n_bar < 0) throw InvalidParams("thermal_weights: n_bar must be >= 0");
  Eigen::VectorXd w(basis.vib_dim());
  if (n_bar == 0.0) {
    w.setZero();
    w(0) = 1.0;
    return w;
  }
  const double q = n_bar / (1.0 + n_bar);
  double p = 1.0 / (1.0 + n_bar);
  for (int n = 0; n <= basis.n_max; ++n) {
    w(n) = p;
    p *= q;
  }
  w /= w.sum();
  return w;
}

double guard_population(const StateVector& state) {
  const int v = state.basis.vib_dim();
  const int first = std::max(0, state.basis.n_max - kGuardLevels + 1);
  double pop = 0.0;
  for (int i = 0; i < 4; ++i)
    pop += state.amps.segment(i * v + first, v - first).squaredNorm();
  const double total = state.amps.squaredNorm();
  return total > 0 ? pop / total : 0.0;
}

}  // namespace msgate
