#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "msgate/effective.hpp"
#include "msgate/fockspace.hpp"
#include "msgate/gates.hpp"

using namespace msgate;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
const std::vector<DriveField> kMonoPair{{1, 0.1, 0.9, 0.0}, {2, 0.1, -0.9, 0.0}};

bool approx_identity(const Eigen::Matrix4cd& m, double tol) {
  return (m - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() < tol;
}
}  // namespace

TEST_SUITE("gates") {
  TEST_CASE("named gates have the expected small-group relations") {
    const Eigen::Matrix4cd p1 = gate({"P", 1, 0.0});
    const Eigen::Matrix4cd h2 = gate({"H", 2, 0.0});
    const Eigen::Matrix4cd r0 = gate({"R", 0, 0.0});
    CHECK(approx_identity(p1 * p1 * p1 * p1, 1e-14));
    CHECK(approx_identity(r0, 1e-14));
    CHECK(approx_identity(gate({"P_inv", 1, 0.0}) * p1, 1e-14));
    // The resonant-pulse rotation squares to a bit flip on its ion, not to
    // the identity (it is not an involution like the textbook variant).
    const Eigen::Matrix4cd h2sq = h2 * h2;
    CHECK(std::abs(std::abs(h2sq(GE, GG)) - 1.0) < 1e-14);
    CHECK(std::abs(h2sq(GG, GG)) < 1e-14);
  }

  TEST_CASE("unknown gate names are rejected") {
    CHECK_THROWS_AS(gate({"Q", 1, 0.0}), UnknownGate);
    CHECK_THROWS_AS(gate({"P", 3, 0.0}), InvalidParams);
  }

  TEST_CASE("entangling pulses compose as a semigroup in the accumulated angle") {
    const Eigen::Matrix4cd a = gate({"R", 0, -0.7});
    const Eigen::Matrix4cd b = gate({"R", 0, -0.9});
    const Eigen::Matrix4cd ab = gate({"R", 0, -1.6});
    CHECK((a * b - ab).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((a * b - b * a).cwiseAbs().maxCoeff() < 1e-14);
  }

  TEST_CASE("compose applies operations in temporal order") {
    GateSequence seq;
    seq.ops = {{"P", 1, 0.0}, {"H", 1, 0.0}};
    const Eigen::Matrix4cd u = compose(seq);
    const Eigen::Matrix4cd expect = gate({"H", 1, 0.0}) * gate({"P", 1, 0.0});
    CHECK((u - expect).cwiseAbs().maxCoeff() < 1e-14);
  }

  TEST_CASE("random products of named gates stay unitary") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> pick(0, 3);
    std::uniform_real_distribution<double> angle(-2.0, 2.0);
    const char* names[4] = {"P", "P_inv", "H", "R"};
    for (int trial = 0; trial < 20; ++trial) {
      GateSequence seq;
      for (int k = 0; k < 12; ++k) {
        const int which = pick(rng);
        seq.ops.push_back({names[which], which == 3 ? 0 : 1 + (k % 2), angle(rng)});
      }
      const Eigen::Matrix4cd u = compose(seq);
      CHECK((u.adjoint() * u - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() < 1e-9);
    }
  }

  TEST_CASE("the nine-operation sequence composes to a controlled-NOT") {
    const double fid = fidelity_up_to_phase(compose(cnot_sequence()), cnot_ideal());
    CHECK(fid >= 1.0 - 1e-10);
  }

  TEST_CASE("fidelity is symmetric, phase-invariant, and separates gates") {
    const Eigen::Matrix4cd u = compose(cnot_sequence());
    const Eigen::Matrix4cd v = cnot_ideal();
    CHECK(fidelity_up_to_phase(Eigen::Matrix4cd::Identity(), v) == doctest::Approx(0.5));
    CHECK(fidelity_up_to_phase(u, v) == doctest::Approx(fidelity_up_to_phase(v, u)));
    const Eigen::Matrix4cd w = std::polar(1.0, 1.234) * u;
    CHECK(fidelity_up_to_phase(w, u) == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("controlled-NOT acts on the computational basis with control on ion 1") {
    const Eigen::Matrix4cd c = cnot_ideal();
    CHECK(std::abs(c(GG, GG) - 1.0) < 1e-14);
    CHECK(std::abs(c(GE, GE) - 1.0) < 1e-14);
    CHECK(std::abs(c(EE, EG) - 1.0) < 1e-14);
    CHECK(std::abs(c(EG, EE) - 1.0) < 1e-14);
  }

  TEST_CASE("echo run rejects drive lists that are not a monochromatic pair") {
    SimParams p;
    p.basis.n_max = 8;
    p.t_final = 10.0;
    const StateVector s0 =
        product_state(Eigen::Vector4cd::Unit(GG), make_vib_state(Fock{0}, p.basis), p.basis);
    CHECK_THROWS_AS(echo_gate_run(s0, p, {{1, 0.1, 0.9, 0.0}}), InvalidParams);
    CHECK_THROWS_AS(echo_gate_run(s0, p, {{1, 0.1, 0.9, 0.0}, {2, 0.2, -0.9, 0.0}}), InvalidParams);
    CHECK_THROWS_AS(echo_gate_run(s0, p, {{1, 0.1, 0.9, 0.0}, {2, 0.1, -0.8, 0.0}}), InvalidParams);
    CHECK_THROWS_AS(echo_gate_run(s0, p, {{1, 0.1, 0.9, 0.0}, {1, 0.1, -0.9, 0.0}}), InvalidParams);
  }

  TEST_CASE("echo over one inversion produces the entangled target from a definite phonon state") {
    const std::vector<DriveField> weak{{1, 0.05, 0.9, 0.0}, {2, 0.05, -0.9, 0.0}};
    SimParams p;
    p.basis.n_max = 8;
    EvolveOptions opts;
    opts.sample_dt = 20.0;
    const Eigen::Vector4cd internal =
        (Eigen::Vector4cd::Unit(GG) + Eigen::Vector4cd::Unit(EG)).normalized();
    const StateVector s0 = product_state(internal, make_vib_state(Fock{0}, p.basis), p.basis);
    const EvolutionRecord rec = echo_gate_run(s0, p, weak, opts);

    CHECK(rec.times.back() == doctest::Approx(2.0 * kPi * 4000.0).epsilon(1e-9));
    Eigen::Vector4cd target = Eigen::Vector4cd::Zero();
    target(EG) = 1.0 / std::sqrt(2.0);
    target(EE) = Complex(0.0, -1.0) / std::sqrt(2.0);
    const double fid =
        (target.adjoint() * rec.internal_rhos.back() * target).value().real();
    CHECK(fid >= 0.95);

    // For a single phonon number the flip is inert: the final coherence
    // matches the plain run to within one percent.
    SimParams plain_params = p;
    plain_params.t_final = rec.times.back();
    const EvolutionRecord plain = evolve(s0, weak, DetuningSchedule{}, plain_params, opts);
    const double coh_flip = std::abs(rec.internal_rhos.back()(EE, EG));
    const double coh_plain = std::abs(plain.internal_rhos.back()(EE, EG));
    CHECK(std::abs(coh_flip - coh_plain) / coh_plain < 0.01);
  }

  TEST_CASE("the flip rescues the phonon-mixture coherence that dephases without it") {
    SimParams p;
    p.basis.n_max = 10;  // headroom: the virtual ladder from n=1 reaches ~n+3
    EvolveOptions opts;
    opts.sample_dt = 10.0;
    const Eigen::Vector4cd internal =
        (Eigen::Vector4cd::Unit(GG) + Eigen::Vector4cd::Unit(EG)).normalized();
    InternalDensityMatrix mix_flip = InternalDensityMatrix::Zero();
    InternalDensityMatrix mix_plain = InternalDensityMatrix::Zero();
    SimParams plain_params = p;
    plain_params.t_final = 2.0 * kPi * 1000.0;
    for (int n = 0; n <= 1; ++n) {
      const StateVector s0 = product_state(internal, make_vib_state(Fock{n}, p.basis), p.basis);
      mix_flip += 0.5 * echo_gate_run(s0, p, kMonoPair, opts).internal_rhos.back();
      mix_plain +=
          0.5 * evolve(s0, kMonoPair, DetuningSchedule{}, plain_params, opts).internal_rhos.back();
    }
    const double coh_flip = std::abs(mix_flip(EE, EG));
    const double coh_plain = std::abs(mix_plain(EE, EG));
    CHECK(coh_flip > coh_plain);
    CHECK(coh_flip >= 2.0 * coh_plain);
  }
}
