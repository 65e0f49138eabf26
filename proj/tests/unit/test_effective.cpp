#include <cmath>
#include <random>

#include "doctest.h"
#include "msgate/effective.hpp"

using namespace msgate;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
const EffectiveParams kReference{0.1, 0.1, 0.9, false};
}  // namespace

TEST_SUITE("effective") {
  TEST_CASE("monochromatic effective exchange frequency closed form") {
    // -(Omega*eta)^2 / (2(nu - delta)) with nu = 1.
    CHECK(effective_rabi(kReference) == doctest::Approx(-5e-4).epsilon(1e-12));
    CHECK(effective_rabi(kReference) < 0.0);
  }

  TEST_CASE("bichromatic drive doubles the exchange frequency") {
    EffectiveParams p = kReference;
    p.bichromatic = true;
    CHECK(effective_rabi(p) == doctest::Approx(2.0 * effective_rabi(kReference)).epsilon(1e-14));
  }

  TEST_CASE("detuning at the vibrational resonance is rejected") {
    EffectiveParams p = kReference;
    p.detuning = 1.0;
    CHECK_THROWS_AS(effective_rabi(p), PoleAtResonance);
    p.detuning = 1.0 + 0.5e-6;
    CHECK_THROWS_AS(effective_rabi(p), PoleAtResonance);
    p.detuning = 1.0 + 1e-3;
    CHECK_NOTHROW(effective_rabi(p));
  }

  TEST_CASE("per-level second-order frequency is independent of phonon number") {
    for (int n = 0; n <= 20; ++n) {
      const double w = second_order_rabi(kReference, n);
      // The n-dependence cancels analytically; only sqrt(n)^2 rounding is left.
      CHECK(std::abs(w - effective_rabi(kReference)) <=
            1e-12 * std::abs(effective_rabi(kReference)));
    }
  }

  TEST_CASE("light shifts match the second-order closed forms") {
    const StarkShifts s = stark_shifts(kReference, 1);
    const double eta_om = 0.1 * 0.1;
    CHECK(s.gg == doctest::Approx(-eta_om * eta_om / 4.0 / 0.1).epsilon(1e-12));
    CHECK(s.ee == doctest::Approx(s.gg).epsilon(1e-12));
    // eg at n = 1: +(eta*Omega)^2 n / (2(nu-delta)) - Omega^2/(2 delta)
    CHECK(s.eg == doctest::Approx(eta_om * eta_om / 0.2 - 0.01 / 1.8).epsilon(1e-10));
    CHECK(s.eg == doctest::Approx(-5.0555555555e-3).epsilon(1e-8));
    // ge at n = 1: -(eta*Omega)^2 (n+1) / (2(nu-delta)) + Omega^2/(2 delta)
    CHECK(s.ge == doctest::Approx(-eta_om * eta_om * 2.0 / 0.2 + 0.01 / 1.8).epsilon(1e-10));
  }

  TEST_CASE("same-state light shifts cancel in the gg-ee difference") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
      EffectiveParams p{0.01 + 0.2 * u(rng), 0.05 + 0.1 * u(rng), 0.5 + 0.45 * u(rng), false};
      const StarkShifts s = stark_shifts(p, static_cast<int>(u(rng) * 10));
      CHECK(std::abs(s.gg - s.ee) < 1e-15);
    }
  }

  TEST_CASE("carrier pole guards the light shifts") {
    EffectiveParams p = kReference;
    p.detuning = 5e-7;
    CHECK_THROWS_AS(stark_shifts(p, 0), CarrierPole);
  }

  TEST_CASE("inversion time equals pi over the exchange frequency") {
    const double t = inversion_time(kReference);
    CHECK(std::abs(t - kPi / std::abs(effective_rabi(kReference))) < 1e-12 * t);
    CHECK(t == doctest::Approx(2.0 * kPi * 1000.0).epsilon(1e-12));
  }

  TEST_CASE("full transfer takes five milliseconds at the reference drive") {
    // nu/2pi = 200 kHz, Omega/2pi = 20 kHz, eta = 0.1, delta = 0.9 nu.
    const double nu_rad = 2.0 * kPi * 200e3;
    const double t_seconds = inversion_time(kReference) / nu_rad;
    CHECK(t_seconds == doctest::Approx(5e-3).epsilon(1e-9));
  }

  TEST_CASE("entangling propagator is unitary and reduces to the identity") {
    const Eigen::Matrix4cd id = bichromatic_propagator(-1e-3, 0.0);
    CHECK((id - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() < 1e-15);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
      const Eigen::Matrix4cd p = bichromatic_propagator(1e-3 * u(rng), 5000.0 * (1 + u(rng)));
      CHECK((p.adjoint() * p - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  TEST_CASE("a half-period pulse fully swaps gg and ee") {
    const double w = -1e-3;
    const Eigen::Matrix4cd p = bichromatic_propagator(w, kPi / std::abs(w));
    Eigen::Vector4cd out = p * Eigen::Vector4cd::Unit(GG);
    CHECK(std::abs(out(GG)) < 1e-12);
    CHECK(std::abs(out(EE)) == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("a quarter-period pulse prepares the even-parity entangled pair") {
    const double w = -1e-3;
    const Eigen::Matrix4cd p = bichromatic_propagator(w, kPi / (2.0 * std::abs(w)));
    const Eigen::Vector4cd out = p * Eigen::Vector4cd::Unit(GG);
    Eigen::Vector4cd target = Eigen::Vector4cd::Zero();
    target(GG) = 1.0 / std::sqrt(2.0);
    target(EE) = Complex(0.0, -1.0) / std::sqrt(2.0);
    CHECK((out - target).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("the odd-parity block rotates with the opposite sense") {
    const double w = -1e-3, t = 400.0;
    const Eigen::Matrix4cd p = bichromatic_propagator(w, t);
    // {gg,ee} off-diagonals carry +i sin, {ge,eg} off-diagonals -i sin.
    CHECK(p(EE, GG).imag() == doctest::Approx(std::sin(w * t / 2.0)).epsilon(1e-12));
    CHECK(p(EG, GE).imag() == doctest::Approx(-std::sin(w * t / 2.0)).epsilon(1e-12));
    CHECK(p(EE, GG).imag() * p(EG, GE).imag() < 0.0);
  }
}
