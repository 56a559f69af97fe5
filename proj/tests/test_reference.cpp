#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "kimura/density.hpp"
#include "kimura/quadrature.hpp"
#include "kimura/reference.hpp"

using Catch::Matchers::WithinAbs;
using kimura::FitnessPotential;
using kimura::InitialDensity;

TEST_CASE("fixation probability reduces to the identity without selection") {
  const FitnessPotential none = FitnessPotential::zero();
  for (double kappa : {0.5, 2.0, 7.0}) {
    for (double x : {0.0, 0.3, 0.75, 1.0}) {
      REQUIRE_THAT(kimura::fixation_probability(none, kappa, x), WithinAbs(x, 1e-10));
    }
  }
}

TEST_CASE("closed-form fixation value for constant selection") {
  // V' = 2, kappa = 2: theta(1/2) = (e - 1)/(e^2 - 1) = 1/(e + 1).
  const double theta = kimura::fixation_probability(FitnessPotential({2.0}), 2.0, 0.5);
  REQUIRE_THAT(theta, WithinAbs(1.0 / (std::exp(1.0) + 1.0), 1e-10));
}

TEST_CASE("fixation endpoints and monotonicity") {
  const FitnessPotential v({1.0, -3.0});
  REQUIRE_THAT(kimura::fixation_probability(v, 2.0, 0.0), WithinAbs(0.0, 0.0));
  REQUIRE_THAT(kimura::fixation_probability(v, 2.0, 1.0), WithinAbs(1.0, 0.0));
  double prev = 0.0;
  for (int k = 1; k <= 1000; ++k) {
    const double cur = kimura::fixation_probability(v, 2.0, k / 1000.0);
    REQUIRE(cur >= prev - 1e-12);
    prev = cur;
  }
}

TEST_CASE("fixation values against an independent high-precision evaluation") {
  // Reference numbers computed with 30-digit arithmetic in a separate tool.
  REQUIRE_THAT(kimura::fixation_probability(FitnessPotential({1.0, -3.0}), 2.0, 0.5),
               WithinAbs(0.558434515166012, 1e-10));
  REQUIRE_THAT(kimura::fixation_probability(FitnessPotential({2.0, 4.0}), 1.0, 0.25),
               WithinAbs(0.00180201919482151, 1e-10));
}

TEST_CASE("jump location for quadratic data under constant selection") {
  const InitialDensity f0 = InitialDensity::from_key("3x2");
  REQUIRE_THAT(kimura::theoretical_jump(f0, FitnessPotential({2.0}), 2.0),
               WithinAbs(0.4065176427, 1e-6));
  REQUIRE_THAT(kimura::theoretical_jump(f0, FitnessPotential({1.0, -3.0}), 2.0),
               WithinAbs(0.2053878775, 1e-6));
}

TEST_CASE("jump location without selection is one minus the mass center") {
  const InitialDensity linear = InitialDensity::from_key("2x");
  REQUIRE_THAT(kimura::theoretical_jump(linear, FitnessPotential::zero(), 2.0),
               WithinAbs(1.0 / 3.0, 1e-8));
  for (const char* key : {"6x(1-x)", "1-sin"}) {
    REQUIRE_THAT(
        kimura::theoretical_jump(InitialDensity::from_key(key), FitnessPotential::zero(), 2.0),
        WithinAbs(0.5, 1e-8));
  }
}

TEST_CASE("jump location complements the absorbed mass") {
  const InitialDensity f0 = InitialDensity::from_key("two-bump");
  const FitnessPotential v({2.0});
  const double eta0 = kimura::theoretical_jump(f0, v, 2.0);
  const double absorbed = kimura::integrate(
      [&](double x) { return f0(x) * kimura::fixation_probability(v, 2.0, x); }, 0.0, 1.0,
      1e-8, f0.breakpoints());
  REQUIRE_THAT(eta0 + absorbed, WithinAbs(1.0, 1e-7));
}
