#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "kimura/density.hpp"
#include "kimura/quadrature.hpp"

using Catch::Matchers::WithinAbs;
using kimura::InitialDensity;

TEST_CASE("every built-in density integrates to one") {
  for (const auto& key : InitialDensity::builtin_keys()) {
    const InitialDensity f0 = InitialDensity::from_key(key);
    const double mass =
        kimura::integrate([&](double x) { return f0(x); }, 0.0, 1.0, 1e-10,
                          f0.breakpoints());
    INFO("density " << key);
    REQUIRE_THAT(mass, WithinAbs(1.0, 1e-10));
    REQUIRE_THAT(f0.cdf(0.0), WithinAbs(0.0, 1e-12));
    REQUIRE_THAT(f0.cdf(1.0), WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("closed-form cumulative distributions") {
  const InitialDensity uniform = InitialDensity::from_key("uniform");
  const InitialDensity linear = InitialDensity::from_key("2x");
  const InitialDensity quadratic = InitialDensity::from_key("3x2");
  for (double x : {0.1, 0.4, 0.8}) {
    REQUIRE_THAT(uniform.cdf(x), WithinAbs(x, 1e-12));
    REQUIRE_THAT(linear.cdf(x), WithinAbs(x * x, 1e-12));
    REQUIRE_THAT(quadratic.cdf(x), WithinAbs(x * x * x, 1e-12));
  }
  const InitialDensity parabola = InitialDensity::from_key("6x(1-x)");
  REQUIRE_THAT(parabola.cdf(0.5), WithinAbs(0.5, 1e-12));
}

TEST_CASE("indicator density is supported on the right half") {
  const InitialDensity f0 = InitialDensity::from_key("indicator");
  REQUIRE_THAT(f0(0.25), WithinAbs(0.0, 0.0));
  REQUIRE_THAT(f0(0.75), WithinAbs(2.0, 1e-12));
  REQUIRE_THAT(f0.cdf(0.5), WithinAbs(0.0, 1e-12));
  REQUIRE_THAT(f0.cdf(0.75), WithinAbs(0.5, 1e-10));
}

TEST_CASE("two-bump density vanishes between its lobes") {
  const InitialDensity f0 = InitialDensity::from_key("two-bump");
  REQUIRE_THAT(f0(0.6), WithinAbs(0.0, 0.0));
  // Raw lobes x(0.5-x) and (x-0.7)(1-x) carry total mass 19/750, so the
  // normalizer is 750/19.
  REQUIRE_THAT(f0(0.25), WithinAbs((750.0 / 19.0) * 0.25 * 0.25, 1e-10));
  REQUIRE_THAT(f0.cdf(0.7) - f0.cdf(0.5), WithinAbs(0.0, 1e-12));
}

TEST_CASE("key lookup") {
  REQUIRE(InitialDensity::builtin_keys().size() == 7);
  REQUIRE(InitialDensity::is_builtin("1-sin"));
  REQUIRE_FALSE(InitialDensity::is_builtin("gaussian"));
  REQUIRE_THROWS_AS(InitialDensity::from_key("gaussian"), std::invalid_argument);
}
