#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "kimura/scheme.hpp"
#include "oracles.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinULP;
using namespace kimura;

TEST_CASE("active window bookkeeping") {
  const MassGrid grid(10);
  const ActiveWindow w = ActiveWindow::full(grid);
  REQUIRE(w.left == 1);
  REQUIRE(w.right == 9);
  REQUIRE(w.count() == 9);
  REQUIRE_FALSE(w.empty());
  REQUIRE(ActiveWindow{3, 2}.empty());
  REQUIRE(residual_euler(std::vector<double>{0.0, 0.5, 1.0},
                         std::vector<double>{0.0, 0.5, 1.0},
                         ModelSpec::diffusion(2.0), 0.1, ActiveWindow{1, 0})
              .empty());
}

TEST_CASE("implicit residual vanishes at the symmetric steady map") {
  const ModelSpec model = ModelSpec::diffusion(2.0);
  const std::vector<double> vals{0.0, 0.5, 1.0};
  const auto r = residual_euler(vals, vals, model, 0.1, ActiveWindow{1, 1});
  REQUIRE(r.size() == 1);
  REQUIRE(r[0] == 0.0);
}

TEST_CASE("implicit residual reduces to the time term when neighbors are clamped") {
  // With both neighbors on the boundary the diffusion and repulsion terms
  // cancel exactly, leaving (x - p) / (tau x (1 - x)).
  const ModelSpec model = ModelSpec::diffusion(2.0);
  const double tau = 0.1;
  const std::vector<double> prev{0.0, 0.5, 1.0};
  const std::vector<double> cur{0.0, 0.3, 1.0};
  const auto r = residual_euler(prev, cur, model, tau, ActiveWindow{1, 1});
  const double expected = (0.3 - 0.5) / (tau * 0.3 * (1.0 - 0.3));
  REQUIRE(r[0] == expected);
}

TEST_CASE("splitting residual is the scaled gradient of the step objective") {
  const MassGrid grid(4);
  const TransportMap prev = TransportMap::identity(grid);
  const double tau = 0.1;
  const ActiveWindow w = ActiveWindow::full(grid);
  const std::vector<double> cur{0.0, 0.2, 0.45, 0.8, 1.0};

  for (const ModelSpec& model :
       {ModelSpec::diffusion(2.0), ModelSpec(2.0, FitnessPotential({2.0, -4.0}))}) {
    const auto r = residual_split(prev.values(), cur, model, tau, w);
    std::vector<double> y(cur.begin() + 1, cur.end() - 1);
    const double eps = 1e-7;
    for (int k = 0; k < w.count(); ++k) {
      std::vector<double> plus(y), minus(y);
      plus[k] += eps;
      minus[k] -= eps;
      const double grad = (split_objective(prev, plus, model, tau, w) -
                           split_objective(prev, minus, model, tau, w)) /
                          (2.0 * eps);
      REQUIRE_THAT(r[k], WithinAbs(grad / grid.h, 1e-6));
    }
  }
}

TEST_CASE("splitting residual vanishes at the objective minimizer") {
  const MassGrid grid(4);
  const TransportMap prev = TransportMap::identity(grid);
  const ModelSpec model = ModelSpec::diffusion(2.0);
  const ActiveWindow w = ActiveWindow::full(grid);
  const auto minimizer = oracles::minimize_split_objective(prev, model, 0.1, w);
  const auto r = residual_split(prev.values(), minimizer, model, 0.1, w);
  for (double v : r) REQUIRE_THAT(v, WithinAbs(0.0, 1e-6));
}

TEST_CASE("splitting Jacobian off-diagonals") {
  // dF_i/dx_{i+1} = -(kappa/2) / gap^2; at gap 1/2 and kappa 2 that is -4.
  const ModelSpec model = ModelSpec::diffusion(2.0);
  const std::vector<double> vals{0.0, 0.25, 0.75, 1.0};
  const auto J = jacobian(vals, vals, model, 0.1, ActiveWindow{1, 2}, Scheme::split);
  REQUIRE(J.size() == 2);
  REQUIRE(J.upper[0] == -4.0);
  REQUIRE(J.lower[0] == -4.0);
}

TEST_CASE("implicit Jacobian at the symmetric steady map") {
  // Gap stiffness and the repulsion derivative cancel at x = 1/2, so the
  // whole diagonal is the time-term derivative 4 / tau.
  const ModelSpec model = ModelSpec::diffusion(2.0);
  const double tau = 0.1;
  const std::vector<double> vals{0.0, 0.5, 1.0};
  const auto J = jacobian(vals, vals, model, tau, ActiveWindow{1, 1}, Scheme::euler);
  REQUIRE(J.size() == 1);
  REQUIRE_THAT(J.diag[0], WithinULP(4.0 / tau, 1));
}

TEST_CASE("splitting Jacobian is symmetric positive definite") {
  std::mt19937 gen(77);
  const MassGrid grid(8);
  const ModelSpec model(2.0, FitnessPotential({1.0, -3.0}));
  const ActiveWindow w = ActiveWindow::full(grid);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto prev = oracles::random_increasing_values(gen, grid.N);
    const auto cur = oracles::random_increasing_values(gen, grid.N);
    const auto J = jacobian(prev, cur, model, 0.05, w, Scheme::split);
    for (std::size_t k = 0; k + 1 < J.size(); ++k) {
      REQUIRE(J.lower[k] == J.upper[k]);
    }
    // Strict diagonal dominance with positive diagonal implies positive
    // definiteness for a symmetric matrix.
    for (std::size_t k = 0; k < J.size(); ++k) {
      double off = 0.0;
      if (k > 0) off += std::abs(J.lower[k - 1]);
      if (k + 1 < J.size()) off += std::abs(J.upper[k]);
      REQUIRE(J.diag[k] > off);
    }
    std::vector<double> x(J.size());
    for (double& v : x) v = dist(gen);
    const auto Jx = J.apply(x);
    double quad = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) quad += x[k] * Jx[k];
    REQUIRE(quad > 0.0);
  }
}

TEST_CASE("analytic Jacobians match central differences") {
  std::mt19937 gen(4242);
  const MassGrid grid(6);
  const ModelSpec model(2.0, FitnessPotential({2.0, 4.0}));
  const ActiveWindow w = ActiveWindow::full(grid);
  for (int trial = 0; trial < 5; ++trial) {
    const auto prev = oracles::random_increasing_values(gen, grid.N);
    const auto cur = oracles::random_increasing_values(gen, grid.N);
    for (Scheme scheme : {Scheme::euler, Scheme::split}) {
      const auto J = jacobian(prev, cur, model, 0.05, w, scheme);
      const auto F = oracles::fd_jacobian(prev, cur, model, 0.05, w, scheme, 1e-6);
      const auto close = [](double a, double b) {
        return std::abs(a - b) <= 1e-5 * std::max({std::abs(a), std::abs(b), 1.0});
      };
      for (std::size_t k = 0; k < J.size(); ++k) {
        REQUIRE(close(J.diag[k], F.diag[k]));
        if (k + 1 < J.size()) {
          REQUIRE(close(J.lower[k], F.lower[k]));
          REQUIRE(close(J.upper[k], F.upper[k]));
        }
      }
    }
  }
}

TEST_CASE("residuals reject infeasible input") {
  const ModelSpec model = ModelSpec::diffusion(2.0);
  const ActiveWindow w{1, 3};
  const std::vector<double> good{0.0, 0.2, 0.5, 0.8, 1.0};
  const std::vector<double> crossed{0.0, 0.5, 0.4, 0.8, 1.0};
  REQUIRE_THROWS_AS(residual_euler(good, crossed, model, 0.1, w), std::domain_error);
  REQUIRE_THROWS_AS(residual_split(good, crossed, model, 0.1, w), std::domain_error);
  REQUIRE_THROWS_AS(jacobian(good, crossed, model, 0.1, w, Scheme::euler),
                    std::domain_error);

  // The splitting residual also needs the previous map interior on the window.
  const std::vector<double> clamped{0.0, 0.0, 0.5, 1.0, 1.0};
  REQUIRE_THROWS_AS(residual_split(clamped, good, model, 0.1, w), std::domain_error);

  REQUIRE_THROWS_AS(residual_euler(good, good, model, 0.0, w), std::invalid_argument);
  REQUIRE_THROWS_AS(residual_euler(good, good, model, -1.0, w), std::invalid_argument);
}

TEST_CASE("window restriction treats clamped neighbors as data") {
  const ModelSpec model = ModelSpec::diffusion(2.0);
  const MassGrid grid(4);
  const TransportMap steady(grid, {0.0, 0.0, 0.5, 1.0, 1.0});
  const ActiveWindow w{2, 2};
  const auto r = residual_euler(steady, steady, model, 0.1, w);
  REQUIRE(r.size() == 1);
  REQUIRE(r[0] == 0.0);
  const auto J = jacobian(steady, steady, model, 0.1, w, Scheme::euler);
  REQUIRE(J.size() == 1);
}

TEST_CASE("step objective rejects bad candidates") {
  const MassGrid grid(4);
  const TransportMap prev = TransportMap::identity(grid);
  const ModelSpec model = ModelSpec::diffusion(2.0);
  const ActiveWindow w = ActiveWindow::full(grid);

  const std::vector<double> crossed{0.3, 0.2, 0.8};
  REQUIRE(std::isinf(split_objective(prev, crossed, model, 0.1, w)));

  const std::vector<double> wrong_size{0.3, 0.5};
  REQUIRE_THROWS_AS(split_objective(prev, wrong_size, model, 0.1, w),
                    std::invalid_argument);

  const std::vector<double> fine{0.2, 0.45, 0.8};
  REQUIRE(std::isfinite(split_objective(prev, fine, model, 0.1, w)));
}
