#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <string>

#include "kimura/run_record.hpp"

using Catch::Matchers::WithinAbs;
using kimura::RunRecord;
using kimura::RunRow;

TEST_CASE("record enforces increasing sample times") {
  RunRecord record;
  REQUIRE(record.empty());
  record.append(RunRow{0.0, -1.0, 0.5, 0.1, 0.2, 0, 0, 0});
  record.append(RunRow{0.5, -1.1, 0.5, 0.05, 0.1, 1, 2, 3});
  REQUIRE(record.size() == 2);
  REQUIRE_THROWS_AS(record.append(RunRow{0.5}), std::invalid_argument);
  REQUIRE_THROWS_AS(record.append(RunRow{0.25}), std::invalid_argument);
}

TEST_CASE("csv layout") {
  RunRecord record;
  record.append(RunRow{0.0, -0.25, 0.5, 0.125, 0.25, 0, 0, 0});
  record.append(RunRow{1.0, -0.5, 0.5, 0.0625, 0.125, 2, 3, 7});
  std::ostringstream out;
  record.write_csv(out);

  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  REQUIRE(line == "t,energy,conserved,l2,wasserstein,clamp_left,clamp_right,newton_iters");
  std::getline(in, line);
  REQUIRE(line ==
          "0.00000000000000e+00,-2.50000000000000e-01,5.00000000000000e-01,"
          "1.25000000000000e-01,2.50000000000000e-01,0,0,0");
  std::getline(in, line);
  REQUIRE(line ==
          "1.00000000000000e+00,-5.00000000000000e-01,5.00000000000000e-01,"
          "6.25000000000000e-02,1.25000000000000e-01,2,3,7");
  REQUIRE_FALSE(std::getline(in, line));

  // Identical records serialize identically.
  std::ostringstream again;
  record.write_csv(again);
  REQUIRE(out.str() == again.str());
}

TEST_CASE("decay rate recovered from a synthetic exponential") {
  // l2 = e^{-t}, so l2^2 decays at rate 2.
  RunRecord record;
  for (int k = 0; k <= 40; ++k) {
    const double t = 0.05 * k;
    record.append(RunRow{t, 0.0, 0.0, std::exp(-t), 0.0, 0, 0, 0});
  }
  const double rate = kimura::decay_rate_fit(record, 1e-4);
  REQUIRE_THAT(rate, WithinAbs(2.0, 1e-9));
}

TEST_CASE("decay fit excludes the resolution plateau") {
  // After t = 2 the samples sit at a plateau far above e^{-2t}; with the
  // floor at 50 h only the clean early samples survive and the fitted rate
  // stays at 2.
  const double h = 1e-4;  // floor at 50 h = 5e-3 in the squared norm
  RunRecord record;
  for (int k = 0; k <= 80; ++k) {
    const double t = 0.05 * k;
    const double l2 = std::max(std::exp(-t), 0.068);
    record.append(RunRow{t, 0.0, 0.0, l2, 0.0, 0, 0, 0});
  }
  const double rate = kimura::decay_rate_fit(record, h);
  REQUIRE_THAT(rate, WithinAbs(2.0, 1e-6));
}

TEST_CASE("decay fit needs enough usable samples") {
  RunRecord record;
  for (int k = 0; k < 9; ++k) {
    record.append(RunRow{0.1 * k, 0.0, 0.0, 1.0, 0.0, 0, 0, 0});
  }
  REQUIRE_THROWS_AS(kimura::decay_rate_fit(record, 1e-4), std::runtime_error);

  // The time window filter applies before the count check.
  RunRecord longer;
  for (int k = 0; k <= 40; ++k) {
    longer.append(RunRow{0.1 * k, 0.0, 0.0, 1.0, 0.0, 0, 0, 0});
  }
  REQUIRE_THROWS_AS(kimura::decay_rate_fit(longer, 1e-4, 0.0, 0.5), std::runtime_error);
  REQUIRE_NOTHROW(kimura::decay_rate_fit(longer, 1e-4, 0.0, 2.0));
}
