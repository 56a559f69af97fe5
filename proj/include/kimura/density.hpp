#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kimura/quadrature.hpp"

namespace kimura {

/// Probability density f0 on [0, 1] used as initial data.  Construction
/// rescales the supplied evaluator so the total mass is one (the reference
/// jump-location formula assumes unit mass).  Interior breakpoints mark
/// kinks or support edges of piecewise definitions; integration and CDF
/// evaluation split there to keep full quadrature accuracy.
class InitialDensity {
 public:
  InitialDensity(std::string name, std::function<double(double)> raw,
                 std::vector<double> breakpoints = {})
      : name_(std::move(name)), raw_(std::move(raw)), breakpoints_(std::move(breakpoints)) {
    std::sort(breakpoints_.begin(), breakpoints_.end());
    const double mass = integrate(raw_, 0.0, 1.0, 1e-12, breakpoints_);
    if (!(mass > 0.0)) {
      throw std::invalid_argument("InitialDensity: total mass must be positive");
    }
    scale_ = 1.0 / mass;

    // Cumulative mass at 0, each breakpoint, and 1; cdf() then only has to
    // integrate from the nearest anchor on the left.
    anchors_.push_back(0.0);
    for (double b : breakpoints_) {
      if (b > 0.0 && b < 1.0) anchors_.push_back(b);
    }
    anchors_.push_back(1.0);
    cumulative_.assign(anchors_.size(), 0.0);
    for (std::size_t j = 1; j < anchors_.size(); ++j) {
      cumulative_[j] = cumulative_[j - 1] +
                       scale_ * integrate(raw_, anchors_[j - 1], anchors_[j], 1e-13);
    }
    cumulative_.back() = 1.0;
  }

  /// Normalized density value.
  double operator()(double x) const { return scale_ * raw_(x); }

  /// CDF of the normalized density, F(x) = integral from 0 to x.
  double cdf(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    std::size_t j = anchors_.size() - 1;
    while (anchors_[j] > x) --j;
    return cumulative_[j] + scale_ * integrate(raw_, anchors_[j], x, 1e-13);
  }

  const std::string& name() const { return name_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }

  /// Built-in densities addressable by CLI config keys.
  static InitialDensity from_key(std::string_view key);
  static const std::vector<std::string>& builtin_keys();
  static bool is_builtin(std::string_view key);

 private:
  std::string name_;
  std::function<double(double)> raw_;
  std::vector<double> breakpoints_;
  double scale_ = 1.0;
  std::vector<double> anchors_;
  std::vector<double> cumulative_;
};

inline InitialDensity InitialDensity::from_key(std::string_view key) {
  constexpr double pi = std::numbers::pi;
  if (key == "uniform") {
    return InitialDensity("uniform", [](double) { return 1.0; });
  }
  if (key == "2x") {
    return InitialDensity("2x", [](double x) { return 2.0 * x; });
  }
  if (key == "3x2") {
    return InitialDensity("3x2", [](double x) { return 3.0 * x * x; });
  }
  if (key == "6x(1-x)") {
    return InitialDensity("6x(1-x)", [](double x) { return 6.0 * x * (1.0 - x); });
  }
  if (key == "1-sin") {
    return InitialDensity(
        "1-sin", [](double x) { return (pi / (pi - 2.0)) * (1.0 - std::sin(pi * x)); });
  }
  if (key == "indicator") {
    return InitialDensity(
        "indicator", [](double x) { return x >= 0.5 ? 1.0 : 0.0; }, {0.5});
  }
  if (key == "two-bump") {
    return InitialDensity(
        "two-bump",
        [](double x) { return std::max({0.0, x * (0.5 - x), (x - 0.7) * (1.0 - x)}); },
        {0.5, 0.7});
  }
  throw std::invalid_argument("unknown density key: " + std::string(key));
}

inline const std::vector<std::string>& InitialDensity::builtin_keys() {
  static const std::vector<std::string> keys{
      "uniform", "2x", "3x2", "6x(1-x)", "1-sin", "indicator", "two-bump"};
  return keys;
}

inline bool InitialDensity::is_builtin(std::string_view key) {
  const auto& keys = builtin_keys();
  return std::find(keys.begin(), keys.end(), key) != keys.end();
}

}  // namespace kimura
