#pragma once

#include <stdexcept>

namespace kimura {

/// Uniform partition of the mass coordinate interval [0, 1] into N cells of
/// width h = 1/N.  Node i carries the mass fraction eta = i h; maps and
/// drift arrays are indexed 0..N over these nodes.
struct MassGrid {
  int N;
  double h;

  explicit MassGrid(int n) : N(n), h(0.0) {
    if (n < 2) throw std::invalid_argument("MassGrid: at least two cells required");
    h = 1.0 / n;
  }

  double eta(int i) const { return i * h; }

  friend bool operator==(const MassGrid&, const MassGrid&) = default;
};

}  // namespace kimura
