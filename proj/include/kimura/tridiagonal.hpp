#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace kimura {

/// Tridiagonal matrix with the Thomas solve.  Elimination does not pivot:
/// splitting-step Jacobians are strictly diagonally dominant, and the
/// corrected step's Newton loop treats a zero pivot or a poor solve near
/// node collapse as a failed attempt and continues with a smaller step.
struct Tridiagonal {
  std::vector<double> lower;  // subdiagonal, size n-1
  std::vector<double> diag;   // size n
  std::vector<double> upper;  // superdiagonal, size n-1

  explicit Tridiagonal(std::size_t n)
      : lower(n > 0 ? n - 1 : 0, 0.0), diag(n, 0.0), upper(n > 0 ? n - 1 : 0, 0.0) {}

  std::size_t size() const { return diag.size(); }

  std::vector<double> apply(std::span<const double> x) const {
    const std::size_t n = size();
    if (x.size() != n) throw std::invalid_argument("Tridiagonal::apply: size mismatch");
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = diag[i] * x[i];
      if (i > 0) y[i] += lower[i - 1] * x[i - 1];
      if (i + 1 < n) y[i] += upper[i] * x[i + 1];
    }
    return y;
  }

  std::vector<double> solve(std::vector<double> rhs) const {
    const std::size_t n = size();
    if (rhs.size() != n) throw std::invalid_argument("Tridiagonal::solve: size mismatch");
    if (n == 0) return rhs;
    std::vector<double> scratch(n > 0 ? n - 1 : 0, 0.0);
    double pivot = diag[0];
    if (pivot == 0.0) throw std::runtime_error("Tridiagonal::solve: zero pivot");
    if (n > 1) scratch[0] = upper[0] / pivot;
    rhs[0] /= pivot;
    for (std::size_t i = 1; i < n; ++i) {
      pivot = diag[i] - lower[i - 1] * scratch[i - 1];
      if (pivot == 0.0) throw std::runtime_error("Tridiagonal::solve: zero pivot");
      if (i + 1 < n) scratch[i] = upper[i] / pivot;
      rhs[i] = (rhs[i] - lower[i - 1] * rhs[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) {
      rhs[i] -= scratch[i] * rhs[i + 1];
    }
    return rhs;
  }
};

}  // namespace kimura
