#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace kimura {

/// Dense univariate polynomial with real coefficients stored in ascending
/// order: coefficients()[k] multiplies x^k.  Degrees stay tiny here (fitness
/// potentials and their derivatives), so no attempt is made at numerical
/// sophistication beyond Horner evaluation and monotone root bracketing.
class Polynomial {
 public:
  /// The zero polynomial.
  Polynomial() : coeffs_{0.0} {}

  explicit Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.push_back(0.0);
    for (double c : coeffs_) {
      if (!std::isfinite(c)) {
        throw std::invalid_argument("Polynomial: coefficients must be finite");
      }
    }
  }

  double operator()(double x) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
      acc = acc * x + *it;
    }
    return acc;
  }

  /// Degree ignoring trailing zero coefficients; the zero polynomial has
  /// degree 0 by convention.
  int degree() const {
    for (int k = static_cast<int>(coeffs_.size()) - 1; k > 0; --k) {
      if (coeffs_[static_cast<std::size_t>(k)] != 0.0) return k;
    }
    return 0;
  }

  bool is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(),
                       [](double c) { return c == 0.0; });
  }

  Polynomial derivative() const {
    if (coeffs_.size() == 1) return Polynomial{};
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) {
      d[k - 1] = coeffs_[k] * static_cast<double>(k);
    }
    return Polynomial(std::move(d));
  }

  /// Antiderivative with zero constant term.
  Polynomial antiderivative() const {
    std::vector<double> a(coeffs_.size() + 1, 0.0);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      a[k + 1] = coeffs_[k] / static_cast<double>(k + 1);
    }
    return Polynomial(std::move(a));
  }

  const std::vector<double>& coefficients() const { return coeffs_; }

  /// All real roots inside [lo, hi], ascending and deduplicated.  Critical
  /// points (found recursively) split the interval into monotone pieces, each
  /// of which holds at most one root and is safe to bisect.
  std::vector<double> roots_in(double lo, double hi) const;

  /// Minimum value over [lo, hi]; attained at an endpoint or critical point.
  double min_on(double lo, double hi) const;

  /// Maximum of |p| over [lo, hi].
  double max_abs_on(double lo, double hi) const;

 private:
  std::vector<double> coeffs_;
};

inline std::vector<double> Polynomial::roots_in(double lo, double hi) const {
  if (!(hi >= lo)) throw std::invalid_argument("Polynomial::roots_in: inverted interval");
  std::vector<double> roots;
  const int deg = degree();
  if (deg == 0) return roots;
  if (deg == 1) {
    const double r = -coeffs_[0] / coeffs_[1];
    if (r >= lo && r <= hi) roots.push_back(r);
    return roots;
  }
  std::vector<double> cuts = derivative().roots_in(lo, hi);
  cuts.insert(cuts.begin(), lo);
  cuts.push_back(hi);
  for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
    double a = cuts[j];
    double b = cuts[j + 1];
    if (!(b > a)) continue;
    double fa = (*this)(a);
    double fb = (*this)(b);
    if (fa == 0.0) roots.push_back(a);
    if (fb == 0.0) roots.push_back(b);
    if (fa * fb < 0.0) {
      for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
        const double m = 0.5 * (a + b);
        const double fm = (*this)(m);
        if (fm == 0.0) {
          a = m;
          b = m;
          break;
        }
        if ((fa < 0.0) == (fm < 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
          fb = fm;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double x, double y) { return std::abs(x - y) < 1e-12; }),
              roots.end());
  return roots;
}

inline double Polynomial::min_on(double lo, double hi) const {
  double best = std::min((*this)(lo), (*this)(hi));
  for (double r : derivative().roots_in(lo, hi)) {
    best = std::min(best, (*this)(r));
  }
  return best;
}

inline double Polynomial::max_abs_on(double lo, double hi) const {
  double best = std::max(std::abs((*this)(lo)), std::abs((*this)(hi)));
  for (double r : derivative().roots_in(lo, hi)) {
    best = std::max(best, std::abs((*this)(r)));
  }
  return best;
}

}  // namespace kimura
