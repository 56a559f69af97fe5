#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace kimura {

/// One sampled instant of a trajectory.  clamp_left / clamp_right count the
/// interior nodes absorbed at 0 and at 1; newton_iters is the total inner
/// iteration count spent on the step that produced this sample (0 for the
/// initial row).
struct RunRow {
  double t = 0.0;
  double energy = 0.0;
  double conserved = 0.0;
  double l2 = 0.0;
  double wasserstein = 0.0;
  int clamp_left = 0;
  int clamp_right = 0;
  int newton_iters = 0;
};

class RunRecord {
 public:
  void append(RunRow row) {
    if (!rows_.empty() && !(row.t > rows_.back().t)) {
      throw std::invalid_argument("RunRecord::append: sample times must increase");
    }
    rows_.push_back(row);
  }

  const std::vector<RunRow>& rows() const { return rows_; }
  bool empty() const { return rows_.empty(); }
  size_t size() const { return rows_.size(); }

  /// Writes the record as CSV.  Floating columns carry 15 significant
  /// digits so a written file round-trips through text unchanged.
  void write_csv(std::ostream& os) const {
    os << "t,energy,conserved,l2,wasserstein,clamp_left,clamp_right,newton_iters\n";
    char buf[160];
    for (const RunRow& r : rows_) {
      std::snprintf(buf, sizeof buf, "%.14e,%.14e,%.14e,%.14e,%.14e,%d,%d,%d\n",
                    r.t, r.energy, r.conserved, r.l2, r.wasserstein, r.clamp_left,
                    r.clamp_right, r.newton_iters);
      os << buf;
    }
  }

 private:
  std::vector<RunRow> rows_;
};

/// Fits the exponential decay rate of the squared distance column: the
/// least-squares slope of ln(l2^2) against t, sign-flipped so decay comes
/// out positive.  Samples below the spatial resolution floor 50 h (in the
/// squared norm) are excluded, as are samples outside [t_begin, t_end].
inline double decay_rate_fit(const RunRecord& record, double h, double t_begin = 0.0,
                             double t_end = std::numeric_limits<double>::infinity()) {
  std::vector<double> ts;
  std::vector<double> logs;
  for (const RunRow& r : record.rows()) {
    if (r.t < t_begin || r.t > t_end) continue;
    const double sq = r.l2 * r.l2;
    if (!(sq >= 50.0 * h)) continue;
    ts.push_back(r.t);
    logs.push_back(std::log(sq));
  }
  if (ts.size() < 10) {
    throw std::runtime_error(
        "decay_rate_fit: fewer than 10 usable samples above the resolution floor");
  }
  const size_t n = ts.size();
  double mean_t = 0.0, mean_y = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mean_t += ts[i];
    mean_y += logs[i];
  }
  mean_t /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < n; ++i) {
    num += (ts[i] - mean_t) * (logs[i] - mean_y);
    den += (ts[i] - mean_t) * (ts[i] - mean_t);
  }
  if (!(den > 0.0)) {
    throw std::runtime_error("decay_rate_fit: degenerate time samples");
  }
  return -num / den;
}

}  // namespace kimura
