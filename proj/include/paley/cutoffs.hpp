// Dyadic radial cutoffs chi, phi and the partial-sum profiles.
//
// A smooth monotone step theta (1 on r <= 1, 0 on r >= 4/3, built from the
// bump exp(-s/x)) generates the whole system:
//   chi(r)    = theta(r)
//   phi(r)    = theta(r/2) - theta(r)
// so chi(r) + sum_{q=0..Q} phi(2^-q r) telescopes to theta(2^-(Q+1) r) and
// the partition of unity holds to roundoff wherever enough terms are
// summed, independent of how accurately theta itself is tabulated.
// Support: chi lives in {r < 4/3}, phi in {1 <= r <= 8/3}, comfortably
// inside the required annulus {3/4 < r < 8/3}.
//
// theta is tabulated once on the transition interval and evaluated by
// monotone cubic (Fritsch-Carlson) interpolation, which preserves both
// monotonicity and the range [0,1], so chi^2 + sum phi^2 stays in
// [1/2, 1] by the algebra of x^2 + (1-x)^2.

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace paley {

class SmoothStep {
 public:
  // Step from 1 to 0 across [lo, hi]; sharpness scales the bump argument.
  SmoothStep(double lo, double hi, double sharpness, int table_cells = 4096)
      : lo_(lo), hi_(hi) {
    if (!(hi > lo) || !(sharpness > 0) || table_cells < 8)
      throw std::invalid_argument("smooth step: bad parameters");
    const int m = table_cells;
    h_ = (hi - lo) / m;
    val_.resize(m + 1);
    slope_.resize(m + 1);
    // theta(r) = b(tb) / (b(tb) + b(ta)) with b(x) = exp(-sharpness/x),
    // ta, tb the normalized distances to the interval ends.
    for (int i = 0; i <= m; ++i) {
      const double t = static_cast<double>(i) / m;  // 0 at lo, 1 at hi
      const double num = bump(1.0 - t, sharpness);
      const double den = num + bump(t, sharpness);
      val_[i] = num / den;
    }
    val_.front() = 1.0;
    val_.back() = 0.0;

    // Fritsch-Carlson slopes: harmonic mean of adjacent secants, zero at
    // local flats, which keeps the interpolant monotone and inside [0,1].
    std::vector<double> sec(m);
    for (int i = 0; i < m; ++i) sec[i] = (val_[i + 1] - val_[i]) / h_;
    slope_[0] = sec[0];
    slope_[m] = sec[m - 1];
    for (int i = 1; i < m; ++i) {
      if (sec[i - 1] * sec[i] <= 0)
        slope_[i] = 0.0;
      else
        slope_[i] = 2.0 * sec[i - 1] * sec[i] / (sec[i - 1] + sec[i]);
    }
  }

  double lower() const { return lo_; }
  double upper() const { return hi_; }

  double operator()(double r) const {
    if (r <= lo_) return 1.0;
    if (r >= hi_) return 0.0;
    const double s = (r - lo_) / h_;
    int i = static_cast<int>(s);
    const int m = static_cast<int>(val_.size()) - 1;
    if (i >= m) i = m - 1;
    const double t = s - i;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * val_[i] + h_ * h10 * slope_[i] + h01 * val_[i + 1] + h_ * h11 * slope_[i + 1];
  }

  // Fraction of the table where the step is strictly between tail and
  // 1 - tail; a resolution diagnostic for extreme sharpness values.
  double transition_fraction(double tail = 1e-3) const {
    int count = 0;
    for (double v : val_)
      if (v < 1.0 - tail && v > tail) ++count;
    return static_cast<double>(count) / static_cast<double>(val_.size() - 1);
  }

  int table_cells() const { return static_cast<int>(val_.size()) - 1; }

 private:
  static double bump(double x, double sharpness) {
    return x > 0 ? std::exp(-sharpness / x) : 0.0;
  }

  double lo_, hi_, h_;
  std::vector<double> val_, slope_;
};

struct CutoffSystem {
  SmoothStep step;  // theta: the generator of the whole system
  double sharpness;
  // Set when the transition band covers too few table cells for the
  // interpolant to resolve it; recorded in reports, not fatal.
  bool under_resolved;
  double transition_fraction;

  double chi(double r) const { return step(r); }
  double phi(double r) const { return step(0.5 * r) - step(r); }

  // Radial profile of Delta_q: chi for q = -1, phi(2^-q r) for q >= 0.
  double block_profile(int q, double r) const {
    if (q < -1) throw std::invalid_argument("block profile: q >= -1 required");
    return q == -1 ? chi(r) : phi(std::ldexp(r, -q));
  }

  // Radial profile of S_j = sum of blocks below j: theta(2^-j r) by the
  // telescoping identity; S_{-1} = 0.
  double low_pass_profile(int j, double r) const {
    if (j < -1) throw std::invalid_argument("low-pass profile: j >= -1 required");
    return j == -1 ? 0.0 : step(std::ldexp(r, -j));
  }

  // Largest q whose annulus lower edge (3/4) 2^q still fits below n/2.
  int max_block(int n) const {
    int q = 0;
    while (0.75 * std::ldexp(1.0, q + 1) <= 0.5 * n) ++q;
    return q;
  }
};

inline CutoffSystem build_cutoffs(double sharpness = 1.0, int table_cells = 4096) {
  SmoothStep step(1.0, 4.0 / 3.0, sharpness, table_cells);
  const double frac = step.transition_fraction();
  const bool warn = frac * step.table_cells() < 64.0;
  return CutoffSystem{step, sharpness, warn, frac};
}

}  // namespace paley
