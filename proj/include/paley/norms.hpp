// Time-axis norms and the inequality evaluators built on them.
//
// All series live on a uniform left-endpoint grid t_i = i*dt covering
// [0, T): integrals are left Riemann sums, sups are sample maxima, and the
// measure of a sample set is dt * count. On sampled data the two weak-norm
// forms are computed exactly:
//   * weak_lp_time_norm: sup over sigma of sigma * measure^{1/p}, attained
//     at the jumps of the empirical distribution, i.e. at sorted values;
//   * lorentz_dual_norm: sup over superlevel sets of measure^{-1/2} times
//     the integral, attained at tie boundaries of the sorted values (the
//     objective is quasi-convex along a run of equal values).
// weak <= dual <= 2 * weak for every series; the comparison suite measures
// the spread.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "paley/littlewood_paley.hpp"
#include "paley/spectral_field.hpp"

namespace paley {

struct TimeSeries {
  double dt = 0;
  Eigen::ArrayXd values;

  int size() const { return static_cast<int>(values.size()); }
  double duration() const { return dt * static_cast<double>(values.size()); }
};

// Per-block L2 and gradient-L2 histories on a shared time axis; column
// order q = -1, 0, ..., q_max.
struct BlockSeries {
  double dt = 0;
  Eigen::ArrayXXd l2;
  Eigen::ArrayXXd grad_l2;

  int size() const { return static_cast<int>(l2.rows()); }
  int blocks() const { return static_cast<int>(l2.cols()); }
};

namespace detail {
inline void require_series(const TimeSeries& f) {
  if (!(f.dt > 0)) throw std::invalid_argument("time series: dt must be positive");
  if (!f.values.allFinite()) throw std::invalid_argument("time series: values must be finite");
}
inline std::vector<double> sorted_abs_desc(const TimeSeries& f) {
  std::vector<double> v(f.values.size());
  for (int i = 0; i < f.size(); ++i) v[i] = std::abs(f.values[i]);
  std::sort(v.begin(), v.end(), std::greater<double>());
  return v;
}
}  // namespace detail

// sup_sigma sigma * |{t : |f(t)| > sigma}|^{1/p}.
inline double weak_lp_time_norm(const TimeSeries& f, double p) {
  detail::require_series(f);
  if (!(p > 1)) throw std::invalid_argument("weak norm: p > 1 required");
  const auto v = detail::sorted_abs_desc(f);
  double best = 0;
  for (std::size_t m = 1; m <= v.size(); ++m) {
    if (v[m - 1] == 0) break;
    best = std::max(best, v[m - 1] * std::pow(f.dt * static_cast<double>(m), 1.0 / p));
  }
  return best;
}

// sup over superlevel sets E of |E|^{-1/2} * integral_E |f|.
inline double lorentz_dual_norm(const TimeSeries& f) {
  detail::require_series(f);
  const auto v = detail::sorted_abs_desc(f);
  double best = 0;
  double prefix = 0;
  for (std::size_t m = 1; m <= v.size(); ++m) {
    if (v[m - 1] == 0) break;
    prefix += v[m - 1];
    // A superlevel set boundary: strictly more entries would need a lower
    // threshold, so {|f| > sigma} with count m exists iff v[m] < v[m-1].
    if (m == v.size() || v[m] < v[m - 1])
      best = std::max(best, prefix * f.dt / std::sqrt(f.dt * static_cast<double>(m)));
  }
  return best;
}

// sum_q sup_t (1/2)||Delta_q v||^2 + int ||grad v||^2 dt.
inline double q_norm_sq(const BlockSeries& blocks, const TimeSeries& grad_l2) {
  detail::require_series(grad_l2);
  if (blocks.size() != grad_l2.size() || blocks.dt != grad_l2.dt)
    throw std::invalid_argument("q norm: series must share the time axis");
  double sup_part = 0;
  for (int q = 0; q < blocks.blocks(); ++q)
    sup_part += 0.5 * blocks.l2.col(q).square().maxCoeff();
  return sup_part + grad_l2.dt * grad_l2.values.square().sum();
}

struct LevelSet {
  int k = 0;                 // dyadic slice: 2^-k < h/M <= 2^-(k-1)
  double measure = 0;        // dt * member count
  double sup_h = 0;
  double integral_h = 0;     // dt * sum of h over members
  std::vector<int> indices;  // member sample indices, ascending
};

struct LevelSetPartition {
  double max_h = 0;
  double dt = 0;
  double residual_mass = 0;  // dt * sum of h below the truncation cut
  std::vector<LevelSet> sets;  // ascending k
};

// Dyadic slices of {h > 0} by the ratio h / max h, truncated at 1e-14.
inline LevelSetPartition level_sets(const TimeSeries& h) {
  detail::require_series(h);
  if (h.values.minCoeff() < 0) throw std::invalid_argument("level sets: h >= 0 required");
  LevelSetPartition part;
  part.dt = h.dt;
  part.max_h = h.values.maxCoeff();
  if (part.max_h <= 0) return part;
  const double cut = 1e-14 * part.max_h;
  std::map<int, LevelSet> sets;
  for (int i = 0; i < h.size(); ++i) {
    const double hv = h.values[i];
    if (hv <= 0) continue;
    if (hv <= cut) {
      part.residual_mass += h.dt * hv;
      continue;
    }
    const double ratio = hv / part.max_h;
    int k = 1;
    while (ratio <= std::ldexp(1.0, -k)) ++k;
    LevelSet& s = sets[k];
    s.k = k;
    s.measure += h.dt;
    s.sup_h = std::max(s.sup_h, hv);
    s.integral_h += h.dt * hv;
    s.indices.push_back(i);
  }
  part.sets.reserve(sets.size());
  for (auto& [k, s] : sets) part.sets.push_back(std::move(s));
  return part;
}

struct ChainBound {
  double lhs = 0;
  double rhs = 0;
};

// Both sides of the dyadic level-set chain for int |f| h dt:
//   (8/3) 2^q int |f| h dt  <=  (8/3) 2^{q+1} ||f||_dual sqrt(2) sqrt(max h) sqrt(int h).
inline ChainBound levelset_chain_bound(const TimeSeries& f, const TimeSeries& h, int q) {
  detail::require_series(f);
  detail::require_series(h);
  if (f.size() != h.size() || f.dt != h.dt)
    throw std::invalid_argument("chain bound: series must share the time axis");
  if (h.values.minCoeff() < 0) throw std::invalid_argument("chain bound: h >= 0 required");
  ChainBound out;
  const double scale = (8.0 / 3.0) * std::ldexp(1.0, q);
  out.lhs = scale * f.dt * (f.values.abs() * h.values).sum();
  const double max_h = h.values.maxCoeff();
  if (max_h <= 0) return out;  // lhs is 0 as well
  const double int_h = h.dt * h.values.sum();
  out.rhs = 2.0 * scale * lorentz_dual_norm(f) * std::sqrt(2.0) * std::sqrt(max_h) *
            std::sqrt(int_h);
  return out;
}

// A trajectory of spectral fields on a uniform time grid.
template <typename Real>
struct FieldPathT {
  double dt = 0;
  std::vector<SpectralFieldT<Real>> fields;
};

using FieldPath = FieldPathT<double>;

template <typename Real>
BlockSeries block_series(const FieldPathT<Real>& path, const BlockDecompositionT<Real>& dec) {
  BlockSeries out;
  out.dt = path.dt;
  const int rows = static_cast<int>(path.fields.size());
  out.l2.resize(rows, dec.block_count());
  out.grad_l2.resize(rows, dec.block_count());
  for (int i = 0; i < rows; ++i)
    for (int q = -1; q <= dec.q_max(); ++q) {
      out.l2(i, q + 1) = static_cast<double>(dec.block_l2(path.fields[i], q));
      out.grad_l2(i, q + 1) = static_cast<double>(dec.block_grad_l2(path.fields[i], q));
    }
  return out;
}

template <typename Real>
TimeSeries grad_series(const FieldPathT<Real>& path) {
  TimeSeries out;
  out.dt = path.dt;
  out.values.resize(static_cast<Eigen::Index>(path.fields.size()));
  for (std::size_t i = 0; i < path.fields.size(); ++i) {
    const auto& f = path.fields[i];
    const Real s = (f.coeff.abs2().rowwise().sum() * f.grid.k2()).sum();
    out.values[static_cast<Eigen::Index>(i)] =
        std::sqrt(GridT<Real>::volume() * static_cast<double>(s));
  }
  return out;
}

namespace detail {

// Pointwise Euclidean magnitude of a block, on the physical grid.
template <typename Real>
Eigen::Array<Real, Eigen::Dynamic, 1> block_magnitude(const SpectralFieldT<Real>& blk) {
  auto phys = detail::to_physical_complex(blk);
  Eigen::Array<Real, Eigen::Dynamic, 1> m2 = phys.col(0).real().square();
  for (int c = 1; c < blk.components(); ++c) m2 += phys.col(c).real().square();
  return m2.sqrt();
}

// Pointwise Frobenius magnitude of the gradient of a block.
template <typename Real>
Eigen::Array<Real, Eigen::Dynamic, 1> block_grad_magnitude(const SpectralFieldT<Real>& blk) {
  const auto& g = blk.grid;
  Eigen::Array<Real, Eigen::Dynamic, 1> m2 =
      Eigen::Array<Real, Eigen::Dynamic, 1>::Zero(g.size());
  SpectralFieldT<Real> d(g, 1);
  for (int c = 0; c < blk.components(); ++c)
    for (int axis = 0; axis < 3; ++axis) {
      const auto& ik = axis == 0 ? g.ikx() : axis == 1 ? g.iky() : g.ikz();
      d.coeff.col(0) = blk.coeff.col(c) * ik;
      auto phys = detail::to_physical_complex(d);
      m2 += phys.col(0).real().square();
    }
  return m2.sqrt();
}

}  // namespace detail

// The double sum  sum_q sum_{j in [q-2, q+4]} int |f| int |Delta_j v| |grad Delta_q v| dx dt
// with the spatial integral evaluated by direct quadrature on the grid.
template <typename Real>
double embedding_lhs(const TimeSeries& f, const FieldPathT<Real>& path,
                     const BlockDecompositionT<Real>& dec) {
  detail::require_series(f);
  if (static_cast<int>(path.fields.size()) != f.size() || path.dt != f.dt)
    throw std::invalid_argument("embedding: series and path must share the time axis");
  const int nb = dec.block_count();
  double total = 0;
  for (int i = 0; i < f.size(); ++i) {
    const double fv = std::abs(f.values[i]);
    if (fv == 0) continue;
    const auto& v = path.fields[i];
    std::vector<Eigen::Array<Real, Eigen::Dynamic, 1>> mag(nb), grad_mag(nb);
    for (int q = -1; q <= dec.q_max(); ++q) {
      const auto blk = dec.block(v, q);
      mag[q + 1] = detail::block_magnitude(blk);
      grad_mag[q + 1] = detail::block_grad_magnitude(blk);
    }
    const double cell = static_cast<double>(v.grid.cell_volume());
    double spatial = 0;
    for (int q = -1; q <= dec.q_max(); ++q)
      for (int j = std::max(-1, q - 2); j <= std::min(dec.q_max(), q + 4); ++j)
        spatial += cell * static_cast<double>((mag[j + 1] * grad_mag[q + 1]).sum());
    total += f.dt * fv * spatial;
  }
  return total;
}

struct HardyYoungResult {
  double ratio = 0;  // lhs / ||a||_2, or 0 for a = 0
  double bound = 0;  // 1 / (1 - 2^{-1/2}), the kernel's l1 norm
  bool pass = false;
};

// Weighted-shift inequality: with s_q = sum_{j >= q-2} 2^{(q-2-j)/2} a_j,
//   ||s||_2 <= ||a||_2 / (1 - 2^{-1/2}),
// Young's convolution bound with kernel 2^{-m/2}, m >= 0.
inline HardyYoungResult hardy_young_check(const Eigen::ArrayXd& a) {
  HardyYoungResult res;
  res.bound = 1.0 / (1.0 - std::pow(2.0, -0.5));
  if ((a < 0).any()) throw std::invalid_argument("hardy-young: nonnegative sequence required");
  const double l2 = std::sqrt(a.square().sum());
  if (l2 == 0) {
    res.pass = true;
    return res;
  }
  const int len = static_cast<int>(a.size());
  double lhs_sq = 0;
  for (int q = 0; q < len; ++q) {
    double s = 0;
    for (int j = std::max(0, q - 2); j < len; ++j)
      s += std::pow(2.0, 0.5 * static_cast<double>(q - 2 - j)) * a[j];
    lhs_sq += s * s;
  }
  res.ratio = std::sqrt(lhs_sq) / l2;
  res.pass = res.ratio <= res.bound + 1e-10;
  return res;
}

}  // namespace paley
