// Bony splitting of pointwise products into low-high, high-low, and
// comparable-frequency parts:
//
//   a b = T(a; b) + T(b; a) + R(a, b)
//   T(a; b) = sum_{j >= 1} S_{j-1} a * Delta_j b      (a low, b high)
//   R(a, b) = sum_j sum_{|k - j| <= 1} Delta_k a * Delta_j b
//
// On the grid the block indices run over -1 .. q_max, and the three parts
// enumerate every (k, j) block pair exactly once, so reconstruction is
// exact up to dealiasing roundoff. All products are formed on the padded
// grid; a split costs about ten padded transforms.

#pragma once

#include <vector>

#include "paley/dealias.hpp"
#include "paley/littlewood_paley.hpp"

namespace paley {

template <typename Real>
struct BonySplitT {
  SpectralFieldT<Real> low_high;   // T(a; b)
  SpectralFieldT<Real> high_low;   // T(b; a)
  SpectralFieldT<Real> remainder;  // R(a, b)
};

using BonySplit = BonySplitT<double>;

template <typename Real>
class ParaproductT {
 public:
  using Field = SpectralFieldT<Real>;
  using ArrayR = Eigen::Array<Real, Eigen::Dynamic, 1>;

  ParaproductT(const GridT<Real>& grid, const CutoffSystem& cut)
      : dec_(grid, cut), engine_(grid) {}
  ParaproductT(const BlockDecompositionT<Real>& dec, const DealiasEngineT<Real>& engine)
      : dec_(dec), engine_(engine) {}

  const BlockDecompositionT<Real>& blocks() const { return dec_; }
  const DealiasEngineT<Real>& engine() const { return engine_; }

  // Padded physical samples of every block of a scalar field; column q+1
  // holds Delta_q a. Blocks ride the transforms in pairs.
  Eigen::Array<Real, Eigen::Dynamic, Eigen::Dynamic> physical_blocks(const Field& a) const {
    require_scalar(a);
    const int nb = dec_.block_count();
    Eigen::Array<Real, Eigen::Dynamic, Eigen::Dynamic> out(engine_.padded_size(), nb);
    Eigen::Array<std::complex<Real>, Eigen::Dynamic, 1> wa(a.grid.size()), wb(a.grid.size());
    for (int col = 0; col < nb; col += 2) {
      wa = a.coeff.col(0) * dec_.weight(col - 1).template cast<std::complex<Real>>();
      ArrayR pa, pb;
      if (col + 1 < nb) {
        wb = a.coeff.col(0) * dec_.weight(col).template cast<std::complex<Real>>();
        engine_.to_physical_pair(wa.data(), wb.data(), pa, pb);
        out.col(col) = pa;
        out.col(col + 1) = pb;
      } else {
        engine_.to_physical(wa.data(), pa);
        out.col(col) = pa;
      }
    }
    return out;
  }

  // T(a; b) = sum_{j >= 1} S_{j-1} a * Delta_j b.
  Field t_product(const Field& a, const Field& b) const {
    const auto pa = physical_blocks(a);
    const auto pb = physical_blocks(b);
    return t_from_blocks(pa, pb, a.grid);
  }

  // R(a, b): block pairs no more than one index apart.
  Field remainder_product(const Field& a, const Field& b) const {
    const auto pa = physical_blocks(a);
    const auto pb = physical_blocks(b);
    return r_from_blocks(pa, pb, a.grid);
  }

  // All three parts from one set of block transforms, with the
  // reconstruction identity enforced against the direct product.
  BonySplitT<Real> split(const Field& a, const Field& b, Real check_tol = Real(1e-8)) const {
    const auto pa = physical_blocks(a);
    const auto pb = physical_blocks(b);
    BonySplitT<Real> out{t_from_blocks(pa, pb, a.grid), t_from_blocks(pb, pa, a.grid),
                         r_from_blocks(pa, pb, a.grid)};
    const Field direct = engine_.product(a, b);
    Real diff = 0, ref = 0;
    for (Index f = 0; f < a.grid.size(); ++f) {
      const auto s = out.low_high.coeff(f, 0) + out.high_low.coeff(f, 0) +
                     out.remainder.coeff(f, 0) - direct.coeff(f, 0);
      diff += std::norm(s);
      ref += std::norm(direct.coeff(f, 0));
    }
    if (std::sqrt(diff) > check_tol * std::max(std::sqrt(ref), Real(1e-300)))
      throw std::runtime_error("bony split: reconstruction residual exceeds tolerance");
    return out;
  }

  // Delta_q applied to T(v; b), once as the full sum over j and once
  // truncated to j in [q-2, q+4]; true when they agree to tol.
  bool support_range_check(const Field& b, const Field& v, int q, Real tol = Real(1e-10)) const {
    const auto pv = physical_blocks(v);
    const auto pb = physical_blocks(b);
    const Field full = dec_.block(t_from_blocks(pv, pb, b.grid), q);
    const Field part = dec_.block(t_from_blocks(pv, pb, b.grid, q - 2, q + 4), q);
    Real diff = 0, ref = 0;
    for (Index f = 0; f < b.grid.size(); ++f) {
      diff += std::norm(full.coeff(f, 0) - part.coeff(f, 0));
      ref += std::norm(full.coeff(f, 0));
    }
    return std::sqrt(diff) <= tol * std::max(std::sqrt(ref), Real(1e-300));
  }

  // Padded physical accumulators for the two parts. Several of these can
  // be combined pointwise before paying for a single forward transform.
  ArrayR t_accum(const Eigen::Array<Real, Eigen::Dynamic, Eigen::Dynamic>& pa,
                 const Eigen::Array<Real, Eigen::Dynamic, Eigen::Dynamic>& pb, int j_lo = 1,
                 int j_hi = 1 << 20) const {
    ArrayR low = ArrayR::Zero(engine_.padded_size());  // running S_{j-1} a
    ArrayR acc = ArrayR::Zero(engine_.padded_size());
    const int hi = std::min(j_hi, dec_.q_max());
    for (int j = 1; j <= hi; ++j) {
      low += pa.col(j - 1);  // adds Delta_{j-2} a, completing S_{j-1}
      if (j >= j_lo) acc += low * pb.col(j + 1);
    }
    return acc;
  }

  ArrayR r_accum(const Eigen::Array<Real, Eigen::Dynamic, Eigen::Dynamic>& pa,
                 const Eigen::Array<Real, Eigen::Dynamic, Eigen::Dynamic>& pb) const {
    ArrayR acc = ArrayR::Zero(engine_.padded_size());
    for (int j = -1; j <= dec_.q_max(); ++j) {
      ArrayR near = ArrayR::Zero(engine_.padded_size());
      for (int k = std::max(-1, j - 1); k <= std::min(dec_.q_max(), j + 1); ++k)
        near += pa.col(k + 1);
      acc += near * pb.col(j + 1);
    }
    return acc;
  }

  // The paraproduct parts assembled from precomputed physical blocks;
  // j limits clamp the high-frequency index (defaults: the full sum).
  Field t_from_blocks(const Eigen::Array<Real, Eigen::Dynamic, Eigen::Dynamic>& pa,
                      const Eigen::Array<Real, Eigen::Dynamic, Eigen::Dynamic>& pb,
                      const GridT<Real>& grid, int j_lo = 1, int j_hi = 1 << 20) const {
    const ArrayR acc = t_accum(pa, pb, j_lo, j_hi);
    Field out(grid, 1);
    engine_.to_spectral(acc, out.coeff.col(0).data());
    return out;
  }

  Field r_from_blocks(const Eigen::Array<Real, Eigen::Dynamic, Eigen::Dynamic>& pa,
                      const Eigen::Array<Real, Eigen::Dynamic, Eigen::Dynamic>& pb,
                      const GridT<Real>& grid) const {
    const ArrayR acc = r_accum(pa, pb);
    Field out(grid, 1);
    engine_.to_spectral(acc, out.coeff.col(0).data());
    return out;
  }

 private:
  static void require_scalar(const Field& a) {
    if (a.components() != 1)
      throw std::invalid_argument("paraproduct: scalar fields (split tensors componentwise)");
  }

  BlockDecompositionT<Real> dec_;
  DealiasEngineT<Real> engine_;
};

using Paraproduct = ParaproductT<double>;

}  // namespace paley
