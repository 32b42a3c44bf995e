// Dyadic block operators on spectral fields.
//
// BlockDecomposition caches, per block index q = -1 .. q_max, the cutoff
// profile evaluated at every grid mode magnitude, plus a sparse view of the
// nonzero entries: block norms and coupling sums then touch only the
// annulus a block actually occupies, which is what keeps per-step energy
// accounting in the solver cheap.
//
// q_max is the largest block whose annulus lower edge fits below n/2, so
// every retained annulus is fully represented on the grid, and the partial
// sums S_j reconstruct the identity at j = q_max + 1.

#pragma once

#include <optional>
#include <vector>

#include "paley/cutoffs.hpp"
#include "paley/spectral_field.hpp"

namespace paley {

template <typename Real>
class BlockDecompositionT {
 public:
  using Field = SpectralFieldT<Real>;
  using ArrayR = Eigen::Array<Real, Eigen::Dynamic, 1>;

  struct Support {
    std::vector<Index> idx;
    std::vector<Real> w2;    // profile^2 at idx
    std::vector<Real> w2k2;  // profile^2 * |k|^2 at idx
  };

  BlockDecompositionT(const GridT<Real>& grid, const CutoffSystem& cut)
      : grid_(grid), cut_(cut), q_max_(cut.max_block(grid.n())) {
    const Index sz = grid.size();
    weights_.resize(q_max_ + 2);
    low_weights_.resize(q_max_ + 3);
    support_.resize(q_max_ + 2);
    for (int q = -1; q <= q_max_; ++q) {
      ArrayR& w = weights_[q + 1];
      w.resize(sz);
      Support& sp = support_[q + 1];
      for (Index f = 0; f < sz; ++f) {
        const Real wv = static_cast<Real>(cut.block_profile(q, grid.kmag()[f]));
        w[f] = wv;
        if (wv != Real(0)) {
          sp.idx.push_back(f);
          sp.w2.push_back(wv * wv);
          sp.w2k2.push_back(wv * wv * grid.k2()[f]);
        }
      }
    }
    for (int j = -1; j <= q_max_ + 1; ++j) {
      ArrayR& w = low_weights_[j + 1];
      w.resize(sz);
      for (Index f = 0; f < sz; ++f)
        w[f] = static_cast<Real>(cut.low_pass_profile(j, grid.kmag()[f]));
    }
  }

  const GridT<Real>& grid() const { return grid_; }
  const CutoffSystem& cutoffs() const { return cut_; }
  int q_max() const { return q_max_; }
  int block_count() const { return q_max_ + 2; }  // q = -1 .. q_max

  const ArrayR& weight(int q) const {
    check_q(q);
    return weights_[q + 1];
  }
  const ArrayR& low_weight(int j) const {
    if (j < -1 || j > q_max_ + 1)
      throw std::out_of_range("low-pass index outside [-1, q_max+1]");
    return low_weights_[j + 1];
  }
  const Support& support(int q) const {
    check_q(q);
    return support_[q + 1];
  }

  // Delta_q: multiply every component by the block profile.
  Field block(const Field& v, int q) const {
    check_q(q);
    return apply(v, weights_[q + 1]);
  }

  // S_j = sum of blocks with index < j; S_{-1} = 0, S_{q_max+1} = identity.
  Field low_pass(const Field& v, int j) const {
    if (j < -1 || j > q_max_ + 1)
      throw std::out_of_range("low-pass index outside [-1, q_max+1]");
    return apply(v, low_weights_[j + 1]);
  }

  // ||Delta_q v||_L2 straight from the coefficients.
  Real block_l2(const Field& v, int q) const {
    check_q(q);
    const Support& sp = support_[q + 1];
    Real acc = 0;
    for (std::size_t i = 0; i < sp.idx.size(); ++i) {
      Real m2 = 0;
      for (int c = 0; c < v.components(); ++c) m2 += std::norm(v.coeff(sp.idx[i], c));
      acc += sp.w2[i] * m2;
    }
    return std::sqrt(GridT<Real>::volume() * acc);
  }

  // ||grad Delta_q v||_L2 with the gradient as multiplication by |k|.
  Real block_grad_l2(const Field& v, int q) const {
    check_q(q);
    const Support& sp = support_[q + 1];
    Real acc = 0;
    for (std::size_t i = 0; i < sp.idx.size(); ++i) {
      Real m2 = 0;
      for (int c = 0; c < v.components(); ++c) m2 += std::norm(v.coeff(sp.idx[i], c));
      acc += sp.w2k2[i] * m2;
    }
    return std::sqrt(GridT<Real>::volume() * acc);
  }

  // ||grad Delta_q v|| / (2^q ||Delta_q v||); empty for a vanishing block.
  // The annulus geometry pins this inside [3/4, 8/3] for q >= 0.
  std::optional<Real> bernstein_ratio(const Field& v, int q) const {
    if (q < 0 || q > q_max_) throw std::out_of_range("bernstein ratio needs 0 <= q <= q_max");
    const Real den = block_l2(v, q);
    if (den == Real(0)) return std::nullopt;
    return block_grad_l2(v, q) / (std::ldexp(Real(1), q) * den);
  }

 private:
  void check_q(int q) const {
    if (q < -1 || q > q_max_) throw std::out_of_range("block index outside [-1, q_max]");
  }

  Field apply(const Field& v, const ArrayR& w) const {
    if (v.grid != grid_) throw std::invalid_argument("block: field on a different grid");
    Field out(grid_, v.components());
    for (int c = 0; c < v.components(); ++c)
      out.coeff.col(c) = v.coeff.col(c) * w.template cast<std::complex<Real>>();
    return out;
  }

  GridT<Real> grid_;
  CutoffSystem cut_;
  int q_max_;
  std::vector<ArrayR> weights_, low_weights_;
  std::vector<Support> support_;
};

using BlockDecomposition = BlockDecompositionT<double>;

// Free-function spellings for expression-style call sites.
template <typename Real>
SpectralFieldT<Real> delta_q(const BlockDecompositionT<Real>& dec, const SpectralFieldT<Real>& v,
                             int q) {
  return dec.block(v, q);
}
template <typename Real>
SpectralFieldT<Real> s_j(const BlockDecompositionT<Real>& dec, const SpectralFieldT<Real>& v,
                         int j) {
  return dec.low_pass(v, j);
}

}  // namespace paley
