// 3/2-rule dealiased products.
//
// Pointwise products are formed on a padded grid of side m = 3n/2: the
// spectrum is scattered into the larger cube, transformed, multiplied, and
// transformed back, after which only the original modes are kept and the
// Nyquist planes are zeroed. With per-axis input frequencies <= n/2, any
// aliased image of a product mode lands at or beyond the discarded window,
// so every retained coefficient is exact.
//
// Real fields travel in pairs through a single complex transform: the
// inverse of a_hat + i*b_hat has real part A and imaginary part B, and one
// forward transform is unpacked through F(k), conj(F(-k)). This halves the
// transform count in the solver's right-hand side, its hottest path.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "paley/grid.hpp"
#include "paley/spectral_field.hpp"

namespace paley {

template <typename Real>
class DealiasEngineT {
 public:
  using Complex = std::complex<Real>;
  using ArrayR = Eigen::Array<Real, Eigen::Dynamic, 1>;
  using ArrayC = Eigen::Array<Complex, Eigen::Dynamic, 1>;

  explicit DealiasEngineT(const GridT<Real>& grid)
      : grid_(grid), n_(grid.n()), m_(3 * grid.n() / 2), cube_(m_) {
    const int n = n_;
    pad_.resize(grid.size());
    keep_.resize(grid.size());
    Index f = 0;
    for (int iz = 0; iz < n; ++iz)
      for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix, ++f) {
          const int wx = wave_number(ix, n);
          const int wy = wave_number(iy, n);
          const int wz = wave_number(iz, n);
          pad_[f] = ((static_cast<Index>((wz + m_) % m_) * m_ + (wy + m_) % m_)) * m_ +
                    (wx + m_) % m_;
          keep_[f] = wx != -n / 2 && wy != -n / 2 && wz != -n / 2;
        }
  }

  const GridT<Real>& grid() const { return grid_; }
  int padded_side() const { return m_; }
  Index padded_size() const { return static_cast<Index>(m_) * m_ * m_; }

  // Physical samples of one spectral component on the padded grid. The
  // unpaired planes at -n/2 are dropped on the way in: they have no
  // conjugate partner on the source grid, so they sit outside the product
  // algebra, and padding them would break the realness the pair packing
  // relies on. Outputs already zero them, making the engine idempotent.
  void to_physical(const Complex* a, ArrayR& pa) const {
    ArrayC buf = ArrayC::Zero(padded_size());
    for (Index f = 0; f < grid_.size(); ++f)
      if (keep_[f]) buf[pad_[f]] = a[f];
    cube_.inverse(buf.data());
    pa = buf.real();
  }

  // Two components through one transform.
  void to_physical_pair(const Complex* a, const Complex* b, ArrayR& pa, ArrayR& pb) const {
    ArrayC buf = ArrayC::Zero(padded_size());
    const Complex im(0, 1);
    for (Index f = 0; f < grid_.size(); ++f)
      if (keep_[f]) buf[pad_[f]] = a[f] + im * b[f];
    cube_.inverse(buf.data());
    pa = buf.real();
    pb = buf.imag();
  }

  // Truncate padded physical samples back to spectral coefficients;
  // Nyquist planes of the target grid are zeroed.
  void to_spectral(const ArrayR& pa, Complex* a) const {
    ArrayC buf = pa.template cast<Complex>();
    cube_.forward(buf.data(), Real(1) / static_cast<Real>(padded_size()));
    for (Index f = 0; f < grid_.size(); ++f) a[f] = keep_[f] ? buf[pad_[f]] : Complex(0);
  }

  void to_spectral_pair(const ArrayR& pa, const ArrayR& pb, Complex* a, Complex* b) const {
    ArrayC buf(padded_size());
    const Complex im(0, 1);
    for (Index i = 0; i < padded_size(); ++i) buf[i] = Complex(pa[i], pb[i]);
    cube_.forward(buf.data(), Real(1) / static_cast<Real>(padded_size()));
    for (Index f = 0; f < grid_.size(); ++f) {
      if (!keep_[f]) {
        a[f] = Complex(0);
        b[f] = Complex(0);
        continue;
      }
      const Complex x = buf[pad_[f]];
      const Complex y = std::conj(buf[pad_[grid_.conj_index(f)]]);
      a[f] = Real(0.5) * (x + y);
      b[f] = Complex(0, Real(-0.5)) * (x - y);
    }
  }

  // Dealiased pointwise product of two real scalar fields.
  SpectralFieldT<Real> product(const SpectralFieldT<Real>& a, const SpectralFieldT<Real>& b) const {
    if (a.grid != grid_ || b.grid != grid_ || a.components() != 1 || b.components() != 1)
      throw std::invalid_argument("dealias product: scalar fields on the engine grid");
    ArrayR pa, pb;
    to_physical_pair(a.coeff.col(0).data(), b.coeff.col(0).data(), pa, pb);
    ArrayR prod = pa * pb;
    SpectralFieldT<Real> out(grid_, 1);
    to_spectral(prod, out.coeff.col(0).data());
    return out;
  }

 private:
  GridT<Real> grid_;
  int n_, m_;
  fft::Cube<Real> cube_;
  std::vector<Index> pad_;
  std::vector<char> keep_;
};

using DealiasEngine = DealiasEngineT<double>;

}  // namespace paley
