// Fourier grid for the periodic box [0, 2pi)^3.
//
// Side n must be a power of two >= 8 so that the dyadic shells line up with
// the resolvable spectrum and the 3/2-padded side 3n/2 stays a 2^a*3 size.
// Wave numbers are the integers -n/2 .. n/2-1 per axis, stored per flat
// index (x fastest). A Grid is a cheap value: all tables live behind a
// shared immutable block.
//
// Two kinds of spectral multiplier tables coexist on purpose:
//   * kx/ky/kz/k2/kmag carry the true wave numbers including the Nyquist
//     plane k = -n/2; norms and dissipation sums use these.
//   * ikx/iky/ikz are the derivative symbols i*k with the Nyquist plane
//     zeroed, the standard choice that keeps odd derivatives of real
//     fields real. inv_k2d inverts |k|^2 in the same zeroed convention,
//     so projections and inverse curls commute exactly with the
//     derivative operators on every mode, Nyquist planes included.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <stdexcept>

#include "paley/fft.hpp"

namespace paley {

using Eigen::Index;

inline int wave_number(int idx, int n) { return idx < n / 2 ? idx : idx - n; }

template <typename Real>
struct GridTables {
  using Complex = std::complex<Real>;
  using ArrayR = Eigen::Array<Real, Eigen::Dynamic, 1>;
  using ArrayC = Eigen::Array<Complex, Eigen::Dynamic, 1>;

  explicit GridTables(int n) : fft(n) {
    const Index sz = static_cast<Index>(n) * n * n;
    kx.resize(sz);
    ky.resize(sz);
    kz.resize(sz);
    k2.resize(sz);
    kmag.resize(sz);
    inv_k2.resize(sz);
    inv_k2d.resize(sz);
    ikx.resize(sz);
    iky.resize(sz);
    ikz.resize(sz);
    conj.resize(sz);
    const int h = n / 2;
    Index f = 0;
    for (int iz = 0; iz < n; ++iz)
      for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix, ++f) {
          const int wx = wave_number(ix, n);
          const int wy = wave_number(iy, n);
          const int wz = wave_number(iz, n);
          kx[f] = static_cast<Real>(wx);
          ky[f] = static_cast<Real>(wy);
          kz[f] = static_cast<Real>(wz);
          const Real r2 = static_cast<Real>(wx * wx + wy * wy + wz * wz);
          k2[f] = r2;
          kmag[f] = std::sqrt(r2);
          inv_k2[f] = r2 > Real(0) ? Real(1) / r2 : Real(0);
          const int dx = wx == -h ? 0 : wx;
          const int dy = wy == -h ? 0 : wy;
          const int dz = wz == -h ? 0 : wz;
          const Real r2d = static_cast<Real>(dx * dx + dy * dy + dz * dz);
          inv_k2d[f] = r2d > Real(0) ? Real(1) / r2d : Real(0);
          ikx[f] = Complex(0, static_cast<Real>(dx));
          iky[f] = Complex(0, static_cast<Real>(dy));
          ikz[f] = Complex(0, static_cast<Real>(dz));
          const Index cx = ix == 0 ? 0 : n - ix;
          const Index cy = iy == 0 ? 0 : n - iy;
          const Index cz = iz == 0 ? 0 : n - iz;
          conj[f] = (cz * n + cy) * n + cx;
        }
  }

  ArrayR kx, ky, kz, k2, kmag, inv_k2, inv_k2d;
  ArrayC ikx, iky, ikz;
  Eigen::Array<Index, Eigen::Dynamic, 1> conj;  // flat index of -k
  fft::Cube<Real> fft;
};

template <typename Real>
class GridT {
 public:
  using Tables = GridTables<Real>;

  explicit GridT(int n) {
    if (n < 8 || (n & (n - 1)) != 0)
      throw std::invalid_argument("grid: side must be a power of two >= 8");
    n_ = n;
    t_ = std::make_shared<const Tables>(n);
  }

  int n() const { return n_; }
  Index size() const { return static_cast<Index>(n_) * n_ * n_; }
  int max_wave() const { return n_ / 2 - 1; }  // largest fully represented |k_i|

  // Physical sample spacing and quadrature weight (2pi/n)^3.
  Real dx() const { return Real(2) * kPi / n_; }
  Real cell_volume() const { return dx() * dx() * dx(); }
  static constexpr Real volume() { return Real(8) * kPi * kPi * kPi; }

  const typename Tables::ArrayR& kx() const { return t_->kx; }
  const typename Tables::ArrayR& ky() const { return t_->ky; }
  const typename Tables::ArrayR& kz() const { return t_->kz; }
  const typename Tables::ArrayR& k2() const { return t_->k2; }
  const typename Tables::ArrayR& kmag() const { return t_->kmag; }
  const typename Tables::ArrayR& inv_k2() const { return t_->inv_k2; }
  const typename Tables::ArrayR& inv_k2d() const { return t_->inv_k2d; }
  const typename Tables::ArrayC& ikx() const { return t_->ikx; }
  const typename Tables::ArrayC& iky() const { return t_->iky; }
  const typename Tables::ArrayC& ikz() const { return t_->ikz; }
  Index conj_index(Index f) const { return t_->conj[f]; }
  const fft::Cube<Real>& fft() const { return t_->fft; }

  Index flat(int ix, int iy, int iz) const {
    return (static_cast<Index>(iz) * n_ + iy) * n_ + ix;
  }
  // Flat index of the mode with wave numbers (wx, wy, wz), each in [-n/2, n/2).
  Index mode(int wx, int wy, int wz) const {
    return flat((wx + n_) % n_, (wy + n_) % n_, (wz + n_) % n_);
  }

  friend bool operator==(const GridT& a, const GridT& b) { return a.n_ == b.n_; }
  friend bool operator!=(const GridT& a, const GridT& b) { return a.n_ != b.n_; }

 private:
  static constexpr Real kPi = Real(3.141592653589793238462643383279502884L);

  int n_ = 0;
  std::shared_ptr<const Tables> t_;
};

using Grid = GridT<double>;

}  // namespace paley
