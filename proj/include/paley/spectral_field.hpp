// Spectral representation of scalar / 3-vector fields on the periodic box.
//
// coeff(f, c) is the amplitude of exp(i k.x) for the mode with flat index f
// and component c, i.e. the forward transform carries the 1/n^3 factor and
// the inverse carries none. With that convention Parseval reads
//   integral |v|^2 dx = (2pi)^3 * sum_k |v_hat(k)|^2
// which is what l2_norm implements.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "paley/grid.hpp"

namespace paley {

template <typename Real>
struct SpectralFieldT {
  using Complex = std::complex<Real>;
  using ArrayC = Eigen::Array<Complex, Eigen::Dynamic, Eigen::Dynamic>;

  GridT<Real> grid;
  ArrayC coeff;  // grid.size() rows, one column per component

  SpectralFieldT(const GridT<Real>& g, int components) : grid(g) {
    if (components != 1 && components != 3)
      throw std::invalid_argument("field: 1 or 3 components");
    coeff = ArrayC::Zero(g.size(), components);
  }

  int components() const { return static_cast<int>(coeff.cols()); }
  bool is_vector() const { return components() == 3; }
};

using SpectralField = SpectralFieldT<double>;

namespace detail {

template <typename Real>
Eigen::Array<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> to_physical_complex(
    const SpectralFieldT<Real>& f) {
  auto phys = f.coeff;  // copy, transformed in place
  for (int c = 0; c < f.components(); ++c) f.grid.fft().inverse(phys.col(c).data());
  return phys;
}

}  // namespace detail

// Forward transform of real samples (grid.size() rows, 1 or 3 columns).
template <typename Real>
SpectralFieldT<Real> transform(const GridT<Real>& grid,
                               const Eigen::Array<Real, Eigen::Dynamic, Eigen::Dynamic>& samples) {
  if (samples.rows() != grid.size())
    throw std::invalid_argument("transform: sample count does not match grid");
  SpectralFieldT<Real> f(grid, static_cast<int>(samples.cols()));
  const Real scale = Real(1) / static_cast<Real>(grid.size());
  for (int c = 0; c < f.components(); ++c) {
    f.coeff.col(c) = samples.col(c).template cast<std::complex<Real>>();
    grid.fft().forward(f.coeff.col(c).data(), scale);
  }
  return f;
}

// Inverse transform to real samples; the imaginary residue of a Hermitian
// spectrum is roundoff and is dropped.
template <typename Real>
Eigen::Array<Real, Eigen::Dynamic, Eigen::Dynamic> inverse_transform(
    const SpectralFieldT<Real>& f) {
  return detail::to_physical_complex(f).real();
}

template <typename Real>
Real l2_norm(const SpectralFieldT<Real>& f) {
  const Real vol = GridT<Real>::volume();
  return std::sqrt(vol * f.coeff.abs2().sum());
}

// integral f.g dx for real fields, via Parseval.
template <typename Real>
Real dot_l2(const SpectralFieldT<Real>& f, const SpectralFieldT<Real>& g) {
  if (f.grid != g.grid || f.components() != g.components())
    throw std::invalid_argument("dot_l2: mismatched fields");
  const Real vol = GridT<Real>::volume();
  return vol * (f.coeff.conjugate() * g.coeff).real().sum();
}

// Pointwise sup of |f| (Euclidean magnitude for vector fields) over the
// collocation points.
template <typename Real>
Real linf_norm(const SpectralFieldT<Real>& f) {
  auto phys = detail::to_physical_complex(f);
  if (f.components() == 1) return phys.col(0).real().abs().maxCoeff();
  Eigen::Array<Real, Eigen::Dynamic, 1> mag2 =
      phys.col(0).real().square() + phys.col(1).real().square() + phys.col(2).real().square();
  return std::sqrt(mag2.maxCoeff());
}

// Zero-padding of the spectrum onto a finer power-of-two grid; exact
// trigonometric interpolation for fields without Nyquist content.
template <typename Real>
SpectralFieldT<Real> spectral_resample(const SpectralFieldT<Real>& f, int m) {
  const int n = f.grid.n();
  if (m < n) throw std::invalid_argument("spectral_resample: target must be no coarser");
  GridT<Real> fine(m);
  SpectralFieldT<Real> out(fine, f.components());
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        const Index src = f.grid.flat(ix, iy, iz);
        const Index dst = fine.mode(wave_number(ix, n), wave_number(iy, n), wave_number(iz, n));
        out.coeff.row(dst) = f.coeff.row(src);
      }
  return out;
}

// Sup norm sampled on a `factor` times finer grid, to catch peaks that fall
// between collocation points.
template <typename Real>
Real linf_norm_refined(const SpectralFieldT<Real>& f, int factor = 2) {
  if (factor < 1) throw std::invalid_argument("linf_norm_refined: factor must be >= 1");
  if (factor == 1) return linf_norm(f);
  return linf_norm(spectral_resample(f, f.grid.n() * factor));
}

template <typename Real>
SpectralFieldT<Real> curl(const SpectralFieldT<Real>& u) {
  if (!u.is_vector()) throw std::invalid_argument("curl: vector field required");
  const auto& g = u.grid;
  SpectralFieldT<Real> w(g, 3);
  w.coeff.col(0) = g.iky() * u.coeff.col(2) - g.ikz() * u.coeff.col(1);
  w.coeff.col(1) = g.ikz() * u.coeff.col(0) - g.ikx() * u.coeff.col(2);
  w.coeff.col(2) = g.ikx() * u.coeff.col(1) - g.iky() * u.coeff.col(0);
  return w;
}

template <typename Real>
SpectralFieldT<Real> divergence(const SpectralFieldT<Real>& u) {
  if (!u.is_vector()) throw std::invalid_argument("divergence: vector field required");
  const auto& g = u.grid;
  SpectralFieldT<Real> d(g, 1);
  d.coeff.col(0) =
      g.ikx() * u.coeff.col(0) + g.iky() * u.coeff.col(1) + g.ikz() * u.coeff.col(2);
  return d;
}

// Largest |div u| over spectral modes; the divergence-free diagnostic.
template <typename Real>
Real max_divergence(const SpectralFieldT<Real>& u) {
  return divergence(u).coeff.abs().maxCoeff();
}

// Projection onto divergence-free fields: w_hat - k (k . w_hat) / |k|^2,
// contracted with the derivative tables so that the projected field has
// zero divergence in the same convention, Nyquist planes included.
template <typename Real>
SpectralFieldT<Real> leray_project(const SpectralFieldT<Real>& w) {
  if (!w.is_vector()) throw std::invalid_argument("leray_project: vector field required");
  using Complex = std::complex<Real>;
  const auto& g = w.grid;
  SpectralFieldT<Real> out(g, 3);
  Eigen::Array<Complex, Eigen::Dynamic, 1> d =
      (g.ikx() * w.coeff.col(0) + g.iky() * w.coeff.col(1) + g.ikz() * w.coeff.col(2)) *
      g.inv_k2d().template cast<Complex>();
  out.coeff.col(0) = w.coeff.col(0) + g.ikx() * d;
  out.coeff.col(1) = w.coeff.col(1) + g.iky() * d;
  out.coeff.col(2) = w.coeff.col(2) + g.ikz() * d;
  return out;
}

// Velocity with curl u = v, div u = 0, zero mean: u_hat = i k x v_hat / |k|^2.
// Requires a mean-free vorticity; the k = 0 row has no preimage.
template <typename Real>
SpectralFieldT<Real> biot_savart(const SpectralFieldT<Real>& v) {
  if (!v.is_vector()) throw std::invalid_argument("biot_savart: vector field required");
  using Complex = std::complex<Real>;
  const auto& g = v.grid;
  const Real mean = v.coeff.row(0).abs().maxCoeff();
  if (mean > Real(1e-12) * (Real(1) + v.coeff.abs().maxCoeff()))
    throw std::invalid_argument("biot_savart: vorticity must have zero mean");
  SpectralFieldT<Real> u(g, 3);
  auto inv = g.inv_k2d().template cast<Complex>();
  u.coeff.col(0) = (g.iky() * v.coeff.col(2) - g.ikz() * v.coeff.col(1)) * inv;
  u.coeff.col(1) = (g.ikz() * v.coeff.col(0) - g.ikx() * v.coeff.col(2)) * inv;
  u.coeff.col(2) = (g.ikx() * v.coeff.col(1) - g.iky() * v.coeff.col(0)) * inv;
  return u;
}

// Deviation from Hermitian symmetry v_hat(-k) = conj(v_hat(k)).
template <typename Real>
Real hermitian_error(const SpectralFieldT<Real>& f) {
  Real worst = 0;
  for (int c = 0; c < f.components(); ++c)
    for (Index i = 0; i < f.grid.size(); ++i) {
      const auto d = f.coeff(i, c) - std::conj(f.coeff(f.grid.conj_index(i), c));
      worst = std::max(worst, std::abs(d));
    }
  return worst;
}

// Nearest Hermitian spectrum, in place; used after drawing random modes.
template <typename Real>
void symmetrize_hermitian(SpectralFieldT<Real>& f) {
  for (int c = 0; c < f.components(); ++c)
    for (Index i = 0; i < f.grid.size(); ++i) {
      const Index j = f.grid.conj_index(i);
      if (j < i) continue;
      const auto avg = Real(0.5) * (f.coeff(i, c) + std::conj(f.coeff(j, c)));
      f.coeff(i, c) = avg;
      f.coeff(j, c) = std::conj(avg);
    }
}

}  // namespace paley
