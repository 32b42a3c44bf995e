// Initial data families for the solver experiments.
//
// abc_velocity builds the classical ABC field directly in coefficients
// (six modes, |k| = 1), so curl u = u holds to machine precision; its
// vorticity evolves as pure heat decay e^{-t}, the solver's exact oracle.
//
// random_band_vorticity draws Gaussian coefficients for modes with
// 2 <= |k| <= n/4, Hermitian-symmetrizes, and takes the curl of the
// projected field, yielding a mean-free divergence-free vorticity that
// excites several dyadic blocks with no aliasing risk. The draw order is
// fixed (component-major, ascending flat index) and the Gaussian uses an
// explicit Box-Muller, so a seed pins the field bit-for-bit.

#pragma once

#include <cstdint>
#include <random>

#include "paley/spectral_field.hpp"

namespace paley {

class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0,1] keeps the log finite; u2 in [0,1).
    const double u1 =
        (static_cast<double>(rng_()) + 1.0) * (1.0 / 18446744073709551616.0);
    const double u2 = static_cast<double>(rng_()) * (1.0 / 18446744073709551616.0);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 rng_;
  bool have_spare_ = false;
  double spare_ = 0;
};

template <typename Real>
SpectralFieldT<Real> abc_velocity(const GridT<Real>& grid, Real a = Real(1), Real b = Real(1),
                                  Real c = Real(1)) {
  using Complex = std::complex<Real>;
  SpectralFieldT<Real> u(grid, 3);
  const Complex half(Real(0.5), 0);
  const Complex ihalf(0, Real(-0.5));  // sin x = -i/2 e^{ix} + i/2 e^{-ix}

  auto set = [&](int comp, int wx, int wy, int wz, Complex val) {
    u.coeff(grid.mode(wx, wy, wz), comp) += val;
    u.coeff(grid.mode(-wx, -wy, -wz), comp) += std::conj(val);
  };
  // u = (a sin z + c cos y, b sin x + a cos z, c sin y + b cos x)
  set(0, 0, 0, 1, ihalf * a);
  set(0, 0, 1, 0, half * c);
  set(1, 1, 0, 0, ihalf * b);
  set(1, 0, 0, 1, half * a);
  set(2, 0, 1, 0, ihalf * c);
  set(2, 1, 0, 0, half * b);
  return u;
}

template <typename Real>
SpectralFieldT<Real> abc_vorticity(const GridT<Real>& grid, Real a = Real(1), Real b = Real(1),
                                   Real c = Real(1)) {
  return curl(abc_velocity(grid, a, b, c));
}

// Vorticity of the single-mode shear u = amplitude (0, cos x, 0):
// v = -amplitude sin(x) e_z, one conjugate mode pair with |k| = 1.
template <typename Real>
SpectralFieldT<Real> single_mode_vorticity(const GridT<Real>& grid, Real amplitude) {
  using Complex = std::complex<Real>;
  SpectralFieldT<Real> v(grid, 3);
  const Complex c(0, Real(0.5) * amplitude);  // -amp sin x = i amp/2 e^{ix} + conj
  v.coeff(grid.mode(1, 0, 0), 2) = c;
  v.coeff(grid.mode(-1, 0, 0), 2) = std::conj(c);
  return v;
}

// Band-limited random vorticity with ||v||_L2 = amplitude.
template <typename Real>
SpectralFieldT<Real> random_band_vorticity(const GridT<Real>& grid, std::uint64_t seed,
                                           Real amplitude, int k_min = 2, int k_max = 0) {
  if (k_max <= 0) k_max = grid.n() / 4;
  GaussianSampler gauss(seed);
  SpectralFieldT<Real> w(grid, 3);
  for (int comp = 0; comp < 3; ++comp)
    for (Index f = 0; f < grid.size(); ++f) {
      const Real r = grid.kmag()[f];
      if (r < static_cast<Real>(k_min) || r > static_cast<Real>(k_max)) continue;
      const Real re = static_cast<Real>(gauss.next());
      const Real im = static_cast<Real>(gauss.next());
      w.coeff(f, comp) = std::complex<Real>(re, im);
    }
  symmetrize_hermitian(w);
  SpectralFieldT<Real> v = curl(leray_project(w));
  const Real norm = l2_norm(v);
  if (norm > 0) v.coeff *= amplitude / norm;
  return v;
}

}  // namespace paley
