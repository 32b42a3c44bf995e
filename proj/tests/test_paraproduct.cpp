#include <doctest.h>

#include <cmath>
#include <random>

#include "paley/initial_data.hpp"
#include "paley/paraproduct.hpp"

using namespace paley;

namespace {

SpectralField random_scalar(const Grid& grid, std::uint64_t seed) {
  GaussianSampler gauss(seed);
  SpectralField f(grid, 1);
  for (Index i = 0; i < grid.size(); ++i)
    f.coeff(i, 0) = std::complex<double>(gauss.next(), gauss.next());
  symmetrize_hermitian(f);
  return f;
}

double rel_diff(const SpectralField& a, const SpectralField& b) {
  return std::sqrt((a.coeff - b.coeff).abs2().sum() / std::max(b.coeff.abs2().sum(), 1e-300));
}

}  // namespace

TEST_SUITE("paraproduct") {
  TEST_CASE("dealiased product of two low modes is their exact convolution") {
    Grid grid(16);
    DealiasEngineT<double> engine(grid);
    SpectralField a(grid, 1), b(grid, 1);
    a.coeff(grid.mode(1, 0, 0), 0) = std::complex<double>(0.5, 0);
    a.coeff(grid.mode(-1, 0, 0), 0) = std::complex<double>(0.5, 0);
    b.coeff(grid.mode(0, 2, 0), 0) = std::complex<double>(0, -0.5);
    b.coeff(grid.mode(0, -2, 0), 0) = std::complex<double>(0, 0.5);
    // cos(x) sin(2y) has four corner modes with coefficient -i/4 signs
    const SpectralField p = engine.product(a, b);
    CHECK(std::abs(p.coeff(grid.mode(1, 2, 0), 0) - std::complex<double>(0, -0.25)) < 1e-14);
    CHECK(std::abs(p.coeff(grid.mode(-1, 2, 0), 0) - std::complex<double>(0, -0.25)) < 1e-14);
    CHECK(std::abs(p.coeff(grid.mode(1, -2, 0), 0) - std::complex<double>(0, 0.25)) < 1e-14);
    CHECK(std::abs(p.coeff(grid.mode(-1, -2, 0), 0) - std::complex<double>(0, 0.25)) < 1e-14);
    double rest = 0;
    for (Index i = 0; i < grid.size(); ++i)
      if (std::abs(grid.kmag()[i] - std::sqrt(5.0)) > 1e-9)
        rest = std::max(rest, std::abs(p.coeff(i, 0)));
    CHECK(rest < 1e-14);
  }

  TEST_CASE("high frequency content is truncated, never wrapped") {
    Grid grid(16);
    DealiasEngineT<double> engine(grid);
    SpectralField a(grid, 1);
    a.coeff(grid.mode(5, 0, 0), 0) = std::complex<double>(0.5, 0);
    a.coeff(grid.mode(-5, 0, 0), 0) = std::complex<double>(0.5, 0);
    // cos(5x)^2 = 1/2 + cos(10x)/2; mode 10 does not fit and must vanish,
    // and nothing may alias onto mode 10 - 16 = -6
    const SpectralField p = engine.product(a, a);
    CHECK(std::abs(p.coeff(grid.mode(0, 0, 0), 0) - 0.5) < 1e-14);
    CHECK(std::abs(p.coeff(grid.mode(6, 0, 0), 0)) < 1e-14);
    CHECK(std::abs(p.coeff(grid.mode(-6, 0, 0), 0)) < 1e-14);
  }

  TEST_CASE("bony parts reassemble the dealiased product") {
    Grid grid(32);
    Paraproduct para(grid, build_cutoffs());
    const SpectralField a = random_scalar(grid, 31);
    const SpectralField b = random_scalar(grid, 32);
    const BonySplit s = para.split(a, b);
    SpectralField sum(grid, 1);
    sum.coeff = s.low_high.coeff + s.high_low.coeff + s.remainder.coeff;
    CHECK(rel_diff(sum, para.engine().product(a, b)) < 1e-12);
  }

  TEST_CASE("split rejects an impossible residual tolerance") {
    Grid grid(16);
    Paraproduct para(grid, build_cutoffs());
    const SpectralField a = random_scalar(grid, 33);
    const SpectralField b = random_scalar(grid, 34);
    CHECK_THROWS_AS((void)para.split(a, b, 1e-30), std::runtime_error);
  }

  TEST_CASE("paraproduct pieces live on shifted dyadic supports") {
    Grid grid(32);
    Paraproduct para(grid, build_cutoffs());
    const SpectralField b = random_scalar(grid, 35);
    const SpectralField v = random_scalar(grid, 36);
    for (int q = 0; q <= para.blocks().q_max(); ++q)
      CHECK(para.support_range_check(b, v, q));
  }

  TEST_CASE("remainder is symmetric and the directed parts swap") {
    Grid grid(16);
    Paraproduct para(grid, build_cutoffs());
    const SpectralField a = random_scalar(grid, 37);
    const SpectralField b = random_scalar(grid, 38);
    const SpectralField rab = para.remainder_product(a, b);
    const SpectralField rba = para.remainder_product(b, a);
    CHECK(rel_diff(rab, rba) < 1e-12);
    const BonySplit s = para.split(a, b);
    const SpectralField tab = para.t_product(a, b);
    CHECK(rel_diff(s.low_high, tab) < 1e-12);
  }

  TEST_CASE("paraproduct with constant one reproduces the high factor almost fully") {
    // T(1; b) = sum_j S_{j-1}(1) Delta_j b = sum_{j>=1} Delta_j b since the
    // constant sits in the lowest block only
    Grid grid(16);
    Paraproduct para(grid, build_cutoffs());
    SpectralField one(grid, 1);
    one.coeff(grid.mode(0, 0, 0), 0) = 1.0;
    SpectralField b = random_scalar(grid, 39);
    // products drop the unpaired highest plane, so keep b clear of it
    for (Index i = 0; i < grid.size(); ++i)
      if (std::abs(grid.kx()[i]) == 8 || std::abs(grid.ky()[i]) == 8 ||
          std::abs(grid.kz()[i]) == 8)
        b.coeff(i, 0) = 0;
    const SpectralField t = para.t_product(one, b);
    SpectralField want(grid, 1);
    for (int j = 1; j <= para.blocks().q_max(); ++j)
      want.coeff += para.blocks().block(b, j).coeff;
    CHECK(rel_diff(t, want) < 1e-12);
  }
}
