#include <doctest.h>

#include <cmath>

#include "paley/cutoffs.hpp"
#include "paley/initial_data.hpp"
#include "paley/littlewood_paley.hpp"

using namespace paley;

namespace {

SpectralField random_field(const Grid& grid, std::uint64_t seed) {
  GaussianSampler gauss(seed);
  SpectralField f(grid, 3);
  for (int c = 0; c < 3; ++c)
    for (Index i = 0; i < grid.size(); ++i)
      f.coeff(i, c) = std::complex<double>(gauss.next(), gauss.next());
  symmetrize_hermitian(f);
  return f;
}

}  // namespace

TEST_SUITE("littlewood_paley") {
  TEST_CASE("step function shape") {
    const CutoffSystem cut = build_cutoffs();
    CHECK(cut.chi(0.0) == 1.0);
    CHECK(cut.chi(0.99) == 1.0);
    CHECK(cut.chi(4.0 / 3.0 + 1e-9) == 0.0);
    for (double r = 1.0; r < 4.0 / 3.0; r += 0.01) {
      CHECK(cut.chi(r) >= 0.0);
      CHECK(cut.chi(r) <= 1.0);
      CHECK(cut.chi(r) >= cut.chi(r + 0.01));  // nonincreasing
    }
  }

  TEST_CASE("annulus function is supported in [1, 8/3]") {
    const CutoffSystem cut = build_cutoffs();
    CHECK(cut.phi(0.999) == 0.0);
    CHECK(cut.phi(8.0 / 3.0 + 1e-9) == 0.0);
    CHECK(cut.phi(1.5) > 0.9);  // plateau where both steps saturate
    CHECK(cut.phi(4.0 / 3.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cut.phi(2.0) == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("telescoping partition of unity on a dense sweep") {
    const CutoffSystem cut = build_cutoffs();
    double worst = 0;
    for (int i = 0; i <= 40000; ++i) {
      const double r = 64.0 * i / 40000.0;
      double s = cut.chi(r);
      for (int q = 0; q <= 5; ++q) s += cut.phi(std::ldexp(r, -q));
      worst = std::max(worst, std::abs(s - 1.0));
    }
    CHECK(worst < 1e-12);
  }

  TEST_CASE("block count tracks the grid resolution") {
    const CutoffSystem cut = build_cutoffs();
    CHECK(cut.max_block(16) == 3);
    CHECK(cut.max_block(32) == 4);
    CHECK(cut.max_block(64) == 5);
  }

  TEST_CASE("blocks reconstruct the field") {
    Grid grid(32);
    BlockDecomposition dec(grid, build_cutoffs());
    const SpectralField v = random_field(grid, 21);
    SpectralField sum(grid, 3);
    for (int q = -1; q <= dec.q_max(); ++q) sum.coeff += dec.block(v, q).coeff;
    CHECK(std::sqrt((sum.coeff - v.coeff).abs2().sum() / v.coeff.abs2().sum()) < 1e-14);
  }

  TEST_CASE("low pass telescopes into blocks and saturates") {
    Grid grid(16);
    BlockDecomposition dec(grid, build_cutoffs());
    const SpectralField v = random_field(grid, 22);
    for (int j = -1; j <= dec.q_max(); ++j) {
      SpectralField d(grid, 3);
      d.coeff = dec.low_pass(v, j + 1).coeff - dec.low_pass(v, j).coeff;
      const SpectralField blk = dec.block(v, j);
      CHECK(std::sqrt((d.coeff - blk.coeff).abs2().sum()) < 1e-13);
    }
    const SpectralField top = dec.low_pass(v, dec.q_max() + 1);
    CHECK(std::sqrt((top.coeff - v.coeff).abs2().sum()) < 1e-14);
  }

  TEST_CASE("blocks two apart are orthogonal") {
    Grid grid(32);
    BlockDecomposition dec(grid, build_cutoffs());
    const SpectralField v = random_field(grid, 23);
    for (int q = -1; q <= dec.q_max(); ++q)
      for (int p = q + 2; p <= dec.q_max(); ++p) {
        const std::complex<double> ip =
            (dec.block(v, q).coeff.conjugate() * dec.block(v, p).coeff).sum();
        CHECK(std::abs(ip) < 1e-12);
      }
  }

  TEST_CASE("a pure mode on the annulus plateau has an exact gradient ratio") {
    Grid grid(16);
    BlockDecomposition dec(grid, build_cutoffs());
    SpectralField v(grid, 3);
    // |k| = 3 sits where phi(r/2) = 1, so block 1 keeps the mode unchanged
    v.coeff(grid.mode(0, 0, 3), 0) = std::complex<double>(0, 0.5);
    v.coeff(grid.mode(0, 0, -3), 0) = std::complex<double>(0, -0.5);
    const auto ratio = dec.bernstein_ratio(v, 1);
    REQUIRE(ratio.has_value());
    CHECK(*ratio == doctest::Approx(1.5).epsilon(1e-13));
    CHECK(dec.block_l2(v, 1) == doctest::Approx(l2_norm(v)).epsilon(1e-13));
    CHECK(!dec.bernstein_ratio(v, 3).has_value());  // far block holds nothing
  }

  TEST_CASE("bernstein ratios stay inside the annulus bounds") {
    Grid grid(16);
    BlockDecomposition dec(grid, build_cutoffs());
    const SpectralField v = random_field(grid, 24);
    for (int q = 0; q <= dec.q_max(); ++q) {
      const auto r = dec.bernstein_ratio(v, q);
      REQUIRE(r.has_value());
      CHECK(*r >= 0.75 - 1e-12);
      CHECK(*r <= 8.0 / 3.0 + 1e-12);
    }
    const double low = dec.block_grad_l2(v, -1) / dec.block_l2(v, -1);
    CHECK(low <= 4.0 / 3.0 + 1e-12);
  }

  TEST_CASE("squared weights never exceed one and sum near one") {
    Grid grid(32);
    BlockDecomposition dec(grid, build_cutoffs());
    double lo = 2, hi = 0;
    for (Index f = 1; f < grid.size(); ++f) {
      double s = 0;
      for (int q = -1; q <= dec.q_max(); ++q) {
        const double w = dec.weight(q)[f];
        s += w * w;
      }
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    CHECK(hi <= 1.0 + 1e-12);
    CHECK(lo >= 1.0 / 3.0);
  }
}
