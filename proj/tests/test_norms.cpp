#include <doctest.h>

#include <cmath>
#include <random>

#include "paley/cutoffs.hpp"
#include "paley/initial_data.hpp"
#include "paley/norms.hpp"

using namespace paley;

namespace {

TimeSeries series_of(std::initializer_list<double> vals, double dt) {
  TimeSeries f;
  f.dt = dt;
  f.values.resize(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double v : vals) f.values[i++] = v;
  return f;
}

TimeSeries random_series(int len, double dt, std::uint64_t seed, bool positive) {
  GaussianSampler gauss(seed);
  TimeSeries f;
  f.dt = dt;
  f.values.resize(len);
  for (int i = 0; i < len; ++i)
    f.values[i] = positive ? gauss.next() * gauss.next() + 1e-6 : gauss.next();
  if (positive) f.values = f.values.abs();
  return f;
}

}  // namespace

TEST_SUITE("norms") {
  TEST_CASE("weak norm of the inverse square root is one") {
    const int N = 100000;
    TimeSeries f;
    f.dt = 1.0 / N;
    f.values.resize(N);
    for (int i = 1; i <= N; ++i) f.values[i - 1] = 1.0 / std::sqrt(i * f.dt);
    // sigma * |{|f| > sigma}|^{1/2} = sqrt(m dt) / sqrt(m dt) at every level
    CHECK(weak_lp_time_norm(f, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
    const double dual = lorentz_dual_norm(f);
    CHECK(dual == doctest::Approx(2.0 - 1.4604 / std::sqrt(double(N))).epsilon(1e-3));
  }

  TEST_CASE("hand-computed weak and dual norms of a three-sample series") {
    const TimeSeries f = series_of({3.0, 1.0, 2.0}, 0.25);
    // sorted 3, 2, 1; weak: max(3 sqrt(.25), 2 sqrt(.5), 1 sqrt(.75))
    CHECK(weak_lp_time_norm(f, 2.0) == doctest::Approx(3.0 * 0.5).epsilon(1e-15));
    // dual: max(3*.25/sqrt(.25), 5*.25/sqrt(.5), 6*.25/sqrt(.75))
    const double want = std::max({0.75 / 0.5, 1.25 / std::sqrt(0.5), 1.5 / std::sqrt(0.75)});
    CHECK(lorentz_dual_norm(f) == doctest::Approx(want).epsilon(1e-15));
  }

  TEST_CASE("weak below dual below twice weak") {
    for (int trial = 0; trial < 50; ++trial) {
      const TimeSeries f = random_series(200, 1e-2, 300 + trial, false);
      const double w = weak_lp_time_norm(f, 2.0);
      const double d = lorentz_dual_norm(f);
      CHECK(w <= d * (1 + 1e-12));
      CHECK(d <= 2 * w * (1 + 1e-12));
    }
  }

  TEST_CASE("both norms are rearrangement invariant and homogeneous") {
    TimeSeries f = random_series(300, 1e-3, 400, false);
    const double w = weak_lp_time_norm(f, 2.0);
    const double d = lorentz_dual_norm(f);
    TimeSeries g = f;
    std::mt19937_64 rng(7);
    for (Eigen::Index i = g.values.size() - 1; i > 0; --i)
      std::swap(g.values[i], g.values[rng() % (i + 1)]);
    CHECK(weak_lp_time_norm(g, 2.0) == doctest::Approx(w).epsilon(1e-13));
    CHECK(lorentz_dual_norm(g) == doctest::Approx(d).epsilon(1e-13));
    g.values = -2.5 * f.values;
    CHECK(weak_lp_time_norm(g, 2.0) == doctest::Approx(2.5 * w).epsilon(1e-13));
    CHECK(lorentz_dual_norm(g) == doctest::Approx(2.5 * d).epsilon(1e-13));
  }

  TEST_CASE("level sets slice by dyadic ratio to the maximum") {
    const TimeSeries h = random_series(500, 2e-3, 500, true);
    const LevelSetPartition part = level_sets(h);
    const double M = h.values.maxCoeff();
    CHECK(part.max_h == M);
    int members = 0;
    double mass = part.residual_mass;
    for (const auto& s : part.sets) {
      CHECK(s.k >= 1);
      for (int i : s.indices) {
        CHECK(h.values[i] <= std::ldexp(M, 1 - s.k) * (1 + 1e-14));
        CHECK(h.values[i] > std::ldexp(M, -s.k) * (1 - 1e-14));
      }
      CHECK(s.measure == doctest::Approx(h.dt * double(s.indices.size())).epsilon(1e-14));
      CHECK(s.sup_h * s.measure <= 2.0 * s.integral_h * (1 + 1e-12));
      members += static_cast<int>(s.indices.size());
      mass += s.integral_h;
    }
    CHECK(members == 500);
    CHECK(mass == doctest::Approx(h.dt * h.values.sum()).epsilon(1e-12));
  }

  TEST_CASE("chain bound dominates the weighted integral") {
    for (int trial = 0; trial < 30; ++trial) {
      TimeSeries f = random_series(256, 1e-3, 600 + trial, false);
      TimeSeries h = random_series(256, 1e-3, 700 + trial, true);
      const ChainBound cb = levelset_chain_bound(f, h, trial % 5);
      const double direct = f.dt * (f.values.abs() * h.values).sum();
      CHECK(cb.lhs == doctest::Approx(std::ldexp(8.0 / 3.0, trial % 5) * direct).epsilon(1e-12));
      CHECK(cb.lhs <= cb.rhs * (1 + 1e-12));
    }
  }

  TEST_CASE("dyadic tail sums obey the geometric bound") {
    GaussianSampler gauss(800);
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::ArrayXd a(48);
      for (int i = 0; i < 48; ++i) a[i] = std::abs(gauss.next());
      const HardyYoungResult r = hardy_young_check(a);
      CHECK(r.pass);
      CHECK(r.ratio <= r.bound + 1e-10);
    }
  }

  TEST_CASE("one-hot sequences achieve the closed-form ratio") {
    for (int i : {0, 3, 5, 12}) {
      Eigen::ArrayXd a = Eigen::ArrayXd::Zero(64);
      a[i] = 3.0;
      const double want = std::sqrt(2.0 - std::ldexp(1.0, -2 - i));
      CHECK(hardy_young_check(a).ratio == doctest::Approx(want).epsilon(1e-13));
    }
    Eigen::ArrayXd deep = Eigen::ArrayXd::Zero(64);
    deep[40] = 1.0;
    CHECK(std::abs(hardy_young_check(deep).ratio - std::sqrt(2.0)) < 1e-12);
    CHECK(hardy_young_check(Eigen::ArrayXd::Zero(8)).pass);
  }

  TEST_CASE("q norm accumulates block suprema and dissipation") {
    BlockSeries b;
    b.dt = 0.5;
    b.l2.resize(3, 2);
    b.l2 << 1.0, 2.0, 3.0, 1.0, 0.5, 4.0;
    b.grad_l2.resize(3, 2);
    b.grad_l2.setZero();
    TimeSeries g = series_of({1.0, 2.0, 2.0}, 0.5);
    // sup halves: .5*9 + .5*16; dissipation dt * sum g^2 = .5*(1+4+4)
    CHECK(q_norm_sq(b, g) ==
          doctest::Approx(0.5 * 9.0 + 0.5 * 16.0 + 0.5 * 9.0).epsilon(1e-14));
  }

  TEST_CASE("embedding sum scales linearly in the weight and quadratically in the field") {
    Grid grid(16);
    BlockDecomposition dec(grid, build_cutoffs());
    FieldPath path;
    path.dt = 0.1;
    for (int i = 0; i < 3; ++i)
      path.fields.push_back(random_band_vorticity(grid, 900 + i, 1.0));
    TimeSeries f = series_of({0.7, 0.0, 1.3}, 0.1);
    const double base = embedding_lhs(f, path, dec);
    CHECK(base > 0);
    TimeSeries f2 = f;
    f2.values *= 3.0;
    CHECK(embedding_lhs(f2, path, dec) == doctest::Approx(3.0 * base).epsilon(1e-12));
    FieldPath doubled = path;
    for (auto& v : doubled.fields) v.coeff *= 2.0;
    CHECK(embedding_lhs(f, doubled, dec) == doctest::Approx(4.0 * base).epsilon(1e-12));
    TimeSeries mism = series_of({1.0, 1.0}, 0.1);
    CHECK_THROWS_AS((void)embedding_lhs(mism, path, dec), std::invalid_argument);
  }

  TEST_CASE("block series rows match direct block norms") {
    Grid grid(16);
    BlockDecomposition dec(grid, build_cutoffs());
    FieldPath path;
    path.dt = 0.2;
    path.fields.push_back(random_band_vorticity(grid, 950, 2.0));
    const BlockSeries bs = block_series(path, dec);
    double sq = 0;
    for (int q = 0; q < bs.blocks(); ++q) {
      CHECK(bs.l2(0, q) == doctest::Approx(dec.block_l2(path.fields[0], q - 1)).epsilon(1e-13));
      sq += bs.l2(0, q) * bs.l2(0, q);
    }
    // almost-orthogonality: the blocks tile the energy exactly here because
    // the band-limited data meets each weight on its plateau or shares
    // overlaps that the squared weights still sum below one
    CHECK(sq <= l2_norm(path.fields[0]) * l2_norm(path.fields[0]) * (1 + 1e-12));
    const TimeSeries gs = grad_series(path);
    CHECK(gs.values[0] > 0);
  }
}
