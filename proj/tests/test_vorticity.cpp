#include <doctest.h>

#include <cmath>

#include "paley/initial_data.hpp"
#include "paley/vorticity.hpp"

using namespace paley;

TEST_SUITE("vorticity") {
  TEST_CASE("single mode decays at the exact heat rate with the quadratic term off") {
    Grid grid(16);
    SolverConfig sc;
    sc.dt = 1e-2;
    sc.t_end = 0.4;
    sc.nonlinear = false;
    sc.record_stride = 5;
    VorticitySolver solver(grid, build_cutoffs(), sc);
    const RunResult r = solver.run(single_mode_vorticity(grid, 1.0));
    for (int i = 0; i < r.series.size(); ++i) {
      const double t = i * r.series.dt;
      const double vn = std::sqrt(r.series.l2.row(i).square().sum());
      CHECK(vn == doctest::Approx(std::exp(-t) * r.v0_l2).epsilon(1e-12));
    }
    CHECK(l2_norm(r.v_final) == doctest::Approx(std::exp(-0.4) * r.v0_l2).epsilon(1e-12));
    CHECK(!r.blew_up);
  }

  TEST_CASE("the quadratic term cancels on an abc eigenflow") {
    Grid grid(16);
    SolverConfig sc;
    sc.dt = 1e-3;
    sc.t_end = 0.1;
    VorticitySolver solver(grid, build_cutoffs(), sc);
    const RunResult r = solver.run(abc_vorticity(grid, 1.0, 1.0, 1.0));
    double worst = 0, worst_u = 0;
    for (int i = 0; i < r.series.size(); ++i) {
      const double t = i * r.series.dt;
      const double vn = std::sqrt(r.series.l2.row(i).square().sum());
      worst = std::max(worst, std::abs(vn - std::exp(-t) * r.v0_l2) / r.v0_l2);
      worst_u = std::max(worst_u, std::abs(r.u_inf.values[i] - std::exp(-t) * r.u0_inf));
    }
    CHECK(worst < 1e-10);
    CHECK(worst_u < 1e-9);
  }

  TEST_CASE("recorded states stay solenoidal, real, and mean free") {
    Grid grid(16);
    SolverConfig sc;
    sc.dt = 2e-3;
    sc.t_end = 0.1;
    sc.record_stride = 10;
    VorticitySolver solver(grid, build_cutoffs(), sc);
    const RunResult r = solver.run(random_band_vorticity(grid, 42, 1.0));
    CHECK(r.max_div < 1e-11);
    CHECK(r.max_herm < 1e-11);
    CHECK(std::abs(r.v_final.coeff(0, 0)) + std::abs(r.v_final.coeff(0, 1)) +
              std::abs(r.v_final.coeff(0, 2)) <
          1e-15);
    CHECK(!r.cfl_warning);
  }

  TEST_CASE("block energy books balance exactly on a linear run") {
    Grid grid(16);
    SolverConfig sc;
    sc.dt = 5e-3;
    sc.t_end = 0.25;
    sc.nonlinear = false;
    VorticitySolver solver(grid, build_cutoffs(), sc);
    const RunResult r = solver.run(random_band_vorticity(grid, 5, 1.0));
    const EnergyLedger& L = r.ledger;
    double worst = 0;
    for (int m = 0; m <= L.steps(); ++m)
      for (int q = 0; q < L.half_block_sq.cols(); ++q)
        worst = std::max(worst, std::abs(L.half_block_sq(m, q) - L.half_block_sq(0, q) +
                                         L.dissipation(m, q)));
    CHECK(worst / L.total_sq[0] < 1e-12);
  }

  TEST_CASE("with the quadratic term the coupling integral closes the books") {
    Grid grid(16);
    auto run_defect = [&](double dt) {
      SolverConfig sc;
      sc.dt = dt;
      sc.t_end = 0.1;
      VorticitySolver solver(grid, build_cutoffs(), sc);
      const RunResult r = solver.run(random_band_vorticity(grid, 6, 0.5));
      const EnergyLedger& L = r.ledger;
      double worst = 0;
      for (int m = 0; m <= L.steps(); ++m) {
        const Eigen::ArrayXd cq = L.coupling_integral(m);
        for (int q = 0; q < L.half_block_sq.cols(); ++q)
          worst = std::max(worst, std::abs(L.half_block_sq(m, q) - L.half_block_sq(0, q) +
                                           L.dissipation(m, q) - cq[q]));
      }
      return worst / L.total_sq[0];
    };
    // the residual is the O(dt) defect of the frozen-mode dissipation
    // quadrature; it must be small and shrink roughly linearly with dt
    const double coarse = run_defect(1e-3);
    const double fine = run_defect(5e-4);
    CHECK(coarse < 1e-5);
    CHECK(fine < 0.7 * coarse);
  }

  TEST_CASE("paraproduct parts of the coupling reproduce the direct value") {
    Grid grid(16);
    SolverConfig sc;
    sc.dt = 2e-3;
    sc.t_end = 0.05;
    sc.split_stride = 5;
    VorticitySolver solver(grid, build_cutoffs(), sc);
    const RunResult r = solver.run(random_band_vorticity(grid, 7, 1.5));
    const EnergyLedger& L = r.ledger;
    REQUIRE(L.c_direct.rows() == 6);
    double worst = 0, scale = 0;
    for (int i = 0; i < L.c_direct.rows(); ++i)
      for (int q = 0; q < L.c_direct.cols(); ++q) {
        worst = std::max(worst, std::abs(L.c_remainder(i, q) + L.c_vlow(i, q) +
                                         L.c_vhigh(i, q) - L.c_direct(i, q)));
        scale = std::max(scale, std::abs(L.c_direct(i, q)));
      }
    CHECK(worst < 1e-10 * std::max(scale, 1.0));
    // the sampled direct coupling matches the stepper's own account
    double mismatch = 0;
    for (int i = 0; i < L.c_direct.rows(); ++i) {
      const int m = i * sc.split_stride;
      for (int q = 0; q < L.c_direct.cols(); ++q)
        mismatch = std::max(mismatch, std::abs(L.c_direct(i, q) - L.coupling_rate(m, q)));
    }
    CHECK(mismatch < 1e-12 * std::max(scale, 1.0));
  }

  TEST_CASE("zero data returns identically zero histories") {
    Grid grid(16);
    SolverConfig sc;
    sc.dt = 1e-2;
    sc.t_end = 0.05;
    VorticitySolver solver(grid, build_cutoffs(), sc);
    const RunResult r = solver.run(SpectralField(grid, 3));
    CHECK(r.series.l2.abs().maxCoeff() == 0.0);
    CHECK(r.u_inf.values.abs().maxCoeff() == 0.0);
    CHECK(r.v_final.coeff.abs().maxCoeff() == 0.0);
    CHECK(!r.blew_up);
  }

  TEST_CASE("the growth guard truncates the run and keeps the last valid state") {
    Grid grid(16);
    SolverConfig sc;
    sc.dt = 1e-2;
    sc.t_end = 0.5;
    sc.nonlinear = false;
    sc.blowup_factor = 0.5;  // any surviving energy trips the guard
    VorticitySolver solver(grid, build_cutoffs(), sc);
    const RunResult r = solver.run(single_mode_vorticity(grid, 1.0));
    CHECK(r.blew_up);
    CHECK(r.blowup_time == doctest::Approx(sc.dt));
    CHECK(r.ledger.total_sq.size() == 1);
    CHECK(l2_norm(r.v_final) == doctest::Approx(r.v0_l2).epsilon(1e-12));
  }

  TEST_CASE("a step violating the advective bound is rejected at start") {
    Grid grid(16);
    SolverConfig sc;
    sc.dt = 1e-2;
    sc.t_end = 0.1;
    VorticitySolver solver(grid, build_cutoffs(), sc);
    CHECK_THROWS_AS((void)solver.run(random_band_vorticity(grid, 8, 2000.0)),
                    std::invalid_argument);
  }

  TEST_CASE("invalid time grids are rejected") {
    Grid grid(16);
    SolverConfig sc;
    sc.dt = 3e-3;
    sc.t_end = 0.01;  // not a whole number of steps
    CHECK_THROWS_AS(VorticitySolver(grid, build_cutoffs(), sc), std::invalid_argument);
    sc.dt = 1e-3;
    sc.record_stride = 3;  // does not divide 10
    CHECK_THROWS_AS(VorticitySolver(grid, build_cutoffs(), sc), std::invalid_argument);
  }

  TEST_CASE("identical configurations give bitwise identical runs") {
    Grid grid(16);
    SolverConfig sc;
    sc.dt = 2e-3;
    sc.t_end = 0.05;
    sc.split_stride = 5;
    VorticitySolver solver(grid, build_cutoffs(), sc);
    const RunResult a = solver.run(random_band_vorticity(grid, 9, 1.0));
    const RunResult b = solver.run(random_band_vorticity(grid, 9, 1.0));
    CHECK((a.v_final.coeff == b.v_final.coeff).all());
    CHECK((a.ledger.total_sq == b.ledger.total_sq).all());
    CHECK((a.ledger.c_direct == b.ledger.c_direct).all());
    CHECK(a.q_norm_sq_series() == b.q_norm_sq_series());
  }
}
