// Vorticity-form Navier-Stokes on the periodic box:
//
//   dv/dt - Lap v + div(B v) = 0,   B v = v (x) u - u (x) v,   u = curl^-1 v
//
// with (a (x) b)_il = a_i b_l and the divergence over the second index, so
// div(B v) = (u . grad) v - (v . grad) u. B is antisymmetric: only the
// entries (1,2), (1,3), (2,3) are formed, and the assembled right-hand
// side is divergence-free identically.
//
// Time stepping is integrating-factor Heun: with E = exp(-|k|^2 dt) and
// N(v) = -div(B v),
//   va    = E (v + dt N(v))
//   v_new = E v + (dt/2) (E N(v) + N(va))
// second order in dt, and exact on the heat flow, so pure-decay solutions
// are reproduced to roundoff at any step size. The advective CFL guard
// dt <= c / (n max|u|) is checked at start and watched during the run.
//
// Alongside the state the solver keeps an energy ledger at every step:
// per-block energies, the dissipation integrals accumulated with the
// heat-exact weight (1 - exp(-2|k|^2 dt)) / 2 (left value per mode, exact
// on pure decay), and the nonlinear coupling rates
//   C_q = vol sum_k w_q^2 Re[ N(v)^ . conj(v^) ],
// optionally split through the Bony decomposition of each tensor entry at
// a configurable step stride.

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "paley/dealias.hpp"
#include "paley/initial_data.hpp"
#include "paley/norms.hpp"
#include "paley/paraproduct.hpp"

namespace paley {

struct SolverConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  bool nonlinear = true;
  int record_stride = 1;   // sampling cadence for the series views
  int split_stride = 0;    // 0: no paraproduct coupling samples
  double cfl_limit = 0.5;  // dt * n * max|u| must stay below this
  double blowup_factor = 1e6;
};

// Per-step accounting; row i corresponds to t_i = i * dt.
struct EnergyLedger {
  double dt = 0;
  Eigen::ArrayXXd half_block_sq;   // (1/2) ||Delta_q v||^2
  Eigen::ArrayXXd block_grad_sq;   // ||grad Delta_q v||^2
  Eigen::ArrayXXd dissipation;     // cumulative int_0^{t_i} ||grad Delta_q v||^2
  Eigen::ArrayXXd coupling_rate;   // C_q(t_i)
  Eigen::ArrayXd total_sq;         // ||v||^2

  // Bony-split coupling samples (empty unless split_stride > 0).
  double split_dt = 0;
  Eigen::ArrayXd split_times;
  Eigen::ArrayXXd c_remainder;  // comparable-frequency part of C_q
  Eigen::ArrayXXd c_vlow;       // vorticity-low paraproduct part
  Eigen::ArrayXXd c_vhigh;      // vorticity-high paraproduct part
  Eigen::ArrayXXd c_direct;     // unsplit coupling, independently dealiased

  int steps() const { return static_cast<int>(total_sq.size()) - 1; }

  // Cumulative trapezoid of the coupling rate up to row i.
  Eigen::ArrayXd coupling_integral(int i) const {
    Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(coupling_rate.cols());
    for (int m = 1; m <= i; ++m)
      acc += 0.5 * dt * (coupling_rate.row(m - 1) + coupling_rate.row(m)).transpose();
    return acc;
  }
};

struct RunResult {
  SolverConfig config;
  double v0_l2 = 0;
  double u0_inf = 0;
  BlockSeries series;   // block norms at record_stride
  TimeSeries grad_l2;   // full-field ||grad v|| at record_stride
  TimeSeries u_inf;     // max|u| at record_stride (padded-grid samples)
  EnergyLedger ledger;  // every accepted step
  SpectralField v_final{Grid(8), 3};
  double max_div = 0;   // worst max_k |k . v^| over recorded states
  double max_herm = 0;  // worst Hermitian-symmetry defect over recorded states
  bool blew_up = false;
  double blowup_time = -1;
  bool cfl_warning = false;

  double q_norm_sq_series() const { return ::paley::q_norm_sq(series, grad_l2); }
};

class VorticitySolver {
 public:
  using Field = SpectralField;
  using ArrayR = Eigen::ArrayXd;
  using ArrayC = Eigen::Array<std::complex<double>, Eigen::Dynamic, 1>;

  VorticitySolver(const Grid& grid, const CutoffSystem& cut, const SolverConfig& config)
      : grid_(grid),
        config_(config),
        dec_(grid, cut),
        engine_(grid),
        para_(dec_, engine_) {
    if (!(config.dt > 0) || !(config.t_end > 0))
      throw std::invalid_argument("solver: dt and t_end must be positive");
    steps_ = static_cast<int>(std::llround(config.t_end / config.dt));
    if (steps_ < 1 || std::abs(steps_ * config.dt - config.t_end) > 1e-9 * config.t_end)
      throw std::invalid_argument("solver: t_end must be a whole number of steps");
    if (config.record_stride < 1 || steps_ % config.record_stride != 0)
      throw std::invalid_argument("solver: record_stride must divide the step count");
    if (config.split_stride < 0 ||
        (config.split_stride > 0 && steps_ % config.split_stride != 0))
      throw std::invalid_argument("solver: split_stride must divide the step count");
    decay_ = (-config.dt * grid.k2()).exp();
    heat_weight_ = 0.5 * (1.0 - decay_.square());
  }

  const BlockDecompositionT<double>& blocks() const { return dec_; }
  int steps() const { return steps_; }

  // N(v) = -div(B v), dealiased; max|u| over the padded grid rides along.
  Field nonlinear_term(const Field& v) const {
    if (v.grid != grid_ || !v.is_vector())
      throw std::invalid_argument("solver: field must be a vector field on the solver grid");
    double u_inf = 0;
    return rhs(v, u_inf);
  }

  RunResult run(const Field& v0) const {
    if (v0.grid != grid_ || !v0.is_vector())
      throw std::invalid_argument("solver: v0 must be a vector field on the solver grid");

    RunResult res;
    res.config = config_;
    res.v0_l2 = l2_norm(v0);

    EnergyLedger& led = res.ledger;
    const int nb = dec_.block_count();
    led.dt = config_.dt;
    led.half_block_sq.setZero(steps_ + 1, nb);
    led.block_grad_sq.setZero(steps_ + 1, nb);
    led.dissipation.setZero(steps_ + 1, nb);
    led.coupling_rate.setZero(steps_ + 1, nb);
    led.total_sq.setZero(steps_ + 1);
    const int n_split = config_.split_stride > 0 ? steps_ / config_.split_stride + 1 : 0;
    if (n_split > 0) {
      led.split_dt = config_.dt * config_.split_stride;
      led.split_times.setZero(n_split);
      led.c_remainder.setZero(n_split, nb);
      led.c_vlow.setZero(n_split, nb);
      led.c_vhigh.setZero(n_split, nb);
      led.c_direct.setZero(n_split, nb);
    }

    std::vector<double> rec_t, rec_grad, rec_uinf;
    std::vector<Eigen::ArrayXd> rec_b, rec_g;

    Field v = v0;
    leray_project_inplace(v);
    Field v_prev = v;
    Eigen::ArrayXd diss_acc = Eigen::ArrayXd::Zero(nb);
    int last_row = steps_;

    for (int m = 0; m <= steps_; ++m) {
      const bool final_step = m == steps_;
      const bool record_row = m % config_.record_stride == 0 || final_step;

      double u_inf = 0;
      Field nv(grid_, 3);
      if (config_.nonlinear)
        nv = rhs(v, u_inf);
      else if (record_row)
        u_inf = linf_norm_refined(biot_savart(v), 2);

      // Ledger row at t_m.
      led.total_sq[m] = v.coeff.abs2().sum();
      for (int q = -1; q <= dec_.q_max(); ++q) {
        const auto& sp = dec_.support(q);
        double b2 = 0, g2 = 0, dw = 0, cp = 0;
        for (std::size_t i = 0; i < sp.idx.size(); ++i) {
          const Index f = sp.idx[i];
          double m2 = 0, cr = 0;
          for (int c = 0; c < 3; ++c) {
            m2 += std::norm(v.coeff(f, c));
            if (config_.nonlinear)
              cr += nv.coeff(f, c).real() * v.coeff(f, c).real() +
                    nv.coeff(f, c).imag() * v.coeff(f, c).imag();
          }
          b2 += sp.w2[i] * m2;
          g2 += sp.w2k2[i] * m2;
          dw += sp.w2[i] * heat_weight_[f] * m2;
          cp += sp.w2[i] * cr;
        }
        const double vol = Grid::volume();
        led.half_block_sq(m, q + 1) = 0.5 * vol * b2;
        led.block_grad_sq(m, q + 1) = vol * g2;
        led.coupling_rate(m, q + 1) = vol * cp;
        led.dissipation(m, q + 1) = diss_acc[q + 1];
        if (!final_step) diss_acc[q + 1] += vol * dw;
      }

      if (m == 0) {
        res.u0_inf = u_inf;
        if (config_.nonlinear && config_.dt * grid_.n() * u_inf > config_.cfl_limit)
          throw std::invalid_argument("solver: time step violates the advective CFL bound");
      } else if (config_.nonlinear && config_.dt * grid_.n() * u_inf > config_.cfl_limit) {
        res.cfl_warning = true;
      }

      if (record_row) {
        rec_t.push_back(m * config_.dt);
        rec_uinf.push_back(u_inf);
        res.max_div = std::max(res.max_div, max_divergence(v));
        res.max_herm = std::max(res.max_herm, hermitian_error(v));
        double g2full = (v.coeff.abs2().rowwise().sum() * grid_.k2()).sum();
        rec_grad.push_back(std::sqrt(Grid::volume() * g2full));
        Eigen::ArrayXd brow(nb), grow(nb);
        for (int q = 0; q < nb; ++q) {
          brow[q] = std::sqrt(2.0 * led.half_block_sq(m, q));
          grow[q] = std::sqrt(led.block_grad_sq(m, q));
        }
        rec_b.push_back(brow);
        rec_g.push_back(grow);
      }

      if (n_split > 0 && m % config_.split_stride == 0) {
        const int row = m / config_.split_stride;
        led.split_times[row] = m * config_.dt;
        split_couplings(v, row, led);
      }

      if (final_step) break;

      // Heun step with the exact heat factor.
      v_prev = v;
      Field va(grid_, 3);
      Field vn(grid_, 3);
      if (config_.nonlinear) {
        for (int c = 0; c < 3; ++c)
          va.coeff.col(c) =
              (v.coeff.col(c) + config_.dt * nv.coeff.col(c)) * decay_.cast<std::complex<double>>();
        double dummy = 0;
        const Field na = rhs(va, dummy);
        for (int c = 0; c < 3; ++c)
          vn.coeff.col(c) =
              (v.coeff.col(c) + 0.5 * config_.dt * nv.coeff.col(c)) *
                  decay_.cast<std::complex<double>>() +
              0.5 * config_.dt * na.coeff.col(c);
      } else {
        for (int c = 0; c < 3; ++c)
          vn.coeff.col(c) = v.coeff.col(c) * decay_.cast<std::complex<double>>();
      }
      leray_project_inplace(vn);
      v = vn;

      const double total = v.coeff.abs2().sum();
      if (!std::isfinite(total) ||
          total > config_.blowup_factor * config_.blowup_factor * (led.total_sq[0] + 1e-300)) {
        res.blew_up = true;
        res.blowup_time = (m + 1) * config_.dt;
        last_row = m;
        v = v_prev;  // last valid state
        break;
      }
    }

    if (res.blew_up) {
      led.half_block_sq.conservativeResize(last_row + 1, Eigen::NoChange);
      led.block_grad_sq.conservativeResize(last_row + 1, Eigen::NoChange);
      led.dissipation.conservativeResize(last_row + 1, Eigen::NoChange);
      led.coupling_rate.conservativeResize(last_row + 1, Eigen::NoChange);
      led.total_sq.conservativeResize(last_row + 1);
    }

    res.v_final = v;
    const int nrec = static_cast<int>(rec_t.size());
    res.series.dt = config_.dt * config_.record_stride;
    res.series.l2.resize(nrec, nb);
    res.series.grad_l2.resize(nrec, nb);
    res.grad_l2.dt = res.series.dt;
    res.grad_l2.values.resize(nrec);
    res.u_inf.dt = res.series.dt;
    res.u_inf.values.resize(nrec);
    for (int i = 0; i < nrec; ++i) {
      res.series.l2.row(i) = rec_b[i].transpose();
      res.series.grad_l2.row(i) = rec_g[i].transpose();
      res.grad_l2.values[i] = rec_grad[i];
      res.u_inf.values[i] = rec_uinf[i];
    }
    return res;
  }

 private:
  void leray_project_inplace(Field& w) const {
    using Complex = std::complex<double>;
    ArrayC d = (grid_.ikx() * w.coeff.col(0) + grid_.iky() * w.coeff.col(1) +
                grid_.ikz() * w.coeff.col(2)) *
               grid_.inv_k2d().cast<Complex>();
    w.coeff.col(0) += grid_.ikx() * d;
    w.coeff.col(1) += grid_.iky() * d;
    w.coeff.col(2) += grid_.ikz() * d;
  }

  // Assemble N(v) = -div(B v) through the padded grid; five transforms:
  // three packed inverses for (u1,u2), (u3,v1), (v2,v3), one packed
  // forward for (B12, B13), one for B23.
  Field rhs(const Field& v, double& u_inf) const {
    const Field u = biot_savart(v);
    ArrayR u1, u2, u3, v1, v2, v3;
    engine_.to_physical_pair(u.coeff.col(0).data(), u.coeff.col(1).data(), u1, u2);
    engine_.to_physical_pair(u.coeff.col(2).data(), v.coeff.col(0).data(), u3, v1);
    engine_.to_physical_pair(v.coeff.col(1).data(), v.coeff.col(2).data(), v2, v3);

    u_inf = std::sqrt((u1.square() + u2.square() + u3.square()).maxCoeff());

    ArrayR b12 = v1 * u2 - u1 * v2;
    ArrayR b13 = v1 * u3 - u1 * v3;
    ArrayR b23 = v2 * u3 - u2 * v3;

    ArrayC bh12(grid_.size()), bh13(grid_.size()), bh23(grid_.size());
    engine_.to_spectral_pair(b12, b13, bh12.data(), bh13.data());
    engine_.to_spectral(b23, bh23.data());

    Field out(grid_, 3);
    out.coeff.col(0) = -(grid_.iky() * bh12 + grid_.ikz() * bh13);
    out.coeff.col(1) = grid_.ikx() * bh12 - grid_.ikz() * bh23;
    out.coeff.col(2) = grid_.ikx() * bh13 + grid_.iky() * bh23;
    return out;
  }

  // Bony-split coupling sample: for each tensor entry (i,l) the product
  // v_i u_l - u_i v_l is split into remainder / v-low / v-high parts, each
  // contracted against d_il = ik_l v_i - ik_i v_l under the block weights.
  void split_couplings(const Field& v, int row, EnergyLedger& led) const {
    const Field u = biot_savart(v);

    // Padded physical block stacks for the six scalar components.
    Field sc(grid_, 1);
    std::vector<Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic>> pu(3), pv(3);
    ArrayR fu[3], fv[3];  // full-field padded physicals for the direct product
    for (int c = 0; c < 3; ++c) {
      sc.coeff.col(0) = u.coeff.col(c);
      pu[c] = para_.physical_blocks(sc);
      sc.coeff.col(0) = v.coeff.col(c);
      pv[c] = para_.physical_blocks(sc);
    }
    engine_.to_physical_pair(u.coeff.col(0).data(), u.coeff.col(1).data(), fu[0], fu[1]);
    engine_.to_physical_pair(u.coeff.col(2).data(), v.coeff.col(0).data(), fu[2], fv[0]);
    engine_.to_physical_pair(v.coeff.col(1).data(), v.coeff.col(2).data(), fv[1], fv[2]);

    const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    ArrayC part(grid_.size());
    ArrayC direct1(grid_.size()), direct2(grid_.size());
    ArrayR direct01;
    for (int e = 0; e < 3; ++e) {
      const int i = pairs[e][0], l = pairs[e][1];
      const auto& iki = i == 0 ? grid_.ikx() : grid_.iky();
      const auto& ikl = l == 1 ? grid_.iky() : grid_.ikz();
      ArrayC d = ikl * v.coeff.col(i) - iki * v.coeff.col(l);

      ArrayR acc = para_.r_accum(pv[i], pu[l]) - para_.r_accum(pu[i], pv[l]);
      engine_.to_spectral(acc, part.data());
      accumulate_coupling(part, d, led.c_remainder, row);

      acc = para_.t_accum(pv[i], pu[l]) - para_.t_accum(pv[l], pu[i]);
      engine_.to_spectral(acc, part.data());
      accumulate_coupling(part, d, led.c_vlow, row);

      acc = para_.t_accum(pu[l], pv[i]) - para_.t_accum(pu[i], pv[l]);
      engine_.to_spectral(acc, part.data());
      accumulate_coupling(part, d, led.c_vhigh, row);

      acc = fv[i] * fu[l] - fu[i] * fv[l];
      // stash and flush the direct entries through paired forwards
      if (e == 0) {
        direct01 = acc;
      } else if (e == 1) {
        engine_.to_spectral_pair(direct01, acc, direct1.data(), direct2.data());
        accumulate_coupling_entry(direct1, v, 0, 1, led.c_direct, row);
        accumulate_coupling_entry(direct2, v, 0, 2, led.c_direct, row);
      } else {
        engine_.to_spectral(acc, direct1.data());
        accumulate_coupling_entry(direct1, v, 1, 2, led.c_direct, row);
      }
    }
  }

  void accumulate_coupling(const ArrayC& part, const ArrayC& d, Eigen::ArrayXXd& dst,
                           int row) const {
    for (int q = -1; q <= dec_.q_max(); ++q) {
      const auto& sp = dec_.support(q);
      double acc = 0;
      for (std::size_t s = 0; s < sp.idx.size(); ++s) {
        const Index f = sp.idx[s];
        acc += sp.w2[s] * (part[f].real() * d[f].real() + part[f].imag() * d[f].imag());
      }
      dst(row, q + 1) += Grid::volume() * acc;
    }
  }

  void accumulate_coupling_entry(const ArrayC& bh, const Field& v, int i, int l,
                                 Eigen::ArrayXXd& dst, int row) const {
    const auto& iki = i == 0 ? grid_.ikx() : grid_.iky();
    const auto& ikl = l == 1 ? grid_.iky() : grid_.ikz();
    ArrayC d = ikl * v.coeff.col(i) - iki * v.coeff.col(l);
    accumulate_coupling(bh, d, dst, row);
  }

  Grid grid_;
  SolverConfig config_;
  BlockDecompositionT<double> dec_;
  DealiasEngineT<double> engine_;
  ParaproductT<double> para_;
  ArrayR decay_, heat_weight_;
  int steps_ = 0;
};

}  // namespace paley
