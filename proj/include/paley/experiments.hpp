// Experiment driver: named suites that exercise the decomposition, the
// norms, the paraproducts, and the solver, appending pass/fail rows to an
// ExperimentReport. The CLI and the acceptance harness both run these.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "paley/report.hpp"
#include "paley/vorticity.hpp"

namespace paley {

struct ExperimentConfig {
  int n = 32;
  double T = 1.0;
  double dt = 5e-3;
  int record_stride = 1;
  std::uint64_t seed = 1;
  std::string suite = "all";
  std::string init = "random-band";  // abc | random-band | single-mode
  double amplitude = 1e-2;
  std::string out_dir;  // empty: no files written
  int parallel_seeds = 1;
  bool nonlinear = true;
  double blowup_factor = 1e6;  // growth gate handed to every solver run

  // Suite-internal sizes; the acceptance harness pins these explicitly.
  int reconstruction_fields = 50;
  int bernstein_fields = 100;
  int bony_pairs = 50;
  int embedding_trials = 200;
  int embedding_path_len = 8;
  int hardy_sequences = 1000;
  int apriori_seeds = 5;
  double apriori_eps = 0;  // >0: check measured weak norms stay below it

  void validate() const;
};

// One solver run from the configured initial-data family.
RunResult solve_once(const ExperimentConfig& cfg, std::uint64_t seed, int split_stride = 0);

// Suites append rows; names are stable identifiers the acceptance harness
// keys on. Each suite is deterministic in (config, seed).
void suite_partition(const ExperimentConfig& cfg, ExperimentReport& rep);
void suite_bernstein(const ExperimentConfig& cfg, ExperimentReport& rep);
void suite_lorentz(const ExperimentConfig& cfg, ExperimentReport& rep);
void suite_embedding(const ExperimentConfig& cfg, ExperimentReport& rep);
void suite_paraproduct(const ExperimentConfig& cfg, ExperimentReport& rep);
void suite_solver(const ExperimentConfig& cfg, ExperimentReport& rep);
void suite_apriori(const ExperimentConfig& cfg, ExperimentReport& rep);
void suite_hardy_young(const ExperimentConfig& cfg, ExperimentReport& rep);

struct SuiteOutcome {
  ExperimentReport report;
  bool blew_up = false;
};

// Dispatch on cfg.suite ("all" runs every suite); fills the config echo.
SuiteOutcome run_suites(const ExperimentConfig& cfg);

struct CalibrationPoint {
  double amplitude = 0;
  double weak_u = 0;    // max over seeds of the measured velocity weak norm
  double q_ratio = 0;   // max over seeds of ||v||_Q^2 / ||v0||_2^2
  bool pass = false;    // q_ratio <= 2
};

struct CalibrationResult {
  double eps_emp = 0;   // largest weak norm among passing amplitudes
  bool open_range = false;  // no failing amplitude found in the sweep
  std::vector<CalibrationPoint> curve;  // ascending amplitude
};

// Amplitude ladder plus bisection toward the failure boundary of the
// Q-norm bound; appends calibration rows and the eps constant to rep.
CalibrationResult calibrate_epsilon(const ExperimentConfig& cfg, ExperimentReport& rep);

// CSV emitters; return the written path.
std::string write_run_csv(const std::string& path, const RunResult& run);
std::string write_calibration_csv(const std::string& path, const CalibrationResult& cal);

}  // namespace paley
