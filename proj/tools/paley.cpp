/*
 * paley: run verification suites over the spectral toolkit and the
 * periodic vorticity solver, calibrate the smallness threshold, and
 * pretty-print saved reports.
 *
 * Exit codes: 0 all checks pass, 1 some check failed, 2 usage or
 * configuration error, 3 a solver run hit the blow-up guard.
 */

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "paley/experiments.hpp"

namespace {

// flat key=value file whose keys mirror the long flag names; values already
// given on the command line or through the environment win over file entries
void apply_config_file(const std::string& path,
                       const std::map<std::string, CLI::Option*>& by_key) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  auto trim = [](const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key=value, got: " + stripped);
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (!by_key.count(key)) throw std::invalid_argument("config: unknown key " + key);
    kv[key] = value;  // last occurrence wins
  }
  for (const auto& [key, value] : kv) {
    CLI::Option* opt = by_key.at(key);
    if (opt->count() > 0) continue;
    opt->add_result(value);
    opt->run_callback();
  }
}

void print_report(const paley::ExperimentReport& rep) {
  for (const auto& c : rep.checks) {
    std::printf("[%s] %-28s measured=%-13.6g bound=%-13.6g %s\n", c.pass ? "PASS" : "FAIL",
                c.name.c_str(), c.measured, c.bound, c.source.c_str());
    if (!c.note.empty()) std::printf("       %s\n", c.note.c_str());
  }
  if (!rep.constants.empty()) {
    std::printf("constants:\n");
    for (const auto& [k, v] : rep.constants) std::printf("  %-22s %.10g\n", k.c_str(), v);
  }
  for (const auto& f : rep.series_files) std::printf("series: %s\n", f.c_str());
  std::printf("%s\n", rep.all_pass() ? "ALL CHECKS PASSED" : "CHECK FAILURES PRESENT");
}

int finish(const paley::ExperimentReport& rep, bool blew_up, const std::string& out_dir,
           const std::string& report_name) {
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    const auto path = (std::filesystem::path(out_dir) / report_name).string();
    paley::write_report(path, rep);
    std::printf("report: %s\n", path.c_str());
  }
  print_report(rep);
  if (blew_up) return 3;
  return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral block analysis and periodic vorticity experiments"};
  app.require_subcommand(1);

  paley::ExperimentConfig cfg;
  std::string config_file;
  std::map<std::string, CLI::Option*> run_keys, cal_keys;
  auto add_common = [&](CLI::App* sub, std::map<std::string, CLI::Option*>& keys) {
    sub->add_option("--config", config_file,
                    "flat key=value configuration file, flags take precedence");
    keys["n"] = sub->add_option("--n", cfg.n, "grid points per axis, power of two >= 8")
                    ->envname("PALEY_N");
    keys["T"] = sub->add_option("--T", cfg.T, "final time")->envname("PALEY_T");
    keys["dt"] = sub->add_option("--dt", cfg.dt, "time step")->envname("PALEY_DT");
    keys["seed"] = sub->add_option("--seed", cfg.seed, "base random seed")->envname("PALEY_SEED");
    keys["init"] =
        sub->add_option("--init", cfg.init, "initial data: abc | random-band | single-mode")
            ->envname("PALEY_INIT");
    keys["amplitude"] = sub->add_option("--amplitude", cfg.amplitude, "initial data amplitude")
                            ->envname("PALEY_AMPLITUDE");
    keys["out-dir"] = sub->add_option("--out-dir", cfg.out_dir,
                                      "directory for report and series files")
                          ->envname("PALEY_OUT_DIR");
    keys["parallel-seeds"] = sub->add_option("--parallel-seeds", cfg.parallel_seeds,
                                             "worker threads for multi-seed experiments")
                                 ->envname("PALEY_PARALLEL_SEEDS");
    keys["nonlinear"] = sub->add_flag("--nonlinear,!--linear", cfg.nonlinear,
                                      "keep or drop the quadratic term in solver runs")
                            ->envname("PALEY_NONLINEAR");
    keys["blowup-factor"] =
        sub->add_option("--blowup-factor", cfg.blowup_factor,
                        "abort a run when the total block energy grows past this factor squared")
            ->envname("PALEY_BLOWUP_FACTOR");
  };

  CLI::App* run = app.add_subcommand("run", "run a verification suite");
  add_common(run, run_keys);
  run_keys["suite"] =
      run->add_option("--suite", cfg.suite,
                      "partition | bernstein | lorentz | embedding | paraproduct | solver | "
                      "apriori | hardy-young | all")
          ->envname("PALEY_SUITE");
  run_keys["record-stride"] =
      run->add_option("--record-stride", cfg.record_stride, "steps between recorded samples")
          ->envname("PALEY_RECORD_STRIDE");

  CLI::App* cal = app.add_subcommand("calibrate-epsilon",
                                     "bisect the smallness threshold of the a priori bound");
  add_common(cal, cal_keys);

  std::string report_file;
  CLI::App* rview = app.add_subcommand("report", "pretty-print a saved report");
  rview->add_option("file", report_file, "report JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!config_file.empty() && (run->parsed() || cal->parsed()))
      apply_config_file(config_file, run->parsed() ? run_keys : cal_keys);
    if (run->parsed()) {
      const paley::SuiteOutcome out = paley::run_suites(cfg);
      return finish(out.report, out.blew_up, cfg.out_dir, "report.json");
    }
    if (cal->parsed()) {
      paley::ExperimentReport rep;
      rep.config["n"] = cfg.n;
      rep.config["T"] = cfg.T;
      rep.config["dt"] = cfg.dt;
      rep.config["seed"] = cfg.seed;
      rep.config["amplitude"] = cfg.amplitude;
      const paley::CalibrationResult res = paley::calibrate_epsilon(cfg, rep);
      for (const auto& p : res.curve)
        std::printf("amplitude=%-12.6g weak_u=%-12.6g q_ratio=%-12.6g %s\n", p.amplitude,
                    p.weak_u, p.q_ratio, p.pass ? "pass" : "fail");
      std::printf("eps_emp=%.10g%s\n", res.eps_emp,
                  res.open_range ? " (lower bound, no failure found)" : "");
      return finish(rep, false, cfg.out_dir, "calibration.json");
    }
    const paley::ExperimentReport rep = paley::read_report(report_file);
    std::printf("tool=%s version=%s\n", rep.tool.c_str(), rep.version.c_str());
    std::printf("config: %s\n", rep.config.dump().c_str());
    print_report(rep);
    return rep.all_pass() ? 0 : 1;
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
