// Machine-readable experiment reports and CSV series files.
//
// Reports are JSON documents with a fixed key order and no timing or host
// information, so a given configuration and seed produces byte-identical
// output. Every check row carries the source of its bound: a named
// inequality ("bernstein-upper", "partition-of-unity", ...) or
// "empirical" for constants measured rather than proved.

#pragma once

#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace paley {

using ordered_json = nlohmann::ordered_json;

struct CheckRow {
  std::string name;
  double measured = 0;
  double bound = 0;
  double ratio = 0;  // measured / bound where that is meaningful
  bool pass = false;
  std::string source;  // provenance of the bound
  std::string note;

  static CheckRow upper(const std::string& name, double measured, double bound,
                        const std::string& source, const std::string& note = "") {
    CheckRow r;
    r.name = name;
    r.measured = measured;
    r.bound = bound;
    r.ratio = bound != 0 ? measured / bound : (measured == 0 ? 0 : std::numeric_limits<double>::infinity());
    r.pass = measured <= bound;
    r.source = source;
    r.note = note;
    return r;
  }

  static CheckRow window(const std::string& name, double measured, double lo, double hi,
                         const std::string& source, const std::string& note = "") {
    CheckRow r;
    r.name = name;
    r.measured = measured;
    r.bound = hi;
    r.ratio = hi != 0 ? measured / hi : 0;
    r.pass = measured >= lo && measured <= hi;
    r.source = source;
    r.note = note.empty() ? "window [" + std::to_string(lo) + ", " + std::to_string(hi) + "]"
                          : note;
    return r;
  }

  static CheckRow flag(const std::string& name, bool ok, const std::string& source,
                       const std::string& note = "") {
    CheckRow r;
    r.name = name;
    r.measured = ok ? 1 : 0;
    r.bound = 1;
    r.ratio = r.measured;
    r.pass = ok;
    r.source = source;
    r.note = note;
    return r;
  }
};

struct ExperimentReport {
  std::string tool = "paley";
  std::string version = "0.1.0";
  ordered_json config = ordered_json::object();
  std::vector<CheckRow> checks;
  std::map<std::string, double> constants;  // ordered keys keep output stable
  std::vector<std::string> series_files;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  void add(const CheckRow& row) { checks.push_back(row); }

  ordered_json to_json() const {
    ordered_json j;
    j["tool"] = tool;
    j["version"] = version;
    j["config"] = config;
    j["all_pass"] = all_pass();
    ordered_json rows = ordered_json::array();
    for (const auto& c : checks) {
      ordered_json r;
      r["name"] = c.name;
      r["measured"] = c.measured;
      r["bound"] = c.bound;
      r["ratio"] = c.ratio;
      r["pass"] = c.pass;
      r["source"] = c.source;
      if (!c.note.empty()) r["note"] = c.note;
      rows.push_back(std::move(r));
    }
    j["checks"] = std::move(rows);
    j["constants"] = constants;
    j["series_files"] = series_files;
    return j;
  }

  static ExperimentReport from_json(const ordered_json& j) {
    ExperimentReport rep;
    rep.tool = j.value("tool", "paley");
    rep.version = j.value("version", "");
    rep.config = j.value("config", ordered_json::object());
    for (const auto& r : j.value("checks", ordered_json::array())) {
      CheckRow c;
      c.name = r.value("name", "");
      c.measured = r.value("measured", 0.0);
      c.bound = r.value("bound", 0.0);
      c.ratio = r.value("ratio", 0.0);
      c.pass = r.value("pass", false);
      c.source = r.value("source", "");
      c.note = r.value("note", "");
      rep.checks.push_back(std::move(c));
    }
    if (j.contains("constants"))
      for (auto it = j["constants"].begin(); it != j["constants"].end(); ++it)
        rep.constants[it.key()] = it.value().get<double>();
    for (const auto& s : j.value("series_files", ordered_json::array()))
      rep.series_files.push_back(s.get<std::string>());
    return rep;
  }
};

inline void write_report(const std::string& path, const ExperimentReport& rep) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("report: cannot open " + path);
  out << rep.to_json().dump(2) << "\n";
}

inline ExperimentReport read_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("report: cannot open " + path);
  ordered_json j;
  in >> j;
  return ExperimentReport::from_json(j);
}

// Minimal CSV emitter; numbers are written with round-trip precision.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header)
      : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("csv: cannot open " + path);
    for (std::size_t i = 0; i < header.size(); ++i)
      out_ << (i ? "," : "") << header[i];
    out_ << "\n";
    cols_ = header.size();
  }

  void row(const std::vector<double>& values) {
    if (values.size() != cols_) throw std::invalid_argument("csv: column count mismatch");
    char buf[32];
    for (std::size_t i = 0; i < values.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", values[i]);
      out_ << (i ? "," : "") << buf;
    }
    out_ << "\n";
  }

 private:
  std::ofstream out_;
  std::size_t cols_ = 0;
};

}  // namespace paley
