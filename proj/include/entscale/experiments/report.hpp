#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "entscale/experiments/config.hpp"
#include "entscale/version.hpp"

namespace entscale::experiments {

/// Documented CSV header per experiment.
inline std::string csv_schema(const std::string& experiment) {
  if (experiment == "quench") return "t,m,S,sMax,effRank";
  if (experiment == "w-hierarchy") return "l,wDeviation,lrBound";
  if (experiment == "lightcone") return "t,d,commNorm";
  if (experiment == "kcheck") return "t,spectrumMaxDiff,groundFidelity,firstOrderResidual";
  if (experiment == "quasilocal") return "t,k,truncNorm";
  if (experiment == "fermion-scaling") return "m,S_exact,D_det,logAbsDet";
  if (experiment == "ring-check") return "n,m,maxDeviation";
  if (experiment == "property-suite") return "property,trials,violations,worst";
  throw ConfigError("unknown experiment '" + experiment + "'");
}

class CsvRow {
 public:
  template <class T>
  CsvRow& operator<<(const T& v) {
    if (!line_.empty()) line_ += ',';
    if constexpr (std::is_convertible_v<T, std::string>) line_ += std::string(v);
    else line_ += format_number(v);
    return *this;
  }
  const std::string& str() const noexcept { return line_; }

 private:
  std::string line_;
};

struct Report {
  std::string experiment;
  std::vector<std::string> rows;
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();

  void add(const CsvRow& r) { rows.push_back(r.str()); }
};

/// Comment header, schema line and rows. Contains nothing run-dependent, so equal
/// configs give byte-identical files.
inline std::string csv_text(const ExperimentConfig& c, const Report& r) {
  std::string s = std::string("# entscale ") + kVersion + "\n";
  for (const auto& [k, v] : c.echo) s += "# " + k + " = " + v + "\n";
  s += csv_schema(c.experiment) + "\n";
  for (const auto& row : r.rows) s += row + "\n";
  return s;
}

inline nlohmann::ordered_json envelope(const ExperimentConfig& c, const Report& r, double wall_seconds) {
  nlohmann::ordered_json j;
  j["tool"] = "entscale";
  j["version"] = kVersion;
  j["experiment"] = c.experiment;
  j["seed"] = c.seed;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : c.echo) cfg[k] = v;
  j["config"] = cfg;
  j["wall_time_seconds"] = wall_seconds;
  j["csv"] = std::filesystem::path(c.out).filename().string();
  j["schema"] = csv_schema(c.experiment);
  j["rows"] = r.rows.size();
  j["summary"] = r.summary;
  return j;
}

namespace detail {

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write '" + path + "'");
  f << text;
  f.close();
  if (!f) throw Error("write to '" + path + "' failed");
}

}  // namespace detail

/// Writes `out` (CSV) and `out.json` (envelope) through temporaries renamed into
/// place; on failure neither a temporary nor a half-written output survives.
inline void write_report(const ExperimentConfig& c, const Report& r, double wall_seconds) {
  namespace fs = std::filesystem;
  const std::string csv = c.out, json = c.out + ".json";
  const std::string csv_tmp = csv + ".tmp", json_tmp = json + ".tmp";
  try {
    if (const fs::path dir = fs::path(csv).parent_path(); !dir.empty()) fs::create_directories(dir);
    detail::write_text(csv_tmp, csv_text(c, r));
    detail::write_text(json_tmp, envelope(c, r, wall_seconds).dump(2) + "\n");
    fs::rename(csv_tmp, csv);
    fs::rename(json_tmp, json);
  } catch (...) {
    std::error_code ec;
    fs::remove(csv_tmp, ec);
    fs::remove(json_tmp, ec);
    fs::remove(csv, ec);
    fs::remove(json, ec);
    throw;
  }
}

}  // namespace entscale::experiments
