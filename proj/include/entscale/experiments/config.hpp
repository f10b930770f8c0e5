#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "entscale/experiments/model_file.hpp"
#include "entscale/spin/state.hpp"

namespace entscale::experiments {

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"quench",     "w-hierarchy",     "lightcone",  "kcheck",
                                              "quasilocal", "fermion-scaling", "ring-check", "property-suite"};
  return names;
}

inline bool is_fermion_experiment(const std::string& e) { return e == "fermion-scaling" || e == "ring-check"; }

/// One `key = value` setting and where it came from. line == 0 marks a command-line flag.
struct Setting {
  std::string key;
  std::string value;
  int line = 0;
  int column = 0;
  std::string origin;  // config path or "command line"
};

inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{"experiment", "model", "symbol", "preset", "n",      "t_grid", "m_list",
                                             "k_list",     "n_list", "site",  "l_max",  "trials", "seed",   "out"};
  return keys;
}

inline std::vector<Setting> parse_config_text(const std::string& text, const std::string& origin = "config") {
  std::vector<Setting> out;
  int ln = 0;
  for (const std::string& raw : split_lines(text)) {
    ++ln;
    const std::string_view body = strip_comment(raw);
    if (trim(body).empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", ln, 1);
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    const int key_col = static_cast<int>(body.find_first_not_of(" \t")) + 1;
    const auto vpos = body.find_first_not_of(" \t", eq + 1);
    const int val_col = static_cast<int>(vpos == std::string_view::npos ? eq + 1 : vpos) + 1;
    const auto& keys = config_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw ConfigError("unknown key '" + key + "'", ln, key_col);
    if (value.empty()) throw ConfigError("empty value for '" + key + "'", ln, val_col);
    out.push_back({key, value, ln, val_col, origin});
  }
  return out;
}

struct ExperimentConfig {
  std::string experiment;
  std::string model = "xy_cross";  // spin preset name or model file path
  std::string symbol = "paper";    // symbol preset name or symbol file path
  int n = 10;
  std::vector<double> t_grid;
  std::vector<long> m_list;
  std::vector<long> k_list;
  std::vector<long> n_list;
  int site = -1;
  int l_max = -1;
  long trials = 100;
  std::uint64_t seed = 0;
  std::string out;
  std::vector<std::pair<std::string, std::string>> echo;  // resolved settings, key order
};

namespace detail {

[[noreturn]] inline void bad(const Setting& s, const std::string& what) {
  if (s.line > 0) throw ConfigError(s.key + ": " + what, s.line, s.column);
  std::string flag = s.key;
  std::replace(flag.begin(), flag.end(), '_', '-');
  throw ConfigError("--" + flag + ": " + what);
}

inline std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> items;
  std::string cur;
  for (char c : v) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) items.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) items.push_back(cur);
  return items;
}

/// `a:b:steps` (inclusive, evenly spaced) or a list of reals.
inline std::vector<double> parse_real_grid(const Setting& s) {
  std::vector<double> out;
  const auto c1 = s.value.find(':');
  if (c1 != std::string::npos) {
    const auto c2 = s.value.find(':', c1 + 1);
    if (c2 == std::string::npos) bad(s, "expected a:b:steps");
    double a = 0, b = 0;
    long steps = 0;
    if (!parse_real(s.value.substr(0, c1), a) || !parse_real(s.value.substr(c1 + 1, c2 - c1 - 1), b) ||
        !parse_integer(s.value.substr(c2 + 1), steps))
      bad(s, "expected a:b:steps, got '" + s.value + "'");
    if (steps < 1 || steps > 100000) bad(s, "steps must lie in [1, 100000]");
    if (steps == 1) return {a};
    for (long i = 0; i < steps; ++i)
      out.push_back(i + 1 == steps ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(steps - 1));
    return out;
  }
  for (const auto& item : split_list(s.value)) {
    double x = 0;
    if (!parse_real(item, x)) bad(s, "invalid number '" + item + "'");
    out.push_back(x);
  }
  if (out.empty()) bad(s, "empty grid");
  return out;
}

/// Comma list of integers, `a..b` ranges (step 1) and `a..b*f` geometric ranges.
inline std::vector<long> parse_int_grid(const Setting& s) {
  std::vector<long> out;
  for (const auto& item : split_list(s.value)) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      long v = 0;
      if (!parse_integer(item, v)) bad(s, "invalid integer '" + item + "'");
      out.push_back(v);
      continue;
    }
    std::string hi_text = item.substr(dots + 2);
    long factor = 0;
    const auto star = hi_text.find('*');
    if (star != std::string::npos) {
      if (!parse_integer(hi_text.substr(star + 1), factor) || factor < 2) bad(s, "geometric factor must be >= 2");
      hi_text = hi_text.substr(0, star);
    }
    long lo = 0, hi = 0;
    if (!parse_integer(item.substr(0, dots), lo) || !parse_integer(hi_text, hi) || hi < lo)
      bad(s, "invalid range '" + item + "'");
    if (factor == 0 && hi - lo > 100000) bad(s, "range '" + item + "' too long");
    if (factor > 0 && lo < 1) bad(s, "geometric range must start at 1 or above");
    for (long v = lo; v <= hi; v = factor ? v * factor : v + 1) out.push_back(v);
  }
  if (out.empty()) bad(s, "empty list");
  return out;
}

inline long parse_int(const Setting& s) {
  long v = 0;
  if (!parse_integer(s.value, v)) bad(s, "expected an integer, got '" + s.value + "'");
  return v;
}

inline void check_range(const Setting* s, const std::string& key, long v, long lo, long hi) {
  if (v >= lo && v <= hi) return;
  const std::string what = "value " + std::to_string(v) + " outside supported range [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]";
  if (s) bad(*s, what);
  throw ConfigError(key + ": " + what);
}

inline std::string join(const std::vector<long>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

inline std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_number(v[i]);
  return s;
}

}  // namespace detail

/// Maximum |t| accepted by every time grid.
inline constexpr double kMaxTime = 1000.0;

/// Merges settings (later entries win), applies per-experiment defaults and checks
/// every grid against the supported ranges before any computation.
inline ExperimentConfig resolve_config(const std::string& experiment, const std::vector<Setting>& settings) {
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), experiment) == names.end())
    throw ConfigError("unknown experiment '" + experiment + "'");

  std::map<std::string, Setting> last;
  for (const auto& s : settings) {
    if (s.key == "experiment" && s.value != experiment)
      detail::bad(s, "config is for '" + s.value + "' but '" + experiment + "' was requested");
    last[s.key] = s;
  }
  const auto get = [&](const std::string& k) -> const Setting* {
    const auto it = last.find(k);
    return it == last.end() ? nullptr : &it->second;
  };
  const auto resolve_path = [](const Setting& s) {
    namespace fs = std::filesystem;
    if (s.line == 0 || fs::path(s.value).is_absolute()) return s.value;
    return (fs::path(s.origin).parent_path() / s.value).string();
  };

  ExperimentConfig c;
  c.experiment = experiment;
  const bool fermionic = is_fermion_experiment(experiment);

  if (const Setting* s = get("preset")) {
    if (fermionic) {
      if (!detail::is_symbol_preset(s->value)) detail::bad(*s, "unknown symbol preset '" + s->value + "'");
      c.symbol = s->value;
    } else {
      if (!detail::is_spin_preset(s->value)) detail::bad(*s, "unknown model preset '" + s->value + "'");
      c.model = s->value;
    }
  }
  if (const Setting* s = get("model")) c.model = detail::is_spin_preset(s->value) ? s->value : resolve_path(*s);
  if (const Setting* s = get("symbol")) c.symbol = detail::is_symbol_preset(s->value) ? s->value : resolve_path(*s);

  // The chain length of a model file wins over the default; an explicit n must agree.
  std::optional<ModelSpec> file_model;
  if (!fermionic && experiment != "property-suite" && !detail::is_spin_preset(c.model)) {
    file_model = parse_model_text(read_file(c.model));
    c.n = file_model->n;
  }
  if (const Setting* s = get("n")) {
    const long v = detail::parse_int(*s);
    if (file_model && v != file_model->n) detail::bad(*s, "model file sets n = " + std::to_string(file_model->n));
    c.n = static_cast<int>(v);
  }
  const bool dense_only = experiment == "w-hierarchy" || experiment == "lightcone" || experiment == "kcheck" ||
                          experiment == "quasilocal";
  if (!fermionic && experiment != "property-suite")
    detail::check_range(get("n"), "n", c.n, spin::kMinSites, dense_only ? 12 : spin::kMaxSites);

  if (const Setting* s = get("t_grid")) c.t_grid = detail::parse_real_grid(*s);
  if (const Setting* s = get("m_list")) c.m_list = detail::parse_int_grid(*s);
  if (const Setting* s = get("k_list")) c.k_list = detail::parse_int_grid(*s);
  if (const Setting* s = get("n_list")) c.n_list = detail::parse_int_grid(*s);
  if (const Setting* s = get("site")) c.site = static_cast<int>(detail::parse_int(*s));
  if (const Setting* s = get("l_max")) c.l_max = static_cast<int>(detail::parse_int(*s));
  if (const Setting* s = get("trials")) c.trials = detail::parse_int(*s);
  if (const Setting* s = get("seed")) {
    const long v = detail::parse_int(*s);
    if (v < 0) detail::bad(*s, "seed must be nonnegative");
    c.seed = static_cast<std::uint64_t>(v);
  }
  c.out = get("out") ? get("out")->value : experiment + ".csv";

  // Defaults.
  const int n = c.n;
  if (c.t_grid.empty()) {
    if (experiment == "quench" || experiment == "lightcone") c.t_grid = detail::parse_real_grid({"t_grid", "0:2:9"});
    else if (experiment == "kcheck") c.t_grid = detail::parse_real_grid({"t_grid", "0:1:5"});
    else c.t_grid = {0.5};
  }
  if (c.m_list.empty()) {
    if (experiment == "quench") for (long m = 1; m < n; ++m) c.m_list.push_back(m);
    else if (experiment == "w-hierarchy") c.m_list = {n / 2};
    else if (experiment == "fermion-scaling") c.m_list = {8, 16, 32, 64, 128, 256, 512};
    else if (experiment == "ring-check") c.m_list = {16};
  }
  if (c.k_list.empty() && experiment == "quasilocal") c.k_list = {1, 2, 3, 4};
  if (c.n_list.empty() && experiment == "ring-check") c.n_list = {256, 1024, 4096};
  if (c.site < 0 && (experiment == "lightcone" || experiment == "quasilocal")) c.site = n / 2;

  // Range checks.
  for (double t : c.t_grid)
    if (!(std::abs(t) <= kMaxTime)) {
      const std::string what = "time " + format_number(t) + " outside supported range [-1000, 1000]";
      if (const Setting* s = get("t_grid")) detail::bad(*s, what);
      throw ConfigError(what);
    }
  if (experiment == "quench")
    for (long m : c.m_list) detail::check_range(get("m_list"), "m_list", m, 1, n - 1);
  if (experiment == "w-hierarchy") {
    if (c.t_grid.size() != 1) detail::bad(get("t_grid") ? *get("t_grid") : Setting{"t_grid"}, "w-hierarchy takes a single time");
    if (c.m_list.size() != 1) detail::bad(*get("m_list"), "w-hierarchy takes a single cut");
    detail::check_range(get("m_list"), "m_list", c.m_list[0], 1, n - 1);
    const int cover = spin::CutPartition(n, static_cast<int>(c.m_list[0])).covering_distance();
    if (c.l_max < 0) c.l_max = cover;
    detail::check_range(get("l_max"), "l_max", c.l_max, 1, cover);
  }
  if (experiment == "lightcone" || experiment == "quasilocal") detail::check_range(get("site"), "site", c.site, 0, n - 1);
  if (experiment == "quasilocal")
    for (long k : c.k_list) detail::check_range(get("k_list"), "k_list", k, 0, n);
  if (experiment == "fermion-scaling") {
    for (long m : c.m_list) detail::check_range(get("m_list"), "m_list", m, 1, 1024);
    std::vector<long> u = c.m_list;
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    if (u.size() < 6) detail::bad(get("m_list") ? *get("m_list") : Setting{"m_list"}, "need at least 6 distinct block sizes");
  }
  if (experiment == "ring-check") {
    for (long m : c.m_list) detail::check_range(get("m_list"), "m_list", m, 1, 1024);
    const long m_max = *std::max_element(c.m_list.begin(), c.m_list.end());
    for (long r : c.n_list) detail::check_range(get("n_list"), "n_list", r, 4 * m_max, 16384);
  }
  if (experiment == "property-suite") detail::check_range(get("trials"), "trials", c.trials, 1, 10000);

  // Echo: only what the experiment actually uses.
  c.echo.emplace_back("experiment", experiment);
  if (experiment == "property-suite") {
    c.echo.emplace_back("trials", std::to_string(c.trials));
  } else if (fermionic) {
    c.echo.emplace_back("symbol", c.symbol);
    c.echo.emplace_back("m_list", detail::join(c.m_list));
    if (experiment == "ring-check") c.echo.emplace_back("n_list", detail::join(c.n_list));
  } else {
    c.echo.emplace_back("model", c.model);
    c.echo.emplace_back("n", std::to_string(c.n));
    c.echo.emplace_back("t_grid", detail::join(c.t_grid));
    if (!c.m_list.empty()) c.echo.emplace_back("m_list", detail::join(c.m_list));
    if (!c.k_list.empty()) c.echo.emplace_back("k_list", detail::join(c.k_list));
    if (c.site >= 0) c.echo.emplace_back("site", std::to_string(c.site));
    if (c.l_max >= 0) c.echo.emplace_back("l_max", std::to_string(c.l_max));
  }
  c.echo.emplace_back("seed", std::to_string(c.seed));
  return c;
}

}  // namespace entscale::experiments
