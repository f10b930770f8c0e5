#pragma once

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "entscale/experiments/text.hpp"
#include "entscale/fermion/symbol.hpp"
#include "entscale/spin/hamiltonian.hpp"

namespace entscale::experiments {

/// Contents of a model file:
///
///   n = 8
///   boundary = open
///   preset = xy_cross       # optional, expanded before the explicit terms
///   0.5 Z I 3               # coeff PAULI_LEFT PAULI_RIGHT site
struct ModelSpec {
  int n = 0;
  std::string boundary = "open";
  std::optional<std::string> preset;
  std::vector<spin::PauliTerm> terms;

  spin::LocalHamiltonian hamiltonian() const {
    std::vector<spin::PauliTerm> all;
    if (preset) all = spin::preset_terms(*preset, n);
    all.insert(all.end(), terms.begin(), terms.end());
    return spin::from_pauli_terms(n, all);
  }

  friend bool operator==(const ModelSpec& a, const ModelSpec& b) {
    if (a.n != b.n || a.boundary != b.boundary || a.preset != b.preset || a.terms.size() != b.terms.size()) return false;
    for (std::size_t i = 0; i < a.terms.size(); ++i) {
      const auto &x = a.terms[i], &y = b.terms[i];
      if (x.coeff != y.coeff || x.left != y.left || x.right != y.right || x.site != y.site) return false;
    }
    return true;
  }
};

namespace detail {

inline bool is_assignment(const std::vector<Token>& tok) { return tok.size() >= 2 && tok[1].text == "="; }

inline std::string assignment_value(const std::vector<Token>& tok, int line) {
  if (tok.size() != 3) throw ConfigError("expected 'key = value'", line, tok.front().column);
  return tok[2].text;
}

inline bool is_spin_preset(const std::string& s) {
  const auto names = spin::preset_names();
  return std::find(names.begin(), names.end(), s) != names.end();
}

inline bool is_symbol_preset(const std::string& s) {
  const auto names = fermion::symbol_preset_names();
  return std::find(names.begin(), names.end(), s) != names.end();
}

}  // namespace detail

inline ModelSpec parse_model_text(const std::string& text) {
  ModelSpec spec;
  bool have_n = false;
  struct PendingTerm {
    spin::PauliTerm term;
    int line, column;
  };
  std::vector<PendingTerm> pending;
  int ln = 0;
  for (const std::string& raw : split_lines(text)) {
    ++ln;
    const auto tok = tokenize(strip_comment(raw));
    if (tok.empty()) continue;
    if (detail::is_assignment(tok)) {
      const std::string& key = tok[0].text;
      const std::string value = detail::assignment_value(tok, ln);
      if (key == "n") {
        long v = 0;
        if (!parse_integer(value, v)) throw ConfigError("n must be an integer, got '" + value + "'", ln, tok[2].column);
        if (v < spin::kMinSites || v > spin::kMaxSites)
          throw ConfigError("n = " + value + " outside supported range [2, 16]", ln, tok[2].column);
        spec.n = static_cast<int>(v);
        have_n = true;
      } else if (key == "boundary") {
        if (value != "open") throw ConfigError("unsupported boundary '" + value + "' (only open)", ln, tok[2].column);
        spec.boundary = value;
      } else if (key == "preset") {
        if (!detail::is_spin_preset(value)) throw ConfigError("unknown preset '" + value + "'", ln, tok[2].column);
        spec.preset = value;
      } else {
        throw ConfigError("unknown key '" + key + "'", ln, tok[0].column);
      }
      continue;
    }
    if (tok.size() != 4) throw ConfigError("expected 'coeff PAULI_LEFT PAULI_RIGHT site'", ln, tok.front().column);
    PendingTerm p{{}, ln, tok[0].column};
    if (!parse_real(tok[0].text, p.term.coeff))
      throw ConfigError("invalid coefficient '" + tok[0].text + "'", ln, tok[0].column);
    for (int i : {1, 2}) {
      const std::string& label = tok[static_cast<std::size_t>(i)].text;
      const auto pauli = label.size() == 1 ? spin::parse_pauli(label[0]) : std::nullopt;
      if (!pauli)
        throw ConfigError("invalid Pauli label '" + label + "' (expected I, X, Y or Z)",
                          ln, tok[static_cast<std::size_t>(i)].column);
      (i == 1 ? p.term.left : p.term.right) = *pauli;
    }
    long site = 0;
    if (!parse_integer(tok[3].text, site)) throw ConfigError("invalid site index '" + tok[3].text + "'", ln, tok[3].column);
    p.term.site = static_cast<int>(site);
    p.column = tok[3].column;
    pending.push_back(p);
  }
  if (!have_n) throw ConfigError("model file does not set n");
  for (const auto& p : pending) {
    if (p.term.site < 0 || p.term.site > spec.n - 2)
      throw ConfigError("site " + std::to_string(p.term.site) + " out of range [0, n-2]", p.line, p.column);
    spec.terms.push_back(p.term);
  }
  if (!spec.preset && spec.terms.empty()) throw ConfigError("model file defines no terms");
  return spec;
}

inline std::string serialize(const ModelSpec& spec) {
  std::ostringstream os;
  os << "n = " << spec.n << "\n";
  os << "boundary = " << spec.boundary << "\n";
  if (spec.preset) os << "preset = " << *spec.preset << "\n";
  for (const auto& t : spec.terms)
    os << format_number(t.coeff) << ' ' << spin::pauli_label(t.left) << ' ' << spin::pauli_label(t.right) << ' '
       << t.site << "\n";
  return os.str();
}

/// Symbol file: one `breakpoint value` pair per line, the value holding up to and
/// including the breakpoint; the last breakpoint must be 2pi. Breakpoints accept
/// multiples of pi (`pi/2`, `3pi/2`, `2pi`). A lone `preset = paper` line is also accepted.
inline PiecewiseSymbol parse_symbol_text(const std::string& text) {
  std::vector<std::pair<double, double>> pairs;
  std::optional<PiecewiseSymbol> preset;
  int ln = 0, last_line = 0;
  for (const std::string& raw : split_lines(text)) {
    ++ln;
    const auto tok = tokenize(strip_comment(raw));
    if (tok.empty()) continue;
    if (detail::is_assignment(tok)) {
      const std::string value = detail::assignment_value(tok, ln);
      if (tok[0].text != "preset") throw ConfigError("unknown key '" + tok[0].text + "'", ln, tok[0].column);
      if (!detail::is_symbol_preset(value)) throw ConfigError("unknown symbol preset '" + value + "'", ln, tok[2].column);
      preset = fermion::symbol_preset(value);
      continue;
    }
    if (tok.size() != 2) throw ConfigError("expected 'breakpoint value'", ln, tok.front().column);
    double x = 0, v = 0;
    if (!parse_real(tok[0].text, x)) throw ConfigError("invalid breakpoint '" + tok[0].text + "'", ln, tok[0].column);
    if (!parse_real(tok[1].text, v)) throw ConfigError("invalid value '" + tok[1].text + "'", ln, tok[1].column);
    if (!(x > 0.0) || x > kTwoPi + 1e-12) throw ConfigError("breakpoint outside (0, 2pi]", ln, tok[0].column);
    if (!pairs.empty() && !(x > pairs.back().first))
      throw ConfigError("breakpoints must increase strictly", ln, tok[0].column);
    if (v == 0.0) throw ConfigError("symbol value must be nonzero (gapped symbol)", ln, tok[1].column);
    pairs.emplace_back(x, v);
    last_line = ln;
  }
  if (preset) {
    if (!pairs.empty()) throw ConfigError("symbol file mixes a preset with explicit pieces");
    return *preset;
  }
  if (pairs.empty()) throw ConfigError("symbol file defines no pieces");
  if (std::abs(pairs.back().first - kTwoPi) > 1e-12) throw ConfigError("last breakpoint must be 2pi", last_line, 1);
  return PiecewiseSymbol::from_pairs(pairs);
}

inline std::string serialize(const PiecewiseSymbol& phi) {
  std::ostringstream os;
  const auto& b = phi.breakpoints();
  for (std::size_t r = 0; r < phi.pieces(); ++r)
    os << format_number(b[r + 1]) << ' ' << format_number(phi.values()[r]) << "\n";
  return os.str();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

using ParsedModel = std::variant<spin::LocalHamiltonian, PiecewiseSymbol>;

/// Classifies by the first meaningful line: a spin key or four-token term line
/// means a model file, a two-token pair or symbol preset means a symbol file.
inline bool looks_like_symbol(const std::string& text) {
  for (const std::string& raw : split_lines(text)) {
    const auto tok = tokenize(strip_comment(raw));
    if (tok.empty()) continue;
    if (detail::is_assignment(tok))
      return tok[0].text == "preset" && tok.size() == 3 && detail::is_symbol_preset(tok[2].text);
    return tok.size() == 2;
  }
  return false;
}

inline ParsedModel parse_model(const std::string& path) {
  const std::string text = read_file(path);
  if (looks_like_symbol(text)) return parse_symbol_text(text);
  return parse_model_text(text).hamiltonian();
}

}  // namespace entscale::experiments
