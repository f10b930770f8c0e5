#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "entscale/linalg/types.hpp"

namespace entscale {

/// Piecewise-constant real function on (0, 2pi]. Value `values[r]` holds on
/// (breakpoints[r], breakpoints[r+1]]; breakpoints run from 0 to 2pi.
class PiecewiseSymbol {
 public:
  PiecewiseSymbol(std::vector<double> breakpoints, std::vector<double> values)
      : breaks_(std::move(breakpoints)), values_(std::move(values)) {
    if (breaks_.size() < 2 || values_.size() + 1 != breaks_.size())
      throw PreconditionError("PiecewiseSymbol: need R+1 breakpoints for R values");
    if (breaks_.front() != 0.0) throw PreconditionError("PiecewiseSymbol: first breakpoint must be 0");
    if (std::abs(breaks_.back() - kTwoPi) > 1e-12)
      throw PreconditionError("PiecewiseSymbol: last breakpoint must be 2*pi");
    breaks_.back() = kTwoPi;
    for (std::size_t r = 1; r < breaks_.size(); ++r)
      if (!(breaks_[r] > breaks_[r - 1])) throw PreconditionError("PiecewiseSymbol: breakpoints must increase strictly");
    for (double v : values_)
      if (!std::isfinite(v)) throw PreconditionError("PiecewiseSymbol: non-finite value");
  }

  /// Convenience for (upper breakpoint, value) pairs as stored in symbol files.
  static PiecewiseSymbol from_pairs(const std::vector<std::pair<double, double>>& pairs) {
    std::vector<double> b{0.0};
    std::vector<double> v;
    for (const auto& [x, y] : pairs) {
      b.push_back(x);
      v.push_back(y);
    }
    return PiecewiseSymbol(std::move(b), std::move(v));
  }

  static PiecewiseSymbol constant(double value) { return PiecewiseSymbol({0.0, kTwoPi}, {value}); }

  const std::vector<double>& breakpoints() const noexcept { return breaks_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t pieces() const noexcept { return values_.size(); }

  /// Evaluates at x, reduced into (0, 2pi].
  double operator()(double x) const {
    double y = std::fmod(x, kTwoPi);
    if (y <= 0.0) y += kTwoPi;
    const auto it = std::lower_bound(breaks_.begin() + 1, breaks_.end(), y);
    const auto r = static_cast<std::size_t>(std::distance(breaks_.begin() + 1, std::min(it, breaks_.end() - 1)));
    return values_[r];
  }

  PiecewiseSymbol sign() const {
    std::vector<double> s(values_.size());
    std::transform(values_.begin(), values_.end(), s.begin(),
                   [](double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); });
    return PiecewiseSymbol(breaks_, std::move(s));
  }

  /// Interior breakpoints where the value actually changes.
  std::vector<double> jump_points() const {
    std::vector<double> j;
    for (std::size_t r = 1; r < values_.size(); ++r)
      if (values_[r] != values_[r - 1]) j.push_back(breaks_[r]);
    return j;
  }

  bool gapped() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v != 0.0; });
  }

  friend bool operator==(const PiecewiseSymbol&, const PiecewiseSymbol&) = default;

 private:
  std::vector<double> breaks_;
  std::vector<double> values_;
};

namespace linalg {

class QuadratureSpec {
 public:
  QuadratureSpec(std::vector<double> breakpoints, int nodes_per_subinterval, double tolerance)
      : breaks_(std::move(breakpoints)), nodes_(nodes_per_subinterval), tol_(tolerance) {
    if (breaks_.empty()) throw PreconditionError("QuadratureSpec: at least one breakpoint required");
    for (std::size_t i = 0; i < breaks_.size(); ++i) {
      if (!(breaks_[i] > 0.0) || breaks_[i] > kTwoPi + 1e-12)
        throw PreconditionError("QuadratureSpec: breakpoints must lie in (0, 2pi]");
      if (i > 0 && !(breaks_[i] > breaks_[i - 1]))
        throw PreconditionError("QuadratureSpec: breakpoints must increase strictly");
    }
    if (nodes_ < 1) throw PreconditionError("QuadratureSpec: nodes per subinterval must be positive");
    if (!(tol_ > 0.0)) throw PreconditionError("QuadratureSpec: tolerance must be positive");
    if (std::abs(breaks_.back() - kTwoPi) <= 1e-12) breaks_.back() = kTwoPi;
    else breaks_.push_back(kTwoPi);
  }

  /// Breakpoints of f itself, which always satisfies the jump-point precondition.
  static QuadratureSpec for_symbol(const PiecewiseSymbol& f, int nodes = 1, double tolerance = 1e-14) {
    return QuadratureSpec(std::vector<double>(f.breakpoints().begin() + 1, f.breakpoints().end()), nodes, tolerance);
  }

  const std::vector<double>& breakpoints() const noexcept { return breaks_; }
  int nodes_per_subinterval() const noexcept { return nodes_; }
  double tolerance() const noexcept { return tol_; }

 private:
  std::vector<double> breaks_;  // always ends at 2pi
  int nodes_;
  double tol_;
};

/// (1/2pi) * integral over (0, 2pi] of e^{-ilx} g(x) dx for piecewise-constant g,
/// integrated in closed form on every subinterval of `q`.
inline cplx fourier_coefficient(const PiecewiseSymbol& g, long l, const QuadratureSpec& q) {
  for (double jump : g.jump_points()) {
    const bool found = std::any_of(q.breakpoints().begin(), q.breakpoints().end(),
                                   [jump](double b) { return std::abs(b - jump) <= 1e-14 * kTwoPi; });
    if (!found) throw PreconditionError("fourier_coefficient: quadrature breakpoints miss a jump of the symbol");
  }
  if (l < 0) return std::conj(fourier_coefficient(g, -l, q));

  cplx sum = 0.0;
  double a = 0.0;
  for (double b : q.breakpoints()) {
    const double value = g(0.5 * (a + b));
    if (l == 0) {
      sum += value * (b - a);
    } else {
      // integral_a^b e^{-ilx} dx = (2/l) sin(l(b-a)/2) e^{-il(a+b)/2}
      const double ld = static_cast<double>(l);
      sum += value * (2.0 / ld) * std::sin(0.5 * ld * (b - a)) * std::polar(1.0, -0.5 * ld * (a + b));
    }
    a = b;
  }
  return sum / kTwoPi;
}

inline cplx fourier_coefficient(const PiecewiseSymbol& g, long l) {
  return fourier_coefficient(g, l, QuadratureSpec::for_symbol(g));
}

}  // namespace linalg
}  // namespace entscale
