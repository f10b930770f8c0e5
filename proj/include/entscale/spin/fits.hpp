#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "entscale/fit.hpp"
#include "entscale/spin/quench.hpp"

namespace entscale::spin {

/// Coefficients at or below this are excluded from tail fits (squared roundoff floor).
inline constexpr double kTailFloor = 1e-20;

struct TailFit {
  double t = 0.0;
  bool valid = false;  // false: rank deficient or too few tail points
  int knee = 0;        // first j with s_j < s_0 / 10
  int points = 0;
  double v = 0.0;           // -slope of log2 s_j in j
  double intercept = 0.0;   // log2 s_j at j = 0 of the tail line
  double kappa = std::numeric_limits<double>::quiet_NaN();  // intercept / |t|
  double r_squared = 0.0;
};

struct TailFitReport {
  std::vector<TailFit> per_time;
  bool pooled_valid = false;
  double kappa = std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  double r_squared = 0.0;
};

inline TailFit fit_schmidt_tail(double t, const SchmidtSpectrum& s) {
  TailFit f;
  f.t = t;
  const auto& c = s.coefficients;
  if (c.empty() || !(c[0] > 0.0)) return f;
  const auto knee = std::find_if(c.begin(), c.end(), [&](double x) { return x < c[0] / 10.0; });
  f.knee = static_cast<int>(knee - c.begin());
  std::vector<double> j, y;
  for (auto it = knee; it != c.end(); ++it)
    if (*it > kTailFloor) {
      j.push_back(static_cast<double>(it - c.begin()));
      y.push_back(std::log2(*it));
    }
  f.points = static_cast<int>(j.size());
  if (j.size() < 3) return f;
  const fit::Line line = fit::line(j, y);
  f.valid = true;
  f.v = -line.slope;
  f.intercept = line.intercept;
  if (t != 0.0) f.kappa = line.intercept / std::abs(t);
  f.r_squared = line.r_squared;
  return f;
}

/// Fits log2 s_j ~ kappa|t| - v j on the tail of each spectrum, then jointly.
inline TailFitReport schmidt_tail_fit(const std::vector<std::pair<double, SchmidtSpectrum>>& spectra) {
  if (spectra.size() < 3) throw PreconditionError("schmidt_tail_fit: need spectra at three or more times");
  TailFitReport rep;
  std::vector<double> rows_t, rows_j, rows_y;
  for (const auto& [t, s] : spectra) {
    if (s.coefficients.size() < 8) throw PreconditionError("schmidt_tail_fit: need at least 8 coefficients per spectrum");
    const TailFit f = fit_schmidt_tail(t, s);
    rep.per_time.push_back(f);
    if (!f.valid || t == 0.0) continue;
    for (std::size_t j = static_cast<std::size_t>(f.knee); j < s.coefficients.size(); ++j)
      if (s.coefficients[j] > kTailFloor) {
        rows_t.push_back(std::abs(t));
        rows_j.push_back(static_cast<double>(j));
        rows_y.push_back(std::log2(s.coefficients[j]));
      }
  }
  if (rows_y.size() >= 3) {
    RMatrix a(static_cast<Index>(rows_y.size()), 2);
    RVector y(static_cast<Index>(rows_y.size()));
    for (std::size_t i = 0; i < rows_y.size(); ++i) {
      a(static_cast<Index>(i), 0) = rows_t[i];
      a(static_cast<Index>(i), 1) = -rows_j[i];
      y(static_cast<Index>(i)) = rows_y[i];
    }
    const fit::LinearFit f = fit::least_squares(a, y);
    rep.pooled_valid = true;
    rep.kappa = f.coefficients[0];
    rep.v = f.coefficients[1];
    rep.r_squared = f.r_squared;
  }
  return rep;
}

struct EnvelopeFit {
  double c0 = 0.0;
  double c1 = 0.0;
  double r_squared = 0.0;
  double max_excess = 0.0;  // max_i (S_i - c0 - c1|t_i|), clipped at 0
  int points = 0;
};

/// Least-squares line c0 + c1|t| through the running maximum of S(|t|) at fixed m.
/// Requires |t| <= n / (4 hNorm) to stay clear of finite-size revivals.
inline EnvelopeFit entropy_envelope_fit(const EntropyCurve& curve, int m, double h_norm) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : curve.rows)
    if (r.m == m) pts.emplace_back(std::abs(r.t), r.entropy);
  if (pts.size() < 5) throw PreconditionError("entropy_envelope_fit: need at least 5 time points");
  std::sort(pts.begin(), pts.end());
  const double t_limit = curve.sites / (4.0 * (h_norm > 0.0 ? h_norm : 1.0));
  if (pts.back().first > t_limit + 1e-12)
    throw PreconditionError("entropy_envelope_fit: time grid reaches the recurrence regime (|t| > n/4 in units of 1/hNorm)");

  std::vector<double> ts, running;
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& [t, s] : pts) {
    best = std::max(best, s);
    ts.push_back(t);
    running.push_back(best);
  }
  EnvelopeFit f;
  f.points = static_cast<int>(ts.size());
  const fit::Line l = fit::line(ts, running);
  f.c0 = l.intercept;
  f.c1 = l.slope;
  f.r_squared = l.r_squared;
  for (const auto& [t, s] : pts) f.max_excess = std::max(f.max_excess, s - (f.c0 + f.c1 * t));
  return f;
}

}  // namespace entscale::spin
