#pragma once

#include <cmath>
#include <vector>

#include "entscale/linalg/types.hpp"

namespace entscale::fit {

struct LinearFit {
  std::vector<double> coefficients;  // in design-column order
  double r_squared = 0.0;
  double max_positive_residual = 0.0;
};

/// Ordinary least squares y ~ X beta; R^2 is computed about the mean of y.
inline LinearFit least_squares(const RMatrix& design, const RVector& y) {
  if (design.rows() != y.size() || design.rows() < design.cols() || design.cols() == 0)
    throw PreconditionError("least_squares: need at least as many points as parameters");
  const RVector beta = design.colPivHouseholderQr().solve(y);
  const RVector resid = y - design * beta;
  const double ss_res = resid.squaredNorm();
  const double ss_tot = (y.array() - y.mean()).square().sum();
  LinearFit f;
  f.coefficients.assign(beta.data(), beta.data() + beta.size());
  f.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
  f.max_positive_residual = resid.size() ? std::max(0.0, resid.maxCoeff()) : 0.0;
  return f;
}

struct Line {
  double intercept = 0.0;
  double slope = 0.0;
  double r_squared = 0.0;
};

inline Line line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw PreconditionError("line fit: need two or more paired points");
  RMatrix a(static_cast<Index>(x.size()), 2);
  RVector b(static_cast<Index>(y.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    a(static_cast<Index>(i), 0) = 1.0;
    a(static_cast<Index>(i), 1) = x[i];
    b(static_cast<Index>(i)) = y[i];
  }
  const LinearFit f = least_squares(a, b);
  return {f.coefficients[0], f.coefficients[1], f.r_squared};
}

}  // namespace entscale::fit
