// SPDX-License-Identifier: MIT
#pragma once

#include <string>
#include <vector>

namespace gaussreg {

/// One-dimensional reference laws with closed-form pdf / cdf / quantile.
struct OracleDensity {
  std::string name;
  double support_lo;  // may be -inf
  double support_hi;  // may be +inf
  double (*pdf)(double);
  double (*cdf)(double);
  double (*quantile)(double);
  /// Finite window holding all but a negligible amount of mass.
  double window_lo;
  double window_hi;
};

/// "normal", "chi2_1" or "uniform"; throws UnknownDensity.
[[nodiscard]] const OracleDensity& oracle_density(const std::string& name);
[[nodiscard]] std::vector<std::string> oracle_density_names();

[[nodiscard]] double normal_cdf(double x);
[[nodiscard]] double normal_pdf(double x);

/// Integral of |rho(x + h) - rho(x)| over R. The line is cut at the support
/// ends of both copies and at every sign change of the difference; on each
/// piece the integral of the difference is exact through the CDF.
[[nodiscard]] double tv_shift_oracle_1d(const std::string& density, double h);

}  // namespace gaussreg
