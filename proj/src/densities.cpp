// SPDX-License-Identifier: MIT
#include "gaussreg/densities.hpp"

#include <algorithm>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>

#include "gaussreg/error.hpp"

namespace gaussreg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double normal_quantile(double p) { return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p); }

double chi2_pdf(double x) {
  if (x <= 0.0) return 0.0;
  return std::exp(-0.5 * x) / std::sqrt(2.0 * M_PI * x);
}
double chi2_cdf(double x) { return x <= 0.0 ? 0.0 : std::erf(std::sqrt(0.5 * x)); }
double chi2_quantile(double p) {
  const double r = boost::math::erf_inv(p);
  return 2.0 * r * r;
}

double uniform_pdf(double x) { return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0; }
double uniform_cdf(double x) { return std::clamp(x, 0.0, 1.0); }
double uniform_quantile(double p) { return p; }

const std::vector<OracleDensity>& table() {
  static const std::vector<OracleDensity> t = {
      {"normal", -kInf, kInf, &normal_pdf, &normal_cdf, &normal_quantile, -40.0, 40.0},
      {"chi2_1", 0.0, kInf, &chi2_pdf, &chi2_cdf, &chi2_quantile, 0.0, 3000.0},
      {"uniform", 0.0, 1.0, &uniform_pdf, &uniform_cdf, &uniform_quantile, 0.0, 1.0},
  };
  return t;
}

}  // namespace

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }
double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

const OracleDensity& oracle_density(const std::string& name) {
  for (const auto& d : table()) {
    if (d.name == name) return d;
  }
  throw Error(ErrorCode::kUnknownDensity, "no oracle density named '" + name + "'");
}

std::vector<std::string> oracle_density_names() {
  std::vector<std::string> names;
  for (const auto& d : table()) names.push_back(d.name);
  return names;
}

double tv_shift_oracle_1d(const std::string& name, double h) {
  const OracleDensity& d = oracle_density(name);
  h = std::abs(h);
  if (h == 0.0) return 0.0;
  auto diff = [&](double x) { return d.pdf(x + h) - d.pdf(x); };

  std::vector<double> cuts{d.window_lo - h, d.window_hi};
  for (double s : {d.support_lo, d.support_hi}) {
    if (std::isfinite(s)) {
      cuts.push_back(s);
      cuts.push_back(s - h);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  // Sign changes of the difference inside each piece: scan, then bracket.
  std::vector<double> roots;
  constexpr int kScan = 4096;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    double last_x = 0.0, last_v = 0.0;
    for (int j = 1; j < kScan; ++j) {
      const double x = lo + (hi - lo) * j / kScan;
      const double v = diff(x);
      if (v == 0.0) continue;
      if (last_v != 0.0 && (v > 0.0) != (last_v > 0.0)) {
        boost::uintmax_t iters = 200;
        const auto r = boost::math::tools::toms748_solve(
            diff, last_x, x, last_v, v, boost::math::tools::eps_tolerance<double>(52), iters);
        roots.push_back(0.5 * (r.first + r.second));
      }
      last_x = x;
      last_v = v;
    }
  }
  cuts.insert(cuts.end(), roots.begin(), roots.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.insert(cuts.begin(), -kInf);
  cuts.push_back(kInf);

  auto mass = [&](double a, double b, double offset) { return d.cdf(b + offset) - d.cdf(a + offset); };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (!(b > a)) continue;
    total += std::abs(mass(a, b, h) - mass(a, b, 0.0));
  }
  return total;
}

}  // namespace gaussreg
