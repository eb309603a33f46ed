// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gaussreg/gaussian_space.hpp"
#include "gaussreg/measures.hpp"

namespace gaussreg {

struct UGammaEstimate {
  double epsilon = 0.0;
  MCEstimate estimate;
};

/// u(g, eps) = int_0^inf (s+1)^{-2} P(g <= eps s) ds.
/// For a fixed sample value g, int_0^inf (s+1)^{-2} 1{g <= eps s} ds
/// = int_{g/eps}^inf (s+1)^{-2} ds = (1 + g/eps)^{-1}, so by Fubini
/// u(g, eps) = E[eps / (eps + g)]. This path averages that integrand.
[[nodiscard]] UGammaEstimate u_gamma(std::span<const double> g_values, double epsilon);

/// Definitional path: substituting s = x/(1-x) turns the integral into
/// int_0^1 F(eps x/(1-x)) dx with F the empirical CDF of g; evaluated by the
/// trapezoid rule on `nodes` panels. F is monotone, so the rule is off by at
/// most 1/(2 nodes); that bound is added to the standard error.
[[nodiscard]] UGammaEstimate u_gamma_quadrature(std::span<const double> g_values, double epsilon,
                                                std::size_t nodes = 1 << 16);

struct Lemma11Margin {
  MCEstimate lhs;            // E (g + eps)^{-r}
  MCEstimate rhs;            // r eps^{-r} u(g, eps)
  double difference_stderr;  // standard error of the per-sample difference
};
[[nodiscard]] Lemma11Margin lemma_1_1_margin(std::span<const double> g_values, double r, double epsilon);

/// The 2k signed coordinate directions followed by `random_count` unit
/// vectors drawn from the given seed.
[[nodiscard]] std::vector<std::vector<double>> sigma_directions(std::size_t k, std::uint64_t seed,
                                                                std::size_t random_count = 16);

/// max sum_c s_c m_c over piecewise-linear phi on the given edges with
/// |slope| <= 1 and |phi| <= t (phi constant outside the edges). Solved as
/// the dual min-cost flow on the path of grid nodes plus a ground node.
[[nodiscard]] double sigma_grid_lp(const std::vector<double>& edges, const std::vector<double>& cell_mass,
                                   double t);

struct SigmaOptions {
  std::size_t cells = 0;       // base cell count per grid family; 0 chooses from the sample size
  bool refine = false;         // double the cells until successive values agree
  double tolerance = 0.01;     // relative agreement for convergence
  std::size_t max_cells = 16384;
};

struct SigmaEstimate {
  double t = 0.0;
  double lower = 0.0;
  double upper = -1.0;  // negative when not computed
  std::size_t direction_count = 0;
  std::size_t cells = 0;      // base cells of the final grid
  bool converged = false;
  double last_change = 0.0;   // relative change at the last refinement
  std::size_t best_direction = 0;
};

/// Lower bound for the modulus: sup over directions of the 1-D grid LP on
/// the projection of mu. Accepts signed measures.
[[nodiscard]] SigmaEstimate sigma_lower(const EmpiricalMeasure& mu, double t,
                                        const std::vector<std::vector<double>>& directions,
                                        const SigmaOptions& options = {});
[[nodiscard]] SigmaEstimate sigma_lower_converged(const EmpiricalMeasure& mu, double t,
                                                  const std::vector<std::vector<double>>& directions);

/// 1-D lower bound from exact cell masses of a (possibly signed) law given by
/// its CDF, on a grid of uniform cells over [lo, hi] merged with the extra
/// edges; refined x2 until successive values agree within tolerance.
[[nodiscard]] SigmaEstimate sigma_lower_from_cdf(const std::function<double(double)>& cdf, double lo, double hi,
                                                 const std::function<std::vector<double>(std::size_t)>& extra_edges,
                                                 double t, const SigmaOptions& options = {});
/// Convenience for the oracle densities (normal, chi2_1, uniform).
[[nodiscard]] SigmaEstimate sigma_lower_oracle(const std::string& density, double t);

struct SigmaUpper {
  double value = 0.0;   // 6k max TV
  double error = 0.0;   // 6k times the histogram error of the maximizing shift
  double max_tv = 0.0;
};

/// 6k max over h in {t, t/2, t/4} x directions of ||mu_h - mu||_TV.
[[nodiscard]] SigmaUpper sigma_upper(const EmpiricalMeasure& mu, double t,
                                     const std::vector<std::vector<double>>& directions,
                                     const BinningPolicy& policy = BinningPolicy::equal_mass());

struct BesovFit {
  std::vector<double> h_values;
  std::vector<double> tv_values;
  std::vector<double> tv_errors;
  std::vector<char> used;
  double alpha_hat = 0.0;
  double log_C_hat = 0.0;
  double r_squared = 0.0;
  std::size_t used_count = 0;
};

/// Least squares of log tv on log h over points with tv > 0 and
/// tv >= 5 * error. Throws DegenerateFit with fewer than 4 usable points.
[[nodiscard]] BesovFit fit_power_law(std::vector<double> h, std::vector<double> tv, std::vector<double> err);

[[nodiscard]] BesovFit besov_fit(const EmpiricalMeasure& mu, const std::vector<double>& h_grid,
                                 std::span<const double> direction,
                                 const BinningPolicy& policy = BinningPolicy::equal_mass());
[[nodiscard]] BesovFit besov_fit_oracle(const std::string& density, const std::vector<double>& h_grid);

/// Geometric grid from lo to hi with the given points per decade (endpoints included).
[[nodiscard]] std::vector<double> geometric_grid(double lo, double hi, int per_decade = 8);

}  // namespace gaussreg
