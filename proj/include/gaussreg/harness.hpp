// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gaussreg/gaussian_space.hpp"
#include "gaussreg/measures.hpp"
#include "gaussreg/smooth_maps.hpp"

namespace gaussreg {

enum class Verdict { kPass, kPassWithinError, kFail, kVacuous, kReportOnly };

[[nodiscard]] std::string_view verdict_name(Verdict v) noexcept;

/// Ordered (name, value) pairs; order is part of the report format.
using Params = std::vector<std::pair<std::string, double>>;

struct BoundCheck {
  std::string name;
  Params params;
  double lhs = 0.0;
  double lhs_err = 0.0;
  double rhs = 0.0;
  double rhs_err = 0.0;
  Verdict verdict = Verdict::kFail;
  double margin = 0.0;  // rhs - lhs
};

/// lhs <= rhs (up to a 1e-12 relative rounding floor): pass; lhs <= rhs + 4 hypot(lhs_err, rhs_err): pass-within-error; else fail.
[[nodiscard]] BoundCheck inequality_check(std::string name, Params params, double lhs, double lhs_err, double rhs,
                                          double rhs_err);

/// |lhs - rhs| <= 4 difference_err, with a rounding floor of 1e-12 times the
/// larger side. The difference error is the standard error of the
/// per-sample difference (paired estimate on one batch); it is recorded in
/// the params as "paired_err".
[[nodiscard]] BoundCheck identity_check(std::string name, Params params, double lhs, double lhs_err, double rhs,
                                        double rhs_err, double difference_err);

struct ScalingCheck {
  std::string name;
  Params params;
  double fitted_exponent = 0.0;
  double predicted_exponent = 0.0;
  double r_squared = 0.0;
  /// max/min of the fitted-constant envelope; 1 when not applicable.
  double constant_spread = 1.0;
  std::vector<double> grid;
  std::vector<double> x;
  std::vector<double> y;
  Verdict verdict = Verdict::kFail;
};

inline constexpr double kExponentSlack = 0.05;
inline constexpr double kMinRSquared = 0.9;
inline constexpr double kMaxConstantSpread = 5.0;
inline constexpr double kVacuityLevel = 0.9;

/// Slope of log y on log x by least squares, with r^2.
struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
[[nodiscard]] LogLogFit log_log_fit(const std::vector<double>& x, const std::vector<double>& y);

/// Envelope c(t_i) = max_{j >= i} y_j / x_j over an increasing grid, then max/min.
[[nodiscard]] double constant_envelope_spread(const std::vector<double>& x, const std::vector<double>& y);

/// Exponents of the Besov and TV-KR corollaries.
[[nodiscard]] double besov_exponent_1d(double p, double theta);            // p theta / (2p + theta)
[[nodiscard]] double tv_kr_exponent_1d(double p, double theta);            // p theta / ((2+theta) p + theta)
[[nodiscard]] double besov_exponent_kd(double p, double theta, std::size_t k);  // p theta / (2p + (4k-1) theta)

/// Per-sample nondegeneracy: |grad f| when k = 1, Delta_f = det M_f otherwise.
[[nodiscard]] std::vector<double> nondegeneracy_values(const MapSpec& f, const SampleBatch& batch);

// ---- identities ---------------------------------------------------------

/// E <grad g, grad f> / (|grad f|^2 + eps^2) against
/// -E g (Lf / (|grad f|^2 + eps^2) - 2 <D^2f grad f, grad f> / (|grad f|^2 + eps^2)^2).
[[nodiscard]] BoundCheck ibp_identity_1d(const MapSpec& f, const MapSpec& g, double epsilon, const SampleBatch& batch);
/// Same on an epsilon grid, sharing the jets across grid points.
[[nodiscard]] std::vector<BoundCheck> ibp_identity_1d(const MapSpec& f, const MapSpec& g,
                                                      const std::vector<double>& epsilon, const SampleBatch& batch);

/// E <grad u, grad f_j> v / (Delta_f + eps) against
/// -E u (v L f_j / (Delta + eps) - v <grad f_j, grad Delta> / (Delta + eps)^2 + <grad f_j, grad v> / (Delta + eps)).
[[nodiscard]] BoundCheck ibp_identity_kd(const MapSpec& f, const MapSpec& u, const MapSpec& v, std::size_t j,
                                         double epsilon, const SampleBatch& batch);
[[nodiscard]] std::vector<BoundCheck> ibp_identity_kd(const MapSpec& f, const MapSpec& u, const MapSpec& v,
                                                      std::size_t j, const std::vector<double>& epsilon,
                                                      const SampleBatch& batch);

// ---- shift modulus and distances ----------------------------------------

/// Both shift-modulus inequalities (constants 2 and 6) on a 1-D oracle
/// density. Throws DegenerateFit if the modulus does not converge.
[[nodiscard]] std::vector<BoundCheck> thm_2_1_check(const std::string& density, const std::vector<double>& h_grid);

/// A signed 1-D law given exactly: CDF of mu - nu, a grid window, extra edges
/// and the exact total variation.
struct SignedLaw1d {
  std::function<double(double)> cdf;
  double lo = 0.0;
  double hi = 0.0;
  std::function<std::vector<double>(std::size_t)> extra_edges;
  double total_variation = 0.0;
};

/// TV <= 3 sqrt(k) sigma(mu - nu, eps) + sqrt(k) eps^{-1} ||mu - nu||, with the
/// KR norm (or the Kantorovich norm when `kantorovich`). With an exact law the
/// rows are asserted; otherwise they are report-only.
[[nodiscard]] std::vector<BoundCheck> lemma_2_1_check(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                                                      const std::vector<double>& eps_grid,
                                                      const SignedLaw1d* exact = nullptr, bool kantorovich = false);
[[nodiscard]] std::vector<BoundCheck> kantorovich_remark_check(const EmpiricalMeasure& mu,
                                                               const EmpiricalMeasure& nu,
                                                               const std::vector<double>& eps_grid,
                                                               const SignedLaw1d* exact = nullptr);

/// KR norm in one dimension on a fine coarsening grid.
[[nodiscard]] DistanceReport kr_norm_1d(const EmpiricalMeasure& omega, std::size_t support_limit = 20000);

/// Lower bound for the KR norm of a signed measure in R^k: the largest 1-D KR
/// norm over the projections on the given unit directions (projection keeps
/// test functions bounded by 1 and 1-Lipschitz).
[[nodiscard]] DistanceReport kr_norm_projected(const EmpiricalMeasure& omega,
                                               const std::vector<std::vector<double>>& directions,
                                               std::size_t support_limit = 20000);

// ---- scaling sweeps -----------------------------------------------------

/// Shift-TV profile: radii r_i and max over directions of ||mu_{r e} - mu||_TV
/// with its histogram error, evaluated once per (direction, radius).
struct ShiftProfile {
  std::vector<double> radii;
  std::vector<double> tv;
  std::vector<double> err;
};
[[nodiscard]] ShiftProfile shift_profile(const EmpiricalMeasure& mu, const std::vector<double>& radii,
                                         const std::vector<std::vector<double>>& directions,
                                         const BinningPolicy& policy = BinningPolicy::equal_mass());

struct ScalingResult {
  ScalingCheck scaling;
  std::vector<BoundCheck> bounds;
};

struct SweepOptions {
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  std::vector<double> t_grid;   // empty: geometric 0.01..0.3, 8 per decade
  std::size_t random_directions = 2;
  bool sandwich = true;         // also report sigma_lower <= sigma_upper rows
};

/// sigma(gamma o f^{-1}, t) against u(|grad f|, sqrt t)^{1 - 1/p}, k = 1.
[[nodiscard]] ScalingResult thm_3_1_scaling(const MapSpec& f, double p, const SweepOptions& options);
/// sigma(gamma o f^{-1}, t) against u(Delta_f, sqrt t)^{1 - (4k-1)/p}.
[[nodiscard]] ScalingResult thm_4_1_scaling(const MapSpec& f, double p, const SweepOptions& options);

// ---- Besov and TV-KR corollaries -----------------------------------------

struct BesovOptions {
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  std::vector<double> h_grid;  // empty: geometric 0.02..0.632, 8 per decade
};

/// Sample estimate of E w^{-theta}. Raises MomentDiverged when the Hill tail
/// index of w^{-theta} on its top 1% is below 1 (the mean then grows without
/// bound in N), or when w vanishes at a sample point.
[[nodiscard]] MCEstimate negative_moment(const std::vector<double>& w, double theta);

[[nodiscard]] ScalingCheck cor_3_4_besov(const MapSpec& f, double p, double theta, const BesovOptions& options);
[[nodiscard]] ScalingCheck cor_4_4_besov(const MapSpec& f, double p, double theta, const BesovOptions& options);
/// Same over a (p, theta) grid; the sample and the fit are shared.
[[nodiscard]] std::vector<ScalingCheck> cor_3_4_besov(const MapSpec& f,
                                                      const std::vector<std::pair<double, double>>& grid,
                                                      const BesovOptions& options);
[[nodiscard]] std::vector<ScalingCheck> cor_4_4_besov(const MapSpec& f,
                                                      const std::vector<std::pair<double, double>>& grid,
                                                      const BesovOptions& options);

/// A family g_s indexed by s > 0 approaching f as s -> 0.
using MapFamily = std::function<MapSpec(double)>;

struct TvKrResult {
  ScalingCheck scaling;
  std::vector<BoundCheck> rows;  // per-s TV and KR, report-only
};
[[nodiscard]] TvKrResult cor_3_5_tv_kr(const MapSpec& f, const MapFamily& g, double p, double theta,
                                       const std::vector<double>& s_grid, const BesovOptions& options);
[[nodiscard]] TvKrResult cor_4_5_tv_kr(const MapSpec& f, const MapFamily& g, double p, double theta,
                                       const std::vector<double>& s_grid, const BesovOptions& options);

// ---- convergence demos --------------------------------------------------

struct DemoOptions {
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  std::vector<int> n_values{1, 2, 3, 5, 8, 13, 20, 32, 50};
  std::size_t fit_count = 3;  // leading n values used to fit the constant
};

struct DemoResult {
  std::vector<BoundCheck> rows;
  bool vacuous = false;
  double delta_max = 0.0;  // sup_n gamma(nondegeneracy <= eps) at the largest eps used
};

/// TV and KR of gamma o f_n^{-1} against the limit pushforward (same Gaussian
/// sample), the tail function delta, and the composite bound
/// C ([delta(KR^{1/8})]^{e} + KR^{e/8}) with C fitted on the first
/// `fit_count` n values and asserted on the rest. The exponent e is 1 - 1/p
/// in one dimension and 1 - (4k-1)/p otherwise; the nondegeneracy functional
/// is |grad f_n| for k = 1 and Delta_{f_n} for k >= 2.
[[nodiscard]] DemoResult convergence_demo(const std::string& name, const std::function<MapSpec(int)>& sequence,
                                          const MapSpec& limit, double p, const DemoOptions& options);

// ---- suites -------------------------------------------------------------

struct HarnessConfig {
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 1;
  std::optional<double> p;
  std::optional<double> theta;
  std::vector<double> t_grid;
  std::vector<double> eps_grid;
  std::vector<double> h_grid;
};

struct SuiteResult {
  std::vector<BoundCheck> bounds;
  std::vector<ScalingCheck> scalings;

  void append(const SuiteResult& other);
  /// True iff some asserted row failed (vacuous and report-only rows never count).
  [[nodiscard]] bool failed() const;
};

/// identities, ibp, distances, modulus, besov, scaling, demos, all.
[[nodiscard]] const std::vector<std::string>& suite_names();
/// Runs one suite; "forced-fail" is a fixture whose single check is false by design.
[[nodiscard]] SuiteResult run_suite(const std::string& suite, const HarnessConfig& config);

}  // namespace gaussreg
