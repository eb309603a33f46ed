// SPDX-License-Identifier: MIT
#include "gaussreg/cli.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

#include "gaussreg/catalog.hpp"
#include "gaussreg/densities.hpp"
#include "gaussreg/error.hpp"
#include "gaussreg/harness.hpp"
#include "gaussreg/smooth_maps.hpp"
#include "gaussreg/smoothness.hpp"

namespace gaussreg {

namespace {

enum Stream : std::uint64_t {
  kDistanceA = 301,
  kDistanceB = 302,
  kBesov = 501,
  kDemo = 701,
  kAnalyze = 801,
  kSigma = 802,
};

const std::vector<std::string>& sequence_names() {
  static const std::vector<std::string> names = {"perturbed_1d", "perturbed_2d", "vanishing_1d", "vanishing_2d"};
  return names;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

void require_field(const std::string& value, const std::string& field, const std::string& command) {
  if (value.empty()) throw Error(ErrorCode::kConfigParse, field + ": required by " + command);
}

void require_positive(const std::vector<double>& grid, const std::string& field) {
  for (double v : grid) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::kConfigParse, field + ": entries must be positive and finite");
    }
  }
}

std::vector<double> or_default(const std::vector<double>& grid, std::vector<double> fallback) {
  return grid.empty() ? fallback : grid;
}

// Resolves a map reference, prefixing failures with the config field.
MapSpec resolve(const std::string& reference, const std::string& field) {
  try {
    return load_map(reference);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kUnknownMap && e.code() != ErrorCode::kConfigParse) throw;
    std::string msg = e.what();
    const std::string code(to_string(e.code()));
    if (msg.rfind(code + ": ", 0) == 0) msg = msg.substr(code.size() + 2);
    throw Error(e.code(), field + ": " + msg);
  }
}

std::string pair_label(const MapSpec& a, const MapSpec& b) { return a.name() + " vs " + b.name(); }

// ---- commands ------------------------------------------------------------

void analyze_map(const RunConfig& c, Report& report) {
  const MapSpec f = load_map(c.map);
  const SampleBatch batch = sample(GaussianSpace(f.dim_in()), c.samples, c.seed, kAnalyze);
  const double p = c.p.value_or(2.0);
  const SobolevNorm norm = sobolev_norm(f, p, 2, batch);
  for (std::size_t i = 0; i < norm.per_component.size(); ++i) {
    const MCEstimate& e = norm.per_component[i];
    report.rows.push_back({"sobolev_norm[" + f.name() + "]",
                           {{"component", double(i)}, {"p", p}, {"order", 2.0}},
                           e.mean, e.std_error, e.mean, e.std_error,
                           std::string(verdict_name(Verdict::kReportOnly)), 0.0});
  }
  const std::vector<double> w = nondegeneracy_values(f, batch);
  const std::string what = f.dim_out() == 1 ? "grad_norm" : "malliavin_det";
  const MCEstimate mean_w = estimate_from_values(w, what);
  report.rows.push_back({what + "_mean[" + f.name() + "]", {{"k", double(f.dim_out())}}, mean_w.mean,
                         mean_w.std_error, mean_w.mean, mean_w.std_error,
                         std::string(verdict_name(Verdict::kReportOnly)), 0.0});
  const double n = static_cast<double>(w.size());
  for (double eps : or_default(c.eps_grid, {1.0, 0.1, 0.01})) {
    const UGammaEstimate u = u_gamma(w, eps);
    const UGammaEstimate q = u_gamma_quadrature(w, eps);
    BoundCheck row = identity_check("u_gamma[" + f.name() + "]", {{"epsilon", eps}}, u.estimate.mean,
                                    u.estimate.std_error, q.estimate.mean, q.estimate.std_error,
                                    std::hypot(u.estimate.std_error, q.estimate.std_error));
    if (u.estimate.mean >= kVacuityLevel) row.verdict = Verdict::kVacuous;
    report.rows.push_back(to_row(row));
    const double hits = static_cast<double>(std::count_if(w.begin(), w.end(), [eps](double v) { return v <= eps; }));
    const double prob = hits / n;
    const double err = std::sqrt(prob * (1.0 - prob) / n);
    report.rows.push_back({"small_ball[" + f.name() + "]", {{"epsilon", eps}}, prob, err, prob, err,
                           std::string(verdict_name(Verdict::kReportOnly)), 0.0});
  }
  if (c.theta) {
    const MCEstimate b = negative_moment(w, *c.theta);
    report.rows.push_back({"negative_moment[" + f.name() + "]", {{"theta", *c.theta}}, b.mean, b.std_error, b.mean,
                           b.std_error, std::string(verdict_name(Verdict::kReportOnly)), 0.0});
  }
}

void distance(const RunConfig& c, Report& report) {
  const MapSpec a = load_map(c.map_a);
  const MapSpec b = load_map(c.map_b);
  if (a.dim_out() != b.dim_out()) {
    throw Error(ErrorCode::kDimensionMismatch, "map_b: output dimension differs from map_a");
  }
  const EmpiricalMeasure mu = pushforward(a, sample(GaussianSpace(a.dim_in()), c.samples, c.seed, kDistanceA));
  const EmpiricalMeasure nu = pushforward(b, sample(GaussianSpace(b.dim_in()), c.samples, c.seed, kDistanceB));
  const Params params = {{"N", double(c.samples)}, {"k", double(a.dim_out())}};
  DistanceReport d;
  if (c.metric == "tv") {
    d = tv_distance(mu, nu);
  } else if (c.metric == "kr") {
    d = a.dim_out() == 1 ? kr_norm_1d(difference(mu, nu)) : kr_norm(difference(mu, nu));
  } else {
    LpOptions o;
    if (a.dim_out() == 1) o.support_limit = 20000;
    d = kantorovich_norm(difference(mu, nu), o);
  }
  report.rows.push_back(to_row("distance_" + c.metric + "[" + pair_label(a, b) + "]", params, d));
}

void sigma(const RunConfig& c, Report& report) {
  const std::vector<double> grid = or_default(c.t_grid, {0.05, 0.1, 0.2, 0.5});
  if (!c.density.empty()) {
    for (double t : grid) {
      const SigmaEstimate s = sigma_lower_oracle(c.density, t);
      double sup_tv = 0.0;
      for (int j = 1; j <= 32; ++j) sup_tv = std::max(sup_tv, tv_shift_oracle_1d(c.density, t * j / 32.0));
      BoundCheck row = inequality_check("sigma_oracle[" + c.density + "]",
                                        {{"t", t}, {"cells", double(s.cells)}, {"converged", s.converged ? 1.0 : 0.0}},
                                        s.lower, s.lower * s.last_change, 6.0 * sup_tv, 0.0);
      report.rows.push_back(to_row(row));
    }
    return;
  }
  const MapSpec f = load_map(c.map);
  const std::size_t k = f.dim_out();
  const EmpiricalMeasure mu = pushforward(f, sample(GaussianSpace(f.dim_in()), c.samples, c.seed, kSigma));
  const auto dirs = sigma_directions(k, c.seed, k == 1 ? 0 : 4);
  for (double t : grid) {
    const SigmaEstimate lo = sigma_lower(mu, t, dirs);
    const SigmaUpper up = sigma_upper(mu, t, dirs);
    BoundCheck row = inequality_check("sigma_sandwich[" + f.name() + "]",
                                      {{"t", t}, {"directions", double(lo.direction_count)}, {"cells", double(lo.cells)}},
                                      lo.lower, 0.0, up.value, up.error);
    report.rows.push_back(to_row(row));
  }
}

void besov(const RunConfig& c, Report& report) {
  if (!c.density.empty()) {
    const bool uniform = c.density == "uniform";
    const std::vector<double> grid =
        or_default(c.h_grid, uniform ? geometric_grid(0.0158, 0.5) : geometric_grid(0.02, 0.632));
    report.rows.push_back(to_row("besov_oracle[" + c.density + "]", {}, besov_fit_oracle(c.density, grid)));
    return;
  }
  const MapSpec f = load_map(c.map);
  const std::vector<double> grid = or_default(c.h_grid, geometric_grid(0.02, 0.632));
  const EmpiricalMeasure mu = pushforward(f, sample(GaussianSpace(f.dim_in()), c.samples, c.seed, kBesov));
  for (std::size_t axis = 0; axis < f.dim_out(); ++axis) {
    std::vector<double> e(f.dim_out(), 0.0);
    e[axis] = 1.0;
    report.rows.push_back(to_row("besov_fit[" + f.name() + "]", {{"axis", double(axis)}, {"N", double(c.samples)}},
                                 besov_fit(mu, grid, e)));
  }
  if (c.p && c.theta) {
    BesovOptions o;
    o.samples = c.samples;
    o.seed = c.seed;
    o.stream = kBesov;
    o.h_grid = grid;
    const ScalingCheck sc = f.dim_out() == 1 ? cor_3_4_besov(f, *c.p, *c.theta, o) : cor_4_4_besov(f, *c.p, *c.theta, o);
    report.rows.push_back(to_row(sc));
  }
}

void demo_sequence(const RunConfig& c, Report& report) {
  DemoOptions o;
  o.samples = c.samples;
  o.seed = c.seed;
  o.stream = kDemo;
  const bool vanishing = c.sequence.rfind("vanishing", 0) == 0;
  if (vanishing) o.n_values = {1, 2, 5, 10, 20, 50};
  const bool planar = c.sequence.find("_2d") != std::string::npos;
  MapSpec limit = lift(builtin_map("x1"), 2);
  if (c.sequence == "perturbed_2d") limit = builtin_map("x1_x2");
  if (c.sequence == "vanishing_1d") limit = MapSpec("zero", PolynomialMap(2, {{}}));
  if (c.sequence == "vanishing_2d") limit = MapSpec("zero_x2", PolynomialMap(2, {{}, {Monomial{{0, 1}, 1.0}}}));
  const std::string prefix = c.sequence + ":";
  const auto seq = [prefix](int n) { return builtin_map(prefix + std::to_string(n)); };
  const double p = c.p.value_or(planar ? 16.0 : 10.0);
  const std::string name = std::string(planar ? "convergence_2d[" : "convergence_1d[") + c.sequence + "]";
  const DemoResult r = convergence_demo(name, seq, limit, p, o);
  for (const auto& b : r.rows) report.rows.push_back(to_row(b));
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"analyze-map", "distance",      "sigma", "besov",
                                                 "verify",      "demo-sequence", "list"};
  return names;
}

void validate(const RunConfig& c) {
  if (!contains(command_names(), c.command)) {
    throw Error(ErrorCode::kConfigParse, "command: unknown command '" + c.command + "'");
  }
  if (c.command == "list") return;
  if (c.format != "csv" && c.format != "json") {
    throw Error(ErrorCode::kConfigParse, "format: expected csv or json, got '" + c.format + "'");
  }
  const bool monte_carlo = !((c.command == "sigma" || c.command == "besov") && !c.density.empty());
  if (monte_carlo && c.samples < kMinSamples) {
    throw Error(ErrorCode::kConfigParse, "samples: must be at least " + std::to_string(kMinSamples));
  }
  if (c.p && !(*c.p > 1.0)) throw Error(ErrorCode::kConfigParse, "p: must exceed 1");
  if (c.theta && !(*c.theta > 0.0 && *c.theta < 1.0)) {
    throw Error(ErrorCode::kConfigParse, "theta: must lie in (0, 1)");
  }
  require_positive(c.eps_grid, "eps_grid");
  require_positive(c.t_grid, "t_grid");
  require_positive(c.h_grid, "h_grid");
  if (c.command == "analyze-map") {
    require_field(c.map, "map", c.command);
    (void)resolve(c.map, "map");
  } else if (c.command == "distance") {
    require_field(c.map_a, "map_a", c.command);
    require_field(c.map_b, "map_b", c.command);
    (void)resolve(c.map_a, "map_a");
    (void)resolve(c.map_b, "map_b");
    if (c.metric != "tv" && c.metric != "kr" && c.metric != "k") {
      throw Error(ErrorCode::kConfigParse, "metric: expected tv, kr or k, got '" + c.metric + "'");
    }
  } else if (c.command == "sigma" || c.command == "besov") {
    if (c.map.empty() == c.density.empty()) {
      throw Error(ErrorCode::kConfigParse, "map: give exactly one of map and density");
    }
    if (!c.density.empty()) (void)oracle_density(c.density);
    if (!c.map.empty()) (void)resolve(c.map, "map");
  } else if (c.command == "verify") {
    const auto& names = suite_names();
    if (!contains(names, c.suite) && c.suite != "forced-fail") {
      throw Error(ErrorCode::kConfigParse, "suite: unknown suite '" + c.suite + "'");
    }
  } else if (c.command == "demo-sequence") {
    require_field(c.sequence, "sequence", c.command);
    if (!contains(sequence_names(), c.sequence)) {
      throw Error(ErrorCode::kUnknownMap, "sequence: unknown sequence '" + c.sequence + "'");
    }
  }
}

RunOutcome run(const RunConfig& c) {
  validate(c);
  RunOutcome out;
  if (c.command == "list") {
    out.text = list_catalog();
    return out;
  }
  Report& report = out.report;
  report.metadata.command = c.command;
  report.metadata.seed = c.seed;
  report.metadata.samples = c.samples;
  report.metadata.timestamp = utc_timestamp();
  report.metadata.git_describe = git_describe();
  if (c.command == "analyze-map") {
    analyze_map(c, report);
  } else if (c.command == "distance") {
    distance(c, report);
  } else if (c.command == "sigma") {
    sigma(c, report);
  } else if (c.command == "besov") {
    besov(c, report);
  } else if (c.command == "demo-sequence") {
    demo_sequence(c, report);
  } else {
    HarnessConfig h;
    h.samples = c.samples;
    h.seed = c.seed;
    h.p = c.p;
    h.theta = c.theta;
    h.t_grid = c.t_grid;
    h.eps_grid = c.eps_grid;
    h.h_grid = c.h_grid;
    append_rows(report, run_suite(c.suite, h));
  }
  out.exit_status = report.failed() ? 1 : 0;
  return out;
}

void emit(std::ostream& out, const Report& report, const std::string& format) {
  if (format == "json") {
    write_json(out, report);
  } else {
    write_csv(out, report);
  }
}

std::string list_catalog() {
  std::ostringstream out;
  out << "maps:\n";
  for (const auto& e : map_catalog()) {
    out << "  " << e.name << " (n=" << e.dim_in << ",k=" << e.dim_out << "): " << e.facts << '\n';
  }
  out << "densities:\n"
      << "  normal density oracle: standard normal; shift TV 4Phi(|h|/2) - 2, Besov exponent 1\n"
      << "  chi2_1 density oracle: law of x1^2; density blows up at 0, Besov exponent 1/2\n"
      << "  uniform density oracle: uniform on [0, 1]; shift TV 2 min(|h|, 1), Besov exponent 1\n";
  return out.str();
}

}  // namespace gaussreg
