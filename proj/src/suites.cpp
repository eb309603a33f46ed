// SPDX-License-Identifier: MIT
#include <algorithm>
#include <cmath>

#include "gaussreg/catalog.hpp"
#include "gaussreg/densities.hpp"
#include "gaussreg/error.hpp"
#include "gaussreg/harness.hpp"
#include "gaussreg/malliavin.hpp"
#include "gaussreg/rng.hpp"
#include "gaussreg/smoothness.hpp"

namespace gaussreg {
namespace {

// Fixed stream ids keep each check's sample independent of which suites run.
enum Stream : std::uint64_t {
  kIdentityPoints = 101,
  kSmallBall = 102,
  kIbp1d = 201,
  kIbpKd = 202,
  kDistanceA = 301,
  kDistanceB = 302,
  kLemmaA = 401,
  kLemmaB = 402,
  kBesov = 501,
  kScaling = 601,
  kTvKr = 602,
  kDemo = 701,
};

constexpr double kIdentityTolerance = 1e-10;

Params with_n(const MapSpec& m) {
  return {{"n", static_cast<double>(m.dim_in())}, {"k", static_cast<double>(m.dim_out())}};
}

/// Smooth test function on R^k for the chain identity.
MapSpec chain_test_function(std::size_t k) {
  return make_closure_map("phi" + std::to_string(k), k, 1, [](auto y, std::size_t) {
    using std::cos;
    using std::sin;
    auto s = sin(y[0]) + 0.5 * y[0] * y[0];
    for (std::size_t i = 1; i < y.size(); ++i) s = s + cos(y[i] + 0.3 * static_cast<double>(i)) * y[0];
    return s;
  });
}

std::vector<MapSpec> identity_catalog() {
  std::vector<MapSpec> maps;
  for (const auto& e : map_catalog()) {
    if (e.name.find('<') != std::string::npos) {
      const std::string family = e.name.substr(0, e.name.find(':'));
      for (int n : {1, 3, 50}) maps.push_back(builtin_map(family + ":" + std::to_string(n)));
    } else {
      maps.push_back(builtin_map(e.name));
    }
  }
  return maps;
}

SuiteResult identities_suite(const HarnessConfig& c) {
  SuiteResult out;
  for (const MapSpec& f : identity_catalog()) {
    const SampleBatch batch = sample(GaussianSpace(f.dim_in()), 10000, c.seed, kIdentityPoints);
    const MapSpec phi = chain_test_function(f.dim_out());
    double adj = 0.0, chain = 0.0, ratio = 0.0;
    std::vector<Jet2> jets(f.dim_out());
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const auto x = batch.point(i);
      for (std::size_t comp = 0; comp < f.dim_out(); ++comp) jets[comp] = f.jet(comp, x);
      const MalliavinSample s = malliavin_from_jets(jets);
      adj = std::max(adj, adjugate_residual(s));
      chain = std::max(chain, chain_identity_residual(f, phi, x));
      for (std::size_t j = 0; j < f.dim_out(); ++j) {
        const BoundPair bp = grad_delta_bound_margin(s, jets, j);
        if (bp.lhs > 0.0) ratio = std::max(ratio, bp.rhs > 0.0 ? bp.lhs / bp.rhs : INFINITY);
      }
    }
    Params p = with_n(f);
    p.emplace_back("points", 10000.0);
    out.bounds.push_back(inequality_check("adjugate_identity[" + f.name() + "]", p, adj, 0.0, kIdentityTolerance, 0.0));
    out.bounds.push_back(inequality_check("chain_identity[" + f.name() + "]", p, chain, 0.0, kIdentityTolerance, 0.0));
    out.bounds.push_back(inequality_check("grad_det_bound[" + f.name() + "]", p, ratio, 0.0, 1.0, 0.0));
  }
  // Hermite eigenrelation L H_n = -n H_n.
  {
    const SampleBatch batch = sample(GaussianSpace(1), 10000, c.seed, kIdentityPoints);
    for (int d = 1; d <= 5; ++d) {
      const MapSpec h = hermite_map(d);
      double worst = 0.0;
      for (std::size_t i = 0; i < batch.size(); ++i) {
        const auto x = batch.point(i);
        const double lhs = ornstein_uhlenbeck(h, 0, x);
        const double rhs = -d * h.value(0, x);
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
      }
      out.bounds.push_back(inequality_check("hermite_eigen[" + h.name() + "]", {{"degree", double(d)}}, worst, 0.0,
                                            kIdentityTolerance, 0.0));
    }
  }
  // u of a constant: identity path exact, quadrature path within its error.
  const std::vector<double> eps_grid = c.eps_grid.empty() ? std::vector<double>{1.0, 0.1, 0.01} : c.eps_grid;
  for (double value : {0.0, 0.5, 2.0}) {
    const std::vector<double> g(1000, value);
    for (double eps : eps_grid) {
      const double exact = eps / (eps + value);
      const UGammaEstimate a = u_gamma(g, eps);
      const UGammaEstimate q = u_gamma_quadrature(g, eps);
      out.bounds.push_back(identity_check("u_const_identity", {{"c", value}, {"eps", eps}}, a.estimate.mean,
                                          a.estimate.std_error, exact, 0.0, 0.0));
      out.bounds.push_back(identity_check("u_const_quadrature", {{"c", value}, {"eps", eps}}, q.estimate.mean,
                                          q.estimate.std_error, exact, 0.0, q.estimate.std_error));
    }
  }
  // Both u paths and the small-ball moment bound on sampled g.
  const SampleBatch batch = sample(GaussianSpace(2), c.samples, c.seed, kSmallBall);
  for (const std::string name : {"x1", "x1sq", "x1x2"}) {
    const MapSpec f = lift(builtin_map(name), 2);
    std::vector<double> g(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) g[i] = f.jet(0, batch.point(i)).gradient.norm();
    for (double eps : eps_grid) {
      const UGammaEstimate a = u_gamma(g, eps);
      const UGammaEstimate q = u_gamma_quadrature(g, eps);
      out.bounds.push_back(identity_check("u_paths_agree[|grad " + name + "|]", {{"eps", eps}}, a.estimate.mean,
                                          a.estimate.std_error, q.estimate.mean, q.estimate.std_error,
                                          std::hypot(a.estimate.std_error, q.estimate.std_error)));
      for (double r : {1.0, 2.0}) {
        const Lemma11Margin m = lemma_1_1_margin(g, r, eps);
        out.bounds.push_back(inequality_check("small_ball_moment[|grad " + name + "|]", {{"r", r}, {"eps", eps}},
                                              m.lhs.mean, m.difference_stderr, m.rhs.mean, 0.0));
      }
    }
  }
  for (double eps : eps_grid) {
    const std::vector<double> zero(1000, 0.0);
    const Lemma11Margin m = lemma_1_1_margin(zero, 1.0, eps);
    out.bounds.push_back(identity_check("small_ball_moment_equality", {{"r", 1.0}, {"eps", eps}}, m.lhs.mean, 0.0,
                                        m.rhs.mean, 0.0, 0.0));
  }
  return out;
}

SuiteResult ibp_suite(const HarnessConfig& c) {
  SuiteResult out;
  const std::vector<double> eps_grid = c.eps_grid.empty() ? std::vector<double>{1.0, 0.1, 0.01} : c.eps_grid;
  const SampleBatch b2 = sample(GaussianSpace(2), c.samples, c.seed, kIbp1d);
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"x1", "x1"},       {"x1", "const"},       {"x1sq", "x1"},     {"x1sq", "sin_x1"},
      {"hermite3", "hermite2"}, {"quad_form", "x1x2"}, {"linear_form", "sin_x1"}, {"sin_x1", "x1sq"},
  };
  // Orthogonal gradients: x1^2 against x2.
  const MapSpec x2 = MapSpec("x2", PolynomialMap(2, {{Monomial{{0, 1}, 1.0}}}));
  for (const auto& [fn, gn] : pairs) {
    const MapSpec f = builtin_map(fn), g = builtin_map(gn);
    for (auto& row : ibp_identity_1d(f, g, eps_grid, b2)) out.bounds.push_back(std::move(row));
  }
  for (auto& row : ibp_identity_1d(builtin_map("x1sq"), x2, eps_grid, b2)) out.bounds.push_back(std::move(row));

  const SampleBatch bk = sample(GaussianSpace(2), c.samples, c.seed, kIbpKd);
  const MapSpec one = builtin_map("const");
  struct Triple {
    std::string f, u;
    MapSpec v;
    std::size_t j;
  };
  const std::vector<Triple> triples = {
      {"x1_x2", "x1", builtin_map("x1"), 0},    {"x1_x2", "const", builtin_map("x1"), 1},
      {"x1sq_x2", "sin_x1", one, 0},            {"x1sq_x2", "x1", x2, 1},
      {"sin_linear", "sin_x1", x2, 0},          {"rot45", "x1sq", builtin_map("sin_x1"), 1},
  };
  for (const auto& t : triples) {
    for (auto& row : ibp_identity_kd(builtin_map(t.f), builtin_map(t.u), t.v, t.j, eps_grid, bk)) {
      out.bounds.push_back(std::move(row));
    }
  }
  return out;
}

SuiteResult distances_suite(const HarnessConfig& c) {
  SuiteResult out;
  // Gaussian pair at N = 1e5 (independent samples).
  {
    const std::size_t n = 100000;
    const EmpiricalMeasure a = pushforward(builtin_map("x1"), sample(GaussianSpace(1), n, c.seed, kDistanceA));
    const EmpiricalMeasure b = pushforward(builtin_map("x1_shift_1"), sample(GaussianSpace(1), n, c.seed, kDistanceB));
    const double exact = 4.0 * normal_cdf(0.5) - 2.0;
    for (const auto& [label, policy] :
         {std::pair{"fd", BinningPolicy::freedman_diaconis()}, std::pair{"equal_mass", BinningPolicy::equal_mass()}}) {
      const DistanceReport r = tv_distance(a, b, policy);
      out.bounds.push_back(inequality_check(std::string("tv_gaussian_pair[") + label + "]",
                                            {{"N", double(n)}, {"estimate", r.refined_value}, {"exact", exact}},
                                            std::abs(r.refined_value - exact), r.error_estimate, 0.02 * exact, 0.0));
    }
  }
  // Two-point measures: KR = min(|h|, 2), K = |h|.
  for (double h : {0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 10.0}) {
    const EmpiricalMeasure w = difference(dirac({0.0}), dirac({h}));
    const DistanceReport kr = kr_norm(w);
    const DistanceReport k = kantorovich_norm(w);
    out.bounds.push_back(identity_check("kr_two_point", {{"h", h}}, kr.value, 0.0, std::min(h, 2.0), 0.0, 0.0));
    out.bounds.push_back(identity_check("kantorovich_two_point", {{"h", h}}, k.value, 0.0, h, 0.0, 0.0));
  }
  // Planar two-point measures.
  for (double h : {0.5, 1.0, 3.0}) {
    const EmpiricalMeasure w = difference(dirac({0.0, 0.0}), dirac({0.6 * h, 0.8 * h}));
    out.bounds.push_back(
        identity_check("kr_two_point_2d", {{"h", h}}, kr_norm(w).value, 0.0, std::min(h, 2.0), 0.0, 0.0));
  }
  // Small random supports: 1-D LP against the CDF formula for K.
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t m = 4 + trial % 9;
    std::vector<double> pts, wts;
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      pts.push_back(3.0 * (normal_variate(c.seed, kDistanceA, 1000 + 2 * (trial * 16 + i))));
      const double w = normal_variate(c.seed, kDistanceB, 1000 + 2 * (trial * 16 + i));
      wts.push_back(w);
      total += w;
    }
    for (double& w : wts) w -= total / static_cast<double>(m);
    const EmpiricalMeasure omega(1, pts, wts);
    std::vector<std::pair<double, double>> atoms;
    for (std::size_t i = 0; i < m; ++i) atoms.emplace_back(pts[i], wts[i]);
    std::sort(atoms.begin(), atoms.end());
    double cum = 0.0, integral = 0.0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      cum += atoms[i].second;
      integral += std::abs(cum) * (atoms[i + 1].first - atoms[i].first);
    }
    out.bounds.push_back(identity_check("kantorovich_vs_cdf", {{"support", double(m)}},
                                        kantorovich_norm(omega).value, 0.0, integral, 0.0, 1e-12 * integral));
  }
  return out;
}

SignedLaw1d shifted_normal_law(double shift) {
  const OracleDensity& d = oracle_density("normal");
  SignedLaw1d law;
  law.cdf = [shift](double x) { return normal_cdf(x) - normal_cdf(x - shift); };
  law.lo = std::min(0.0, shift) + d.quantile(0.001);
  law.hi = std::max(0.0, shift) + d.quantile(0.999);
  law.extra_edges = [shift, &d](std::size_t n) {
    std::vector<double> e{d.quantile(1e-12), shift + d.quantile(1.0 - 1e-12)};
    for (std::size_t j = 1; j < n; ++j) {
      const double q = d.quantile(static_cast<double>(j) / static_cast<double>(n));
      e.push_back(q);
      e.push_back(q + shift);
    }
    return e;
  };
  law.total_variation = 4.0 * normal_cdf(std::abs(shift) / 2.0) - 2.0;
  return law;
}

SuiteResult modulus_suite(const HarnessConfig& c) {
  SuiteResult out;
  const std::vector<double> h_grid = c.h_grid.empty() ? std::vector<double>{0.0, 0.05, 0.1, 0.2, 0.5} : c.h_grid;
  for (const auto& name : oracle_density_names()) {
    for (auto& row : thm_2_1_check(name, h_grid)) out.bounds.push_back(std::move(row));
  }
  const std::vector<double> eps_grid = c.eps_grid.empty() ? std::vector<double>{0.1, 0.25, 0.5, 1.0} : c.eps_grid;
  const std::size_t n = std::min<std::size_t>(c.samples, 1000000);
  const EmpiricalMeasure mu = pushforward(builtin_map("x1"), sample(GaussianSpace(1), n, c.seed, kLemmaA));
  const EmpiricalMeasure nu = shift(pushforward(builtin_map("x1"), sample(GaussianSpace(1), n, c.seed, kLemmaB)),
                                    std::vector<double>{0.3});
  const SignedLaw1d law = shifted_normal_law(0.3);
  for (auto& row : lemma_2_1_check(mu, nu, eps_grid, &law)) out.bounds.push_back(std::move(row));
  for (auto& row : kantorovich_remark_check(mu, nu, eps_grid, &law)) out.bounds.push_back(std::move(row));
  // mu = nu: zero on the left.
  {
    SignedLaw1d zero;
    zero.cdf = [](double) { return 0.0; };
    zero.lo = -1.0;
    zero.hi = 1.0;
    zero.total_variation = 0.0;
    for (auto& row : lemma_2_1_check(mu, mu, {0.5}, &zero)) out.bounds.push_back(std::move(row));
  }
  // Plane, shift (0.3, 0): report-only.
  const std::size_t n2 = std::min<std::size_t>(c.samples, 100000);
  const EmpiricalMeasure mu2 = pushforward(builtin_map("x1_x2"), sample(GaussianSpace(2), n2, c.seed, kLemmaA));
  const EmpiricalMeasure nu2 = shift(pushforward(builtin_map("x1_x2"), sample(GaussianSpace(2), n2, c.seed, kLemmaB)),
                                     std::vector<double>{0.3, 0.0});
  for (auto& row : lemma_2_1_check(mu2, nu2, {0.5})) out.bounds.push_back(std::move(row));
  for (auto& row : kantorovich_remark_check(mu2, nu2, {0.5})) out.bounds.push_back(std::move(row));
  return out;
}

using PTheta = std::pair<double, double>;

SuiteResult besov_suite(const HarnessConfig& c) {
  SuiteResult out;
  struct Target {
    std::string density, map;
    double lo, hi;
    std::vector<double> grid;
  };
  const std::vector<Target> targets = {
      {"normal", "x1", 0.95, 1.02, geometric_grid(0.02, 0.632)},
      {"chi2_1", "x1sq", 0.45, 0.55, geometric_grid(0.02, 0.632)},
      {"uniform", "uniform_x1", 0.95, 1.02, geometric_grid(0.0158, 0.5)},
  };
  const SampleBatch batch = sample(GaussianSpace(1), c.samples, c.seed, kBesov);
  for (const auto& t : targets) {
    const std::vector<double> grid = c.h_grid.empty() ? t.grid : c.h_grid;
    const BesovFit oracle = besov_fit_oracle(t.density, grid);
    out.bounds.push_back(inequality_check("besov_oracle_low[" + t.density + "]", {{"r2", oracle.r_squared}}, t.lo,
                                          0.0, oracle.alpha_hat, 0.0));
    out.bounds.push_back(inequality_check("besov_oracle_high[" + t.density + "]", {{"r2", oracle.r_squared}},
                                          oracle.alpha_hat, 0.0, t.hi, 0.0));
    const double e1[1] = {1.0};
    const BesovFit emp = besov_fit(pushforward(builtin_map(t.map), batch), grid, e1);
    out.bounds.push_back(inequality_check("besov_empirical_vs_oracle[" + t.density + "]",
                                          {{"alpha_hat", emp.alpha_hat}, {"oracle", oracle.alpha_hat},
                                           {"r2", emp.r_squared}, {"N", double(c.samples)}},
                                          std::abs(emp.alpha_hat - oracle.alpha_hat), 0.0, 0.05, 0.0));
  }
  BesovOptions bo;
  bo.samples = c.samples;
  bo.seed = c.seed;
  bo.stream = kBesov;
  bo.h_grid = c.h_grid;
  std::vector<PTheta> grid1 = {{2, 0.1}, {2, 0.5}, {2, 0.9}, {4, 0.5}, {4, 0.9}, {10, 0.5}, {10, 0.9}, {16, 0.9}};
  std::vector<PTheta> gauss2 = {{10, 0.5}, {10, 0.9}, {16, 0.5}, {16, 0.9}};
  // Delta = 4 x1^2 has E Delta^{-theta} < inf only for theta < 1/2.
  std::vector<PTheta> chi2 = {{10, 0.25}, {16, 0.25}, {16, 0.45}};
  if (c.p || c.theta) {
    grid1 = {{c.p.value_or(10.0), c.theta.value_or(0.9)}};
    gauss2 = chi2 = {{c.p.value_or(16.0), c.theta.value_or(0.45)}};
  }
  const auto add = [&out](std::vector<ScalingCheck> v) {
    for (auto& sc : v) out.scalings.push_back(std::move(sc));
  };
  for (const std::string name : {"x1", "x1sq"}) add(cor_3_4_besov(builtin_map(name), grid1, bo));
  add(cor_4_4_besov(builtin_map("x1_x2"), gauss2, bo));
  add(cor_4_4_besov(builtin_map("x1sq_x2"), chi2, bo));
  {
    // The moment detector must refuse theta = 0.9 on Delta = 4 x1^2.
    const SampleBatch b2 = sample(GaussianSpace(2), c.samples, c.seed, kBesov);
    std::vector<double> delta(b2.size());
    for (std::size_t i = 0; i < b2.size(); ++i) {
      const double x = b2.point(i)[0];
      delta[i] = 4.0 * x * x;
    }
    double fired = 0.0;
    try {
      (void)negative_moment(delta, 0.9);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kMomentDiverged) throw;
      fired = 1.0;
    }
    out.bounds.push_back(inequality_check("moment_hypothesis_detector[x1sq_x2]", {{"theta", 0.9}}, 1.0, 0.0, fired,
                                          0.0));
  }
  return out;
}

SuiteResult scaling_suite(const HarnessConfig& c) {
  SuiteResult out;
  SweepOptions so;
  so.samples = c.samples;
  so.seed = c.seed;
  so.stream = kScaling;
  so.t_grid = c.t_grid;
  auto add = [&out](ScalingResult r) {
    out.scalings.push_back(std::move(r.scaling));
    for (auto& b : r.bounds) out.bounds.push_back(std::move(b));
  };
  add(thm_3_1_scaling(builtin_map("x1"), c.p.value_or(2.0), so));
  add(thm_3_1_scaling(builtin_map("x1sq"), c.p.value_or(4.0), so));
  add(thm_3_1_scaling(builtin_map("const"), c.p.value_or(2.0), so));
  add(thm_4_1_scaling(builtin_map("x1_x2"), c.p.value_or(10.0), so));
  add(thm_4_1_scaling(builtin_map("x1sq_x2"), c.p.value_or(16.0), so));
  add(thm_4_1_scaling(builtin_map("x1_x1"), c.p.value_or(10.0), so));

  BesovOptions bo;
  bo.samples = c.samples;
  bo.seed = c.seed;
  bo.stream = kTvKr;
  const std::vector<double> s_grid = geometric_grid(0.02, 0.5, 4);
  auto add_tvkr = [&out](TvKrResult r) {
    out.scalings.push_back(std::move(r.scaling));
    for (auto& b : r.rows) out.bounds.push_back(std::move(b));
  };
  const double p1 = c.p.value_or(10.0), th1 = c.theta.value_or(0.9);
  add_tvkr(cor_3_5_tv_kr(
      builtin_map("x1"), [](double s) { return affine_transform(builtin_map("x1"), 1.0, {s}); }, p1, th1, s_grid, bo));
  add_tvkr(cor_3_5_tv_kr(
      builtin_map("x1sq"), [](double s) { return affine_transform(builtin_map("x1sq"), 1.0 + s, {0.0}); }, p1, th1,
      s_grid, bo));
  const double p2 = c.p.value_or(16.0), th2 = c.theta.value_or(0.45);
  const MapFamily shift_e1 = [](double s) { return affine_transform(builtin_map("x1sq_x2"), 1.0, {s, 0.0}); };
  add_tvkr(cor_4_5_tv_kr(builtin_map("x1sq_x2"), shift_e1, p2, th2, s_grid, bo));
  {
    // Well separated: both distances saturate at 2.
    const SampleBatch batch = sample(GaussianSpace(2), std::min<std::size_t>(c.samples, 100000), c.seed, kTvKr);
    const EmpiricalMeasure a = pushforward(builtin_map("x1sq_x2"), batch);
    const EmpiricalMeasure b = pushforward(shift_e1(40.0), batch);
    const DistanceReport tv = tv_distance(a, b, BinningPolicy::equal_mass());
    const DistanceReport kr = kr_norm_projected(difference(a, b), {{1.0, 0.0}, {0.0, 1.0}});
    BoundCheck row = inequality_check("tv_kr_scaling_kd_separated[x1sq_x2]", {{"s", 40.0}, {"kr", kr.value}}, tv.value,
                                      tv.error_estimate, kr.value, kr.error_estimate);
    row.verdict = Verdict::kReportOnly;
    out.bounds.push_back(row);
  }
  return out;
}

SuiteResult demos_suite(const HarnessConfig& c) {
  SuiteResult out;
  DemoOptions o;
  o.samples = c.samples;
  o.seed = c.seed;
  o.stream = kDemo;
  auto add = [&out](const DemoResult& r) {
    for (const auto& b : r.rows) out.bounds.push_back(b);
  };
  const double p1 = c.p.value_or(10.0);
  const double p2 = c.p.value_or(16.0);
  add(convergence_demo("convergence_1d[perturbed_1d]", perturbed_sequence_1d, lift(builtin_map("x1"), 2), p1, o));
  add(convergence_demo("convergence_2d[perturbed_2d]", perturbed_sequence_2d, builtin_map("x1_x2"), p2, o));
  DemoOptions v = o;
  v.n_values = {1, 2, 5, 10, 20, 50};
  const MapSpec zero("zero", PolynomialMap(2, {{}}));
  const MapSpec zero_x2("zero_x2", PolynomialMap(2, {{}, {Monomial{{0, 1}, 1.0}}}));
  add(convergence_demo("convergence_1d[vanishing_1d]", vanishing_sequence_1d, zero, p1, v));
  add(convergence_demo("convergence_2d[vanishing_2d]", vanishing_sequence_2d, zero_x2, p2, v));
  DemoOptions constant = o;
  constant.n_values = {1, 2, 5};
  constant.fit_count = 1;
  const MapSpec x1 = lift(builtin_map("x1"), 2);
  const DemoResult same = convergence_demo("convergence_1d[constant]", [x1](int) { return x1; }, x1, p1, constant);
  for (const auto& b : same.rows) {
    if (b.name.find("_bound") != std::string::npos) {
      out.bounds.push_back(inequality_check("convergence_constant_tv", b.params, b.lhs, b.lhs_err, 0.0, 0.0));
    }
  }
  return out;
}

SuiteResult forced_fail_suite(const HarnessConfig& c) {
  SuiteResult out;
  const std::size_t n = std::min<std::size_t>(c.samples, 100000);
  const EmpiricalMeasure a = pushforward(builtin_map("x1"), sample(GaussianSpace(1), n, c.seed, kDistanceA));
  const EmpiricalMeasure b = pushforward(builtin_map("x1_shift_1"), sample(GaussianSpace(1), n, c.seed, kDistanceB));
  const DistanceReport r = tv_distance(a, b);
  // Deliberately false: claims the distance is at most half its exact value.
  out.bounds.push_back(inequality_check("forced_fail_fixture", {{"N", double(n)}}, r.value, r.error_estimate,
                                        0.5 * (4.0 * normal_cdf(0.5) - 2.0), 0.0));
  return out;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"identities", "ibp",     "distances", "modulus",
                                                 "besov",      "scaling", "demos",     "all"};
  return names;
}

SuiteResult run_suite(const std::string& suite, const HarnessConfig& config) {
  if (suite == "identities") return identities_suite(config);
  if (suite == "ibp") return ibp_suite(config);
  if (suite == "distances") return distances_suite(config);
  if (suite == "modulus") return modulus_suite(config);
  if (suite == "besov") return besov_suite(config);
  if (suite == "scaling") return scaling_suite(config);
  if (suite == "demos") return demos_suite(config);
  if (suite == "forced-fail") return forced_fail_suite(config);
  if (suite == "all") {
    SuiteResult all;
    for (const auto& name : suite_names()) {
      if (name != "all") all.append(run_suite(name, config));
    }
    return all;
  }
  throw Error(ErrorCode::kConfigParse, "suite: unknown suite '" + suite + "'");
}

}  // namespace gaussreg
