// SPDX-License-Identifier: MIT
#include "gaussreg/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gaussreg/densities.hpp"
#include "gaussreg/error.hpp"
#include "gaussreg/malliavin.hpp"
#include "gaussreg/parallel.hpp"
#include "gaussreg/smoothness.hpp"

namespace gaussreg {
namespace {

MCEstimate paired(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return estimate_from_values(d, "paired difference");
}

void require_scalar(const MapSpec& m, const char* role) {
  if (m.dim_out() != 1) {
    throw Error(ErrorCode::kDimensionMismatch, std::string(role) + " must be real-valued (k = 1)");
  }
}

MapSpec fit_to(const MapSpec& m, std::size_t n) {
  if (m.dim_in() == n) return m;
  if (m.dim_in() > n) throw Error(ErrorCode::kDimensionMismatch, "map " + m.name() + " needs more coordinates");
  return lift(m, n);
}

std::vector<double> default_t_grid() {
  std::vector<double> g;
  for (int j = 0; j <= 12; ++j) g.push_back(0.01 * std::pow(10.0, j / 8.0));
  return g;
}

std::vector<double> profile_radii(const std::vector<double>& t_grid) {
  std::vector<double> r(t_grid);
  const double lo = *std::min_element(t_grid.begin(), t_grid.end()) / 4.0;
  const double hi = *std::max_element(t_grid.begin(), t_grid.end());
  for (double v = hi; v >= lo * (1 - 1e-12); v /= std::pow(10.0, 1.0 / 8.0)) r.push_back(v);
  std::sort(r.begin(), r.end());
  std::vector<double> out;
  for (double v : r) {
    if (out.empty() || v > out.back() * (1 + 1e-9)) out.push_back(v);
  }
  return out;
}

std::vector<std::vector<double>> unique_axes(const std::vector<std::vector<double>>& dirs) {
  std::vector<std::vector<double>> out;
  for (const auto& d : dirs) {
    double n = 0.0;
    for (double v : d) n += v * v;
    n = std::sqrt(n);
    std::vector<double> e(d);
    for (double& v : e) v /= n;
    bool seen = false;
    for (const auto& o : out) {
      double dot = 0.0;
      for (std::size_t i = 0; i < e.size(); ++i) dot += e[i] * o[i];
      seen = seen || std::abs(std::abs(dot) - 1.0) < 1e-12;
    }
    if (!seen) out.push_back(std::move(e));
  }
  return out;
}

std::vector<std::vector<double>> coordinate_axes(std::size_t k) {
  std::vector<std::vector<double>> out;
  for (std::size_t a = 0; a < k; ++a) {
    std::vector<double> e(k, 0.0);
    e[a] = 1.0;
    out.push_back(e);
  }
  return out;
}

/// |grad f| (k = 1) or Delta_f (k >= 2) at every batch point.
std::vector<double> nondegeneracy(const MapSpec& f, const SampleBatch& batch) {
  std::vector<double> w(batch.size());
  parallel_for(batch.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto x = batch.point(i);
      if (f.dim_out() == 1) {
        w[i] = f.jet(0, x).gradient.norm();
      } else {
        w[i] = malliavin_at(f, x).delta;
      }
    }
  });
  return w;
}

std::string label(const std::string& check, const std::string& what) { return check + "[" + what + "]"; }

Verdict scaling_verdict(double fitted, double predicted, double r2, double spread) {
  const bool ok = fitted >= predicted - kExponentSlack && r2 >= kMinRSquared && spread <= kMaxConstantSpread;
  return ok ? Verdict::kPass : Verdict::kFail;
}

/// Exact Kantorovich norm of a balanced 1-D signed measure: integral of |F|.
double kantorovich_1d(const EmpiricalMeasure& omega) {
  std::vector<std::pair<double, double>> atoms(omega.size());
  for (std::size_t i = 0; i < omega.size(); ++i) atoms[i] = {omega.point(i)[0], omega.weight(i)};
  std::sort(atoms.begin(), atoms.end());
  double cum = 0.0, comp = 0.0, total = 0.0;
  for (std::size_t i = 0; i + 1 < atoms.size(); ++i) {
    const double y = atoms[i].second - comp;
    const double t = cum + y;
    comp = (t - cum) - y;
    cum = t;
    total += std::abs(cum) * (atoms[i + 1].first - atoms[i].first);
  }
  return total;
}

}  // namespace

std::string_view verdict_name(Verdict v) noexcept {
  switch (v) {
    case Verdict::kPass: return "pass";
    case Verdict::kPassWithinError: return "pass-within-error";
    case Verdict::kFail: return "fail";
    case Verdict::kVacuous: return "vacuous";
    case Verdict::kReportOnly: return "report-only";
  }
  return "fail";
}

BoundCheck inequality_check(std::string name, Params params, double lhs, double lhs_err, double rhs,
                            double rhs_err) {
  BoundCheck b{std::move(name), std::move(params), lhs, lhs_err, rhs, rhs_err, Verdict::kFail, rhs - lhs};
  if (!std::isfinite(lhs) || !std::isfinite(rhs)) return b;
  if (lhs <= rhs + 1e-12 * std::max(std::abs(lhs), std::abs(rhs))) {
    b.verdict = Verdict::kPass;
  } else if (lhs <= rhs + 4.0 * std::hypot(lhs_err, rhs_err)) {
    b.verdict = Verdict::kPassWithinError;
  }
  return b;
}

BoundCheck identity_check(std::string name, Params params, double lhs, double lhs_err, double rhs, double rhs_err,
                          double difference_err) {
  params.emplace_back("paired_err", difference_err);
  const double gap = std::abs(lhs - rhs);
  const double floor = 1e-12 * std::max(std::abs(lhs), std::abs(rhs));
  const double tol = 4.0 * difference_err + floor;
  BoundCheck b{std::move(name), std::move(params), lhs, lhs_err, rhs, rhs_err, Verdict::kFail, tol - gap};
  if (!std::isfinite(gap)) return b;
  if (gap <= floor) {
    b.verdict = Verdict::kPass;
  } else if (gap <= tol) {
    b.verdict = Verdict::kPassWithinError;
  }
  return b;
}

LogLogFit log_log_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw Error(ErrorCode::kDimensionMismatch, "fit inputs differ in length");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  if (lx.size() < 3) throw Error(ErrorCode::kDegenerateFit, "fewer than 3 positive points for a log-log fit");
  const double n = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw Error(ErrorCode::kDegenerateFit, "log-log fit with a constant abscissa");
  LogLogFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

double constant_envelope_spread(const std::vector<double>& x, const std::vector<double>& y) {
  double env = 0.0, hi = 0.0, lo = 0.0;
  bool first = true;
  for (std::size_t i = x.size(); i-- > 0;) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
    env = std::max(env, y[i] / x[i]);
    if (first) {
      lo = env;
      first = false;
    }
    hi = env;
  }
  return first ? 1.0 : hi / lo;
}

double besov_exponent_1d(double p, double theta) { return p * theta / (2.0 * p + theta); }
double tv_kr_exponent_1d(double p, double theta) { return p * theta / ((2.0 + theta) * p + theta); }
double besov_exponent_kd(double p, double theta, std::size_t k) {
  return p * theta / (2.0 * p + (4.0 * static_cast<double>(k) - 1.0) * theta);
}

std::vector<BoundCheck> ibp_identity_1d(const MapSpec& f_in, const MapSpec& g_in, const std::vector<double>& eps,
                                        const SampleBatch& batch) {
  require_scalar(f_in, "f");
  require_scalar(g_in, "g");
  for (double e : eps) {
    if (!(e > 0.0)) throw Error(ErrorCode::kInvalidArgument, "epsilon must be positive");
  }
  const MapSpec f = fit_to(f_in, batch.dim());
  const MapSpec g = fit_to(g_in, batch.dim());
  const std::size_t n = batch.size();
  std::vector<std::vector<double>> lhs(eps.size(), std::vector<double>(n)), rhs(lhs);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto x = batch.point(i);
      const Jet2 jf = f.jet(0, x);
      const Jet2 jg = g.jet(0, x);
      const double grad2 = jf.gradient.squaredNorm();
      const double quad = jf.gradient.dot(jf.hessian * jf.gradient);
      const double cross = jg.gradient.dot(jf.gradient);
      const double lf = ornstein_uhlenbeck(jf, x);
      for (std::size_t e = 0; e < eps.size(); ++e) {
        const double s = grad2 + eps[e] * eps[e];
        lhs[e][i] = cross / s;
        rhs[e][i] = -jg.value * (lf / s - 2.0 * quad / (s * s));
      }
    }
  });
  std::vector<BoundCheck> rows;
  for (std::size_t e = 0; e < eps.size(); ++e) {
    const MCEstimate l = estimate_from_values(lhs[e], "ibp lhs");
    const MCEstimate r = estimate_from_values(rhs[e], "ibp rhs");
    rows.push_back(identity_check(label("ibp_1d", f.name() + "," + g.name()),
                                  {{"eps", eps[e]}, {"n", static_cast<double>(batch.dim())},
                                   {"N", static_cast<double>(n)}},
                                  l.mean, l.std_error, r.mean, r.std_error, paired(lhs[e], rhs[e]).std_error));
  }
  return rows;
}

BoundCheck ibp_identity_1d(const MapSpec& f, const MapSpec& g, double epsilon, const SampleBatch& batch) {
  return ibp_identity_1d(f, g, std::vector<double>{epsilon}, batch).front();
}

std::vector<BoundCheck> ibp_identity_kd(const MapSpec& f_in, const MapSpec& u_in, const MapSpec& v_in, std::size_t j,
                                        const std::vector<double>& eps, const SampleBatch& batch) {
  require_scalar(u_in, "u");
  require_scalar(v_in, "v");
  if (j >= f_in.dim_out()) throw Error(ErrorCode::kInvalidArgument, "component index out of range");
  for (double e : eps) {
    if (!(e > 0.0)) throw Error(ErrorCode::kInvalidArgument, "epsilon must be positive");
  }
  const MapSpec f = fit_to(f_in, batch.dim());
  const MapSpec u = fit_to(u_in, batch.dim());
  const MapSpec v = fit_to(v_in, batch.dim());
  const std::size_t n = batch.size();
  std::vector<std::vector<double>> lhs(eps.size(), std::vector<double>(n)), rhs(lhs);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    std::vector<Jet2> jets(f.dim_out());
    for (std::size_t i = begin; i < end; ++i) {
      const auto x = batch.point(i);
      for (std::size_t c = 0; c < f.dim_out(); ++c) jets[c] = f.jet(c, x);
      const MalliavinSample m = malliavin_from_jets(jets);
      const Jet2 ju = u.jet(0, x);
      const Jet2 jv = v.jet(0, x);
      const Eigen::VectorXd& gj = jets[j].gradient;
      const double cross = ju.gradient.dot(gj) * jv.value;
      const double lf = jv.value * ornstein_uhlenbeck(jets[j], x);
      const double along = jv.value * gj.dot(m.grad_delta);
      const double vterm = gj.dot(jv.gradient);
      for (std::size_t e = 0; e < eps.size(); ++e) {
        const double d = m.delta + eps[e];
        lhs[e][i] = cross / d;
        rhs[e][i] = -ju.value * ((lf + vterm) / d - along / (d * d));
      }
    }
  });
  std::vector<BoundCheck> rows;
  for (std::size_t e = 0; e < eps.size(); ++e) {
    const MCEstimate l = estimate_from_values(lhs[e], "ibp lhs");
    const MCEstimate r = estimate_from_values(rhs[e], "ibp rhs");
    rows.push_back(identity_check(label("ibp_kd", f.name() + "," + u.name() + "," + v.name()),
                                  {{"eps", eps[e]}, {"j", static_cast<double>(j)},
                                   {"k", static_cast<double>(f.dim_out())}, {"N", static_cast<double>(n)}},
                                  l.mean, l.std_error, r.mean, r.std_error, paired(lhs[e], rhs[e]).std_error));
  }
  return rows;
}

BoundCheck ibp_identity_kd(const MapSpec& f, const MapSpec& u, const MapSpec& v, std::size_t j, double epsilon,
                           const SampleBatch& batch) {
  return ibp_identity_kd(f, u, v, j, std::vector<double>{epsilon}, batch).front();
}

std::vector<BoundCheck> thm_2_1_check(const std::string& density, const std::vector<double>& h_grid) {
  std::vector<BoundCheck> rows;
  for (double h : h_grid) {
    const double a = std::abs(h);
    if (a == 0.0) {
      rows.push_back(inequality_check(label("shift_tv_vs_modulus", density), {{"h", 0.0}}, 0.0, 0.0, 0.0, 0.0));
      continue;
    }
    const SigmaEstimate half = sigma_lower_oracle(density, a / 2.0);
    const SigmaEstimate full = sigma_lower_oracle(density, a);
    if (!half.converged || !full.converged) {
      throw Error(ErrorCode::kDegenerateFit, "modulus of " + density + " did not converge under grid refinement");
    }
    const double tv = tv_shift_oracle_1d(density, a);
    rows.push_back(inequality_check(label("shift_tv_vs_modulus", density),
                                    {{"h", a}, {"t", a / 2.0}, {"cells", static_cast<double>(half.cells)}, {"change", half.last_change}}, tv, 0.0,
                                    2.0 * half.lower, 2.0 * half.lower * half.last_change));
    double sup_tv = 0.0;
    for (int j = 1; j <= 32; ++j) sup_tv = std::max(sup_tv, tv_shift_oracle_1d(density, a * j / 32.0));
    rows.push_back(inequality_check(label("modulus_vs_shift_tv", density),
                                    {{"t", a}, {"k", 1.0}, {"cells", static_cast<double>(full.cells)}, {"change", full.last_change}}, full.lower,
                                    full.lower * full.last_change, 6.0 * sup_tv, 0.0));
  }
  return rows;
}

std::vector<double> nondegeneracy_values(const MapSpec& f, const SampleBatch& batch) {
  if (f.dim_in() != batch.dim()) throw Error(ErrorCode::kDimensionMismatch, "map and batch dimensions differ");
  return nondegeneracy(f, batch);
}

DistanceReport kr_norm_1d(const EmpiricalMeasure& omega, std::size_t support_limit) {
  if (omega.dim() != 1) throw Error(ErrorCode::kDimensionMismatch, "kr_norm_1d needs a measure on R");
  LpOptions o;
  o.support_limit = support_limit;
  return kr_norm(omega, o);
}

DistanceReport kr_norm_projected(const EmpiricalMeasure& omega, const std::vector<std::vector<double>>& directions,
                                 std::size_t support_limit) {
  DistanceReport best;
  best.method = "projected-kr";
  bool any = false;
  for (const auto& e : unique_axes(directions)) {
    const DistanceReport r = kr_norm_1d(project(omega, e), support_limit);
    if (!any || r.value > best.value) {
      best.value = r.value;
      best.error_estimate = r.error_estimate;
      best.support_size = r.support_size;
      best.coarsened = r.coarsened;
      best.resolution = r.resolution;
      any = true;
    }
  }
  if (!any) throw Error(ErrorCode::kInvalidArgument, "no directions given");
  best.refined_value = best.value;
  return best;
}

std::vector<BoundCheck> lemma_2_1_check(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                                        const std::vector<double>& eps_grid, const SignedLaw1d* exact,
                                        bool kantorovich) {
  if (mu.dim() != nu.dim()) throw Error(ErrorCode::kDimensionMismatch, "measures live in different spaces");
  const std::size_t k = mu.dim();
  if (exact && k != 1) throw Error(ErrorCode::kInvalidArgument, "an exact signed law is only available in 1-D");
  const double rk = std::sqrt(static_cast<double>(k));
  const EmpiricalMeasure omega = difference(mu, nu);
  double tv = 0.0, tv_err = 0.0;
  if (exact) {
    tv = exact->total_variation;
  } else {
    const DistanceReport r = tv_distance(mu, nu, BinningPolicy::equal_mass());
    tv = r.value;
    tv_err = r.error_estimate;
  }
  double norm = 0.0, norm_err = 0.0;
  if (kantorovich) {
    if (k == 1) {
      norm = kantorovich_1d(omega);
    } else {
      const DistanceReport r = kantorovich_norm(omega);
      norm = r.value;
      norm_err = r.error_estimate;
    }
  } else {
    const DistanceReport r = k == 1 ? kr_norm_1d(omega) : kr_norm(omega);
    norm = r.value;
    norm_err = r.error_estimate;
  }
  const std::string name = kantorovich ? "tv_sigma_k_bound" : "tv_sigma_kr_bound";
  const std::string mode = exact ? "exact" : (k == 1 ? "sample" : "sample-kd");
  std::vector<BoundCheck> rows;
  for (double eps : eps_grid) {
    SigmaEstimate s;
    if (exact) {
      s = sigma_lower_from_cdf(exact->cdf, exact->lo, exact->hi, exact->extra_edges, eps);
      if (!s.converged) throw Error(ErrorCode::kDegenerateFit, "modulus of the signed law did not converge");
    } else if (const EmpiricalMeasure merged = merge_atoms(omega); !merged.empty()) {
      s = sigma_lower(merged, eps, sigma_directions(k, 1));
    }
    const double rhs = 3.0 * rk * s.lower + rk * norm / eps;
    const double rhs_err = 3.0 * rk * s.lower * s.last_change + rk * norm_err / eps;
    BoundCheck b = inequality_check(label(name, mode),
                                    {{"eps", eps}, {"k", static_cast<double>(k)}, {"sigma", s.lower},
                                     {"norm", norm}},
                                    tv, tv_err, rhs, rhs_err);
    if (!exact) b.verdict = Verdict::kReportOnly;
    rows.push_back(std::move(b));
  }
  return rows;
}

std::vector<BoundCheck> kantorovich_remark_check(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                                                 const std::vector<double>& eps_grid, const SignedLaw1d* exact) {
  if (std::abs(mu.total_mass() - nu.total_mass()) > 1e-10) {
    throw Error(ErrorCode::kMassNotBalanced, "Kantorovich norm needs measures of equal mass");
  }
  return lemma_2_1_check(mu, nu, eps_grid, exact, true);
}

ShiftProfile shift_profile(const EmpiricalMeasure& mu, const std::vector<double>& radii,
                           const std::vector<std::vector<double>>& directions, const BinningPolicy& policy) {
  ShiftProfile p;
  p.radii = radii;
  p.tv.assign(radii.size(), 0.0);
  p.err.assign(radii.size(), 0.0);
  for (const auto& e : unique_axes(directions)) {
    if (e.size() != mu.dim()) throw Error(ErrorCode::kDimensionMismatch, "direction has wrong length");
    for (std::size_t i = 0; i < radii.size(); ++i) {
      std::vector<double> h(e);
      for (double& v : h) v *= radii[i];
      const DistanceReport r = tv_distance(shift(mu, h), mu, policy);
      if (r.value > p.tv[i]) {
        p.tv[i] = r.value;
        p.err[i] = r.error_estimate;
      }
    }
  }
  return p;
}

namespace {

ScalingResult modulus_scaling(const std::string& check, const MapSpec& f, double exponent, double second_coeff,
                              const SweepOptions& o) {
  const std::size_t k = f.dim_out();
  const SampleBatch batch = sample(GaussianSpace(f.dim_in()), o.samples, o.seed, o.stream);
  const std::vector<double> w = nondegeneracy(f, batch);
  const std::vector<double> t_grid = o.t_grid.empty() ? default_t_grid() : o.t_grid;
  ScalingResult res;
  ScalingCheck& sc = res.scaling;
  sc.name = label(check, f.name());
  sc.predicted_exponent = 1.0;
  sc.grid = t_grid;

  std::vector<double> u(t_grid.size()), u_err(t_grid.size());
  bool vacuous = true;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const UGammaEstimate est = u_gamma(w, std::sqrt(t_grid[i]));
    u[i] = est.estimate.mean;
    u_err[i] = est.estimate.std_error;
    vacuous = vacuous && u[i] >= kVacuityLevel;
    sc.x.push_back(std::pow(u[i], exponent));
  }
  sc.params = {{"exponent", exponent}, {"k", static_cast<double>(k)}, {"N", static_cast<double>(o.samples)},
               {"t_min", t_grid.front()}, {"t_max", t_grid.back()}};
  if (vacuous) {
    sc.verdict = Verdict::kVacuous;
    sc.y.assign(t_grid.size(), 0.0);
    return res;
  }

  const EmpiricalMeasure mu = pushforward(f, batch);
  const auto dirs = sigma_directions(k, o.seed, o.random_directions);
  const std::vector<double> radii = profile_radii(t_grid);
  const ShiftProfile prof = shift_profile(mu, radii, dirs);
  const double factor = 6.0 * static_cast<double>(k);
  std::vector<double> y_err(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    double best = 0.0, err = 0.0;
    for (std::size_t r = 0; r < radii.size() && radii[r] <= t_grid[i] * (1 + 1e-9); ++r) {
      if (prof.tv[r] > best) {
        best = prof.tv[r];
        err = prof.err[r];
      }
    }
    sc.y.push_back(factor * best);
    y_err[i] = factor * err;
  }
  const LogLogFit fit = log_log_fit(sc.x, sc.y);
  sc.fitted_exponent = fit.slope;
  sc.r_squared = fit.r_squared;
  sc.constant_spread = constant_envelope_spread(sc.x, sc.y);
  sc.params.emplace_back("intercept", fit.intercept);
  sc.params.emplace_back("directions", static_cast<double>(unique_axes(dirs).size()));
  sc.verdict = scaling_verdict(sc.fitted_exponent, sc.predicted_exponent, sc.r_squared, sc.constant_spread);

  double c_fit = 0.0;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    c_fit = std::max(c_fit, (sc.y[i] - second_coeff * u[i]) / sc.x[i]);
  }
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double rhs = c_fit * sc.x[i] + second_coeff * u[i];
    res.bounds.push_back(inequality_check(label(check + "_additive", f.name()),
                                          {{"t", t_grid[i]}, {"eps", std::sqrt(t_grid[i])}, {"u", u[i]},
                                           {"c_fit", c_fit}, {"fitted_constant", 1.0}},
                                          sc.y[i], y_err[i], rhs, second_coeff * u_err[i]));
  }
  if (o.sandwich) {
    const auto lower_dirs = sigma_directions(k, o.seed);
    for (std::size_t i : {std::size_t{0}, t_grid.size() / 2, t_grid.size() - 1}) {
      const SigmaEstimate lo = sigma_lower(mu, t_grid[i], lower_dirs);
      res.bounds.push_back(inequality_check(label("sigma_sandwich", f.name()),
                                            {{"t", t_grid[i]}, {"cells", static_cast<double>(lo.cells)}}, lo.lower,
                                            0.0, sc.y[i], y_err[i]));
    }
  }
  return res;
}

}  // namespace

ScalingResult thm_3_1_scaling(const MapSpec& f, double p, const SweepOptions& options) {
  require_scalar(f, "f");
  if (!(p > 1.0)) throw Error(ErrorCode::kInvalidArgument, "p must exceed 1");
  ScalingResult r = modulus_scaling("modulus_scaling_1d", f, 1.0 - 1.0 / p, 4.0, options);
  r.scaling.params.emplace_back("p", p);
  return r;
}

ScalingResult thm_4_1_scaling(const MapSpec& f, double p, const SweepOptions& options) {
  const double k = static_cast<double>(f.dim_out());
  if (f.dim_out() < 2) throw Error(ErrorCode::kInvalidArgument, "multidimensional scaling needs k >= 2");
  if (!(p > 4.0 * k - 1.0)) throw Error(ErrorCode::kInvalidArgument, "p must exceed 4k - 1");
  ScalingResult r = modulus_scaling("modulus_scaling_kd", f, 1.0 - (4.0 * k - 1.0) / p, 1.0, options);
  r.scaling.params.emplace_back("p", p);
  return r;
}

MCEstimate negative_moment(const std::vector<double>& w, double theta) {
  if (!(theta > 0.0)) throw Error(ErrorCode::kInvalidArgument, "theta must be positive");
  if (w.size() < 16) throw Error(ErrorCode::kInvalidArgument, "too few samples for a moment check");
  std::vector<double> v(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(w[i] > 0.0)) throw Error(ErrorCode::kMomentDiverged, "nondegeneracy vanishes at a sample point");
    v[i] = std::pow(w[i], -theta);
  }
  // Hill estimate of the tail index of v on its top 1% order statistics;
  // E v is finite only for an index above 1.
  const std::size_t top = std::max<std::size_t>(8, v.size() / 100);
  std::vector<double> sorted(v);
  std::nth_element(sorted.begin(), sorted.end() - static_cast<std::ptrdiff_t>(top + 1), sorted.end());
  const double threshold = *(sorted.end() - static_cast<std::ptrdiff_t>(top + 1));
  double log_excess = 0.0;
  for (auto it = sorted.end() - static_cast<std::ptrdiff_t>(top); it != sorted.end(); ++it) {
    log_excess += std::log(*it / threshold);
  }
  const double tail_index = log_excess > 0.0 ? static_cast<double>(top) / log_excess : HUGE_VAL;
  const std::span<const double> all(v);
  const double early = estimate_from_values(all.first(v.size() / 16)).mean;
  const MCEstimate m3 = estimate_from_values(all, "negative moment");
  if (tail_index < 1.0) {
    std::ostringstream msg;
    msg << "negative moment has tail index " << tail_index << " < 1 (running mean " << early << " at N/16, "
        << m3.mean << " at N)";
    throw Error(ErrorCode::kMomentDiverged, msg.str());
  }
  return m3;
}

namespace {

std::vector<double> default_h_grid() { return geometric_grid(0.02, 0.632, 8); }

std::vector<ScalingCheck> besov_check(const std::string& check, const MapSpec& f,
                                      const std::vector<std::pair<double, double>>& grid_ptheta,
                                      const std::function<double(double, double)>& predicted, const BesovOptions& o) {
  const SampleBatch batch = sample(GaussianSpace(f.dim_in()), o.samples, o.seed, o.stream);
  const std::vector<double> w = nondegeneracy(f, batch);
  std::vector<MCEstimate> moments;
  for (const auto& [p, theta] : grid_ptheta) moments.push_back(negative_moment(w, theta));
  const EmpiricalMeasure mu = pushforward(f, batch);
  const std::vector<double> grid = o.h_grid.empty() ? default_h_grid() : o.h_grid;
  std::vector<BesovFit> fits;
  for (const auto& e : coordinate_axes(f.dim_out())) fits.push_back(besov_fit(mu, grid, e));
  std::size_t worst = 0;
  for (std::size_t i = 1; i < fits.size(); ++i) {
    if (fits[i].alpha_hat < fits[worst].alpha_hat) worst = i;
  }
  std::vector<ScalingCheck> out;
  for (std::size_t i = 0; i < grid_ptheta.size(); ++i) {
    const auto [p, theta] = grid_ptheta[i];
    ScalingCheck sc;
    sc.name = label(check, f.name());
    sc.predicted_exponent = predicted(p, theta);
    sc.grid = grid;
    sc.params = {{"p", p}, {"theta", theta}, {"b", moments[i].mean}, {"b_err", moments[i].std_error},
                 {"N", static_cast<double>(o.samples)}};
    for (std::size_t a = 0; a < fits.size(); ++a) {
      sc.params.emplace_back("alpha_axis" + std::to_string(a), fits[a].alpha_hat);
    }
    sc.fitted_exponent = fits[worst].alpha_hat;
    sc.r_squared = fits[worst].r_squared;
    sc.x = fits[worst].h_values;
    sc.y = fits[worst].tv_values;
    sc.verdict = scaling_verdict(sc.fitted_exponent, sc.predicted_exponent, sc.r_squared, 1.0);
    out.push_back(std::move(sc));
  }
  return out;
}

TvKrResult tv_kr_check(const std::string& check, const MapSpec& f, const MapFamily& g, double p, double theta,
                       double predicted, const std::vector<double>& s_grid, const BesovOptions& o) {
  const std::size_t k = f.dim_out();
  const SampleBatch batch = sample(GaussianSpace(f.dim_in()), o.samples, o.seed, o.stream);
  const MCEstimate b = negative_moment(nondegeneracy(f, batch), theta);
  const EmpiricalMeasure mu = pushforward(f, batch);
  TvKrResult res;
  ScalingCheck& sc = res.scaling;
  sc.name = label(check, f.name());
  sc.predicted_exponent = predicted;
  sc.grid = s_grid;
  sc.params = {{"p", p}, {"theta", theta}, {"b", b.mean}, {"N", static_cast<double>(o.samples)}};
  const auto axes = coordinate_axes(k);
  std::vector<double> fx, fy;
  for (double s : s_grid) {
    const MapSpec gs = g(s);
    if (gs.dim_in() != f.dim_in() || gs.dim_out() != k) {
      throw Error(ErrorCode::kDimensionMismatch, "family member differs in shape from f");
    }
    const EmpiricalMeasure nu = pushforward(gs, batch);
    const DistanceReport tv = tv_distance(nu, mu, BinningPolicy::equal_mass());
    const EmpiricalMeasure omega = difference(nu, mu);
    const DistanceReport kr = k == 1 ? kr_norm_1d(omega) : kr_norm_projected(omega, axes);
    BoundCheck row = inequality_check(label(check + "_point", gs.name()),
                                      {{"s", s}, {"kr", kr.value}, {"kr_err", kr.error_estimate}}, tv.value,
                                      tv.error_estimate, kr.value, kr.error_estimate);
    row.verdict = Verdict::kReportOnly;
    res.rows.push_back(std::move(row));
    sc.x.push_back(kr.value);
    sc.y.push_back(tv.value);
    if (tv.value >= 5.0 * tv.error_estimate && kr.value >= 5.0 * kr.error_estimate) {
      fx.push_back(kr.value);
      fy.push_back(tv.value);
    }
  }
  const LogLogFit fit = log_log_fit(fx, fy);
  sc.fitted_exponent = fit.slope;
  sc.r_squared = fit.r_squared;
  sc.params.emplace_back("used", static_cast<double>(fx.size()));
  sc.verdict = scaling_verdict(sc.fitted_exponent, sc.predicted_exponent, sc.r_squared, 1.0);
  return res;
}

}  // namespace

std::vector<ScalingCheck> cor_3_4_besov(const MapSpec& f, const std::vector<std::pair<double, double>>& grid,
                                        const BesovOptions& options) {
  require_scalar(f, "f");
  for (const auto& [p, theta] : grid) {
    if (!(p > 1.0)) throw Error(ErrorCode::kInvalidArgument, "p must exceed 1");
  }
  return besov_check("besov_lower_1d", f, grid, besov_exponent_1d, options);
}

std::vector<ScalingCheck> cor_4_4_besov(const MapSpec& f, const std::vector<std::pair<double, double>>& grid,
                                        const BesovOptions& options) {
  const std::size_t k = f.dim_out();
  if (k < 2) throw Error(ErrorCode::kInvalidArgument, "multidimensional Besov check needs k >= 2");
  for (const auto& [p, theta] : grid) {
    if (!(p > 4.0 * static_cast<double>(k) - 1.0)) throw Error(ErrorCode::kInvalidArgument, "p must exceed 4k - 1");
  }
  return besov_check("besov_lower_kd", f, grid, [k](double p, double th) { return besov_exponent_kd(p, th, k); },
                     options);
}

ScalingCheck cor_3_4_besov(const MapSpec& f, double p, double theta, const BesovOptions& options) {
  return cor_3_4_besov(f, {{p, theta}}, options).front();
}

ScalingCheck cor_4_4_besov(const MapSpec& f, double p, double theta, const BesovOptions& options) {
  return cor_4_4_besov(f, {{p, theta}}, options).front();
}

TvKrResult cor_3_5_tv_kr(const MapSpec& f, const MapFamily& g, double p, double theta,
                         const std::vector<double>& s_grid, const BesovOptions& options) {
  require_scalar(f, "f");
  return tv_kr_check("tv_kr_scaling_1d", f, g, p, theta, tv_kr_exponent_1d(p, theta), s_grid, options);
}

TvKrResult cor_4_5_tv_kr(const MapSpec& f, const MapFamily& g, double p, double theta,
                         const std::vector<double>& s_grid, const BesovOptions& options) {
  const std::size_t k = f.dim_out();
  if (k < 2) throw Error(ErrorCode::kInvalidArgument, "multidimensional TV-KR check needs k >= 2");
  const double a = besov_exponent_kd(p, theta, k);
  return tv_kr_check("tv_kr_scaling_kd", f, g, p, theta, a / (1.0 + a), s_grid, options);
}

DemoResult convergence_demo(const std::string& name, const std::function<MapSpec(int)>& sequence,
                            const MapSpec& limit, double p, const DemoOptions& o) {
  const std::size_t k = limit.dim_out();
  const double kd = static_cast<double>(k);
  const double e = k == 1 ? 1.0 - 1.0 / p : 1.0 - (4.0 * kd - 1.0) / p;
  if (!(e > 0.0)) throw Error(ErrorCode::kInvalidArgument, "exponent of the composite bound must be positive");
  if (o.n_values.empty()) throw Error(ErrorCode::kInvalidArgument, "no sequence indices given");
  const SampleBatch batch = sample(GaussianSpace(limit.dim_in()), o.samples, o.seed, o.stream);
  const EmpiricalMeasure nu = pushforward(limit, batch);
  const auto axes = coordinate_axes(k);

  const std::size_t m = o.n_values.size();
  std::vector<double> tv(m), tv_err(m), kr(m), kr_err(m);
  std::vector<std::vector<double>> tails(m);
  for (std::size_t i = 0; i < m; ++i) {
    const MapSpec fn = sequence(o.n_values[i]);
    if (fn.dim_in() != limit.dim_in() || fn.dim_out() != k) {
      throw Error(ErrorCode::kDimensionMismatch, "sequence member differs in shape from the limit");
    }
    const EmpiricalMeasure mu = pushforward(fn, batch);
    const DistanceReport t = tv_distance(mu, nu, BinningPolicy::equal_mass());
    tv[i] = t.value;
    tv_err[i] = t.error_estimate;
    const EmpiricalMeasure omega = difference(mu, nu);
    const DistanceReport r = k == 1 ? kr_norm_1d(omega) : kr_norm_projected(omega, axes);
    kr[i] = r.value;
    kr_err[i] = r.error_estimate;
    tails[i] = nondegeneracy(fn, batch);
    std::sort(tails[i].begin(), tails[i].end());
  }
  const double count = static_cast<double>(o.samples);
  auto delta = [&](double eps) {
    double d = 0.0;
    for (const auto& t : tails) {
      d = std::max(d, static_cast<double>(std::upper_bound(t.begin(), t.end(), eps) - t.begin()) / count);
    }
    return d;
  };

  DemoResult res;
  std::vector<double> shape(m), deltas(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double kr_pos = std::max(kr[i], 0.0);
    deltas[i] = delta(std::pow(kr_pos, 0.125));
    shape[i] = std::pow(deltas[i], e) + std::pow(kr_pos, e / 8.0);
    res.delta_max = std::max(res.delta_max, deltas[i]);
  }
  res.vacuous = res.delta_max >= kVacuityLevel;
  const std::size_t fit = std::min(o.fit_count, m);
  double c_fit = 0.0;
  for (std::size_t i = 0; i < fit; ++i) {
    if (shape[i] > 0.0) c_fit = std::max(c_fit, tv[i] / shape[i]);
  }
  for (std::size_t i = 0; i < m; ++i) {
    const Params params{{"n", static_cast<double>(o.n_values[i])}, {"kr", kr[i]},       {"kr_err", kr_err[i]},
                        {"delta", deltas[i]},                       {"c_fit", c_fit},    {"p", p},
                        {"fit_point", i < fit ? 1.0 : 0.0}};
    BoundCheck b = inequality_check(label(name + "_bound", "n=" + std::to_string(o.n_values[i])), params, tv[i],
                                    tv_err[i], c_fit * shape[i], 0.0);
    if (i < fit) b.verdict = Verdict::kReportOnly;
    if (res.vacuous) b.verdict = Verdict::kVacuous;
    res.rows.push_back(std::move(b));
    if (i > 0) {
      BoundCheck mono = inequality_check(label(name + "_monotone", "n=" + std::to_string(o.n_values[i])),
                                         {{"n", static_cast<double>(o.n_values[i])},
                                          {"n_prev", static_cast<double>(o.n_values[i - 1])}},
                                         tv[i], tv_err[i], tv[i - 1], tv_err[i - 1]);
      if (res.vacuous) mono.verdict = Verdict::kVacuous;
      res.rows.push_back(std::move(mono));
    }
  }
  BoundCheck last = inequality_check(label(name + "_limit", "n=" + std::to_string(o.n_values.back())),
                                     {{"n", static_cast<double>(o.n_values.back())}}, tv.back(), tv_err.back(), 0.02,
                                     0.0);
  if (res.vacuous) last.verdict = Verdict::kVacuous;
  res.rows.push_back(std::move(last));
  return res;
}

void SuiteResult::append(const SuiteResult& other) {
  bounds.insert(bounds.end(), other.bounds.begin(), other.bounds.end());
  scalings.insert(scalings.end(), other.scalings.begin(), other.scalings.end());
}

bool SuiteResult::failed() const {
  for (const auto& b : bounds) {
    if (b.verdict == Verdict::kFail) return true;
  }
  for (const auto& s : scalings) {
    if (s.verdict == Verdict::kFail) return true;
  }
  return false;
}

}  // namespace gaussreg
