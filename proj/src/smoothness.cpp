// SPDX-License-Identifier: MIT
#include "gaussreg/smoothness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gaussreg/densities.hpp"
#include "gaussreg/error.hpp"
#include "gaussreg/network_simplex.hpp"
#include "gaussreg/rng.hpp"

namespace gaussreg {
namespace {

void check_g(std::span<const double> g, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must be positive and finite");
  }
  if (g.empty()) throw Error(ErrorCode::kInvalidArgument, "no samples of g");
  for (double v : g) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFiniteValue, "g is non-finite");
    if (v < 0.0) throw Error(ErrorCode::kInvalidArgument, "g must be nonnegative");
  }
}

std::vector<double> merge_edges(std::vector<double> edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

std::vector<double> uniform_cells(double lo, double hi, std::size_t cells) {
  std::vector<double> e(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) {
    e[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(cells);
  }
  e.back() = hi;
  return e;
}

/// Sorted 1-D atoms with absolute-mass prefix sums for quantile lookup.
struct SortedLine {
  std::vector<double> x, w, abs_cum;

  explicit SortedLine(const EmpiricalMeasure& line) {
    std::vector<std::pair<double, double>> atoms(line.size());
    for (std::size_t i = 0; i < line.size(); ++i) atoms[i] = {line.point(i)[0], line.weight(i)};
    std::sort(atoms.begin(), atoms.end());
    x.reserve(atoms.size());
    w.reserve(atoms.size());
    abs_cum.reserve(atoms.size());
    double run = 0.0;
    for (const auto& [pos, weight] : atoms) {
      x.push_back(pos);
      w.push_back(weight);
      run += std::abs(weight);
      abs_cum.push_back(run);
    }
  }

  double quantile(double p) const {
    const double target = p * abs_cum.back();
    const auto it = std::lower_bound(abs_cum.begin(), abs_cum.end(), target);
    return x[std::min<std::size_t>(static_cast<std::size_t>(it - abs_cum.begin()), x.size() - 1)];
  }

  std::vector<double> edges(std::size_t cells, double t) const {
    const double lo = quantile(0.001), hi = quantile(0.999);
    std::vector<double> e = hi > lo ? uniform_cells(lo, hi, cells) : std::vector<double>{};
    for (std::size_t j = 1; j < cells; ++j) e.push_back(quantile(static_cast<double>(j) / static_cast<double>(cells)));
    e.push_back(x.front());
    e.push_back(x.back());
    e = merge_edges(std::move(e));
    if (e.size() < 2) e = {x.front() - t, x.front() + t};  // single point: room for one full ramp
    return e;
  }

  std::vector<double> masses(const std::vector<double>& edges) const {
    std::vector<double> m(edges.size() - 1, 0.0);
    std::size_t c = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] < edges.front() || x[i] > edges.back()) continue;
      while (c + 2 < edges.size() && x[i] >= edges[c + 1]) ++c;
      m[c] += w[i];
    }
    return m;
  }
};

std::size_t auto_cells(std::size_t n) {
  const double c = std::round(0.5 * std::cbrt(static_cast<double>(n)));
  return static_cast<std::size_t>(std::clamp(c, 8.0, 512.0));
}

bool same_axis(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  return std::abs(std::abs(dot) - 1.0) < 1e-12;
}

std::vector<double> normalized(std::span<const double> e) {
  double n = 0.0;
  for (double v : e) n += v * v;
  n = std::sqrt(n);
  if (!(n > 0.0)) throw Error(ErrorCode::kInvalidArgument, "direction must be nonzero");
  std::vector<double> out(e.begin(), e.end());
  for (double& v : out) v /= n;
  return out;
}

}  // namespace

UGammaEstimate u_gamma(std::span<const double> g, double epsilon) {
  check_g(g, epsilon);
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = epsilon / (epsilon + g[i]);
  return {epsilon, estimate_from_values(v, "eps/(eps+g)")};
}

UGammaEstimate u_gamma_quadrature(std::span<const double> g, double epsilon, std::size_t nodes) {
  check_g(g, epsilon);
  if (nodes < 2) throw Error(ErrorCode::kInvalidArgument, "quadrature needs at least 2 panels");
  std::vector<double> sorted(g.begin(), g.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  auto cdf = [&](double x) {
    return static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin()) / n;
  };
  const double m = static_cast<double>(nodes);
  double sum = 0.5 * (cdf(0.0) + 1.0);
  for (std::size_t j = 1; j < nodes; ++j) {
    const double x = static_cast<double>(j) / m;
    sum += cdf(epsilon * x / (1.0 - x));
  }
  UGammaEstimate out{epsilon, {}};
  out.estimate.mean = sum / m;
  out.estimate.count = sorted.size();
  out.estimate.std_error = u_gamma(g, epsilon).estimate.std_error + 0.5 / m;
  return out;
}

Lemma11Margin lemma_1_1_margin(std::span<const double> g, double r, double epsilon) {
  check_g(g, epsilon);
  if (!(r >= 1.0)) throw Error(ErrorCode::kInvalidArgument, "r must be >= 1");
  const double scale = r * std::pow(epsilon, -r);
  std::vector<double> lhs(g.size()), rhs(g.size()), diff(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    lhs[i] = std::pow(g[i] + epsilon, -r);
    rhs[i] = scale * epsilon / (epsilon + g[i]);
    diff[i] = lhs[i] - rhs[i];
  }
  return {estimate_from_values(lhs, "(g+eps)^-r"), estimate_from_values(rhs, "r eps^-r u"),
          estimate_from_values(diff, "measure difference").std_error};
}

std::vector<std::vector<double>> sigma_directions(std::size_t k, std::uint64_t seed, std::size_t random_count) {
  std::vector<std::vector<double>> dirs;
  for (std::size_t a = 0; a < k; ++a) {
    for (double s : {1.0, -1.0}) {
      std::vector<double> e(k, 0.0);
      e[a] = s;
      dirs.push_back(e);
    }
  }
  std::uint64_t index = 0;
  for (std::size_t r = 0; r < random_count; ++r) {
    std::vector<double> e(k);
    double norm = 0.0;
    do {
      norm = 0.0;
      for (double& v : e) {
        v = normal_variate(seed, 0x5167ull, index++);
        norm += v * v;
      }
    } while (norm < 1e-20);
    norm = std::sqrt(norm);
    for (double& v : e) v /= norm;
    dirs.push_back(e);
  }
  return dirs;
}

double sigma_grid_lp(const std::vector<double>& edges, const std::vector<double>& mass, double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::kInvalidArgument, "t must be positive");
  if (edges.size() != mass.size() + 1 || mass.empty()) {
    throw Error(ErrorCode::kDimensionMismatch, "grid needs one more edge than cells");
  }
  const std::size_t cells = mass.size();
  const std::size_t ground = cells + 1;
  NetworkSimplex ns(cells + 2);
  std::vector<double> b(cells + 1, 0.0);
  for (std::size_t c = 0; c < cells; ++c) {
    const double w = edges[c + 1] - edges[c];
    if (!(w > 0.0)) throw Error(ErrorCode::kInvalidArgument, "grid edges must be strictly increasing");
    const double density = mass[c] / w;
    b[c] -= density;
    b[c + 1] += density;
    ns.add_arc(c, c + 1, w);
    ns.add_arc(c + 1, c, w);
  }
  double total = 0.0;
  for (std::size_t j = 0; j <= cells; ++j) {
    ns.set_supply(j, b[j]);
    total += b[j];
    ns.add_arc(j, ground, t);
    ns.add_arc(ground, j, t);
  }
  ns.set_supply(ground, -total);
  if (ns.solve() != NetworkSimplex::Status::kOptimal) {
    throw Error(ErrorCode::kLpInfeasible, "modulus LP left artificial flow");
  }
  return std::max(0.0, ns.total_cost());
}

SigmaEstimate sigma_lower(const EmpiricalMeasure& mu, double t, const std::vector<std::vector<double>>& directions,
                          const SigmaOptions& options) {
  if (mu.empty()) throw Error(ErrorCode::kEmptyMeasure, "modulus of an empty measure");
  if (directions.empty()) throw Error(ErrorCode::kInvalidArgument, "no directions given");
  if (!(t > 0.0)) throw Error(ErrorCode::kInvalidArgument, "t must be positive");
  SigmaEstimate est;
  est.t = t;
  est.direction_count = directions.size();
  std::vector<std::vector<double>> done;
  std::vector<double> done_value;
  const std::size_t base = options.cells ? options.cells : auto_cells(mu.size());
  est.cells = base;
  est.converged = true;
  for (std::size_t d = 0; d < directions.size(); ++d) {
    const std::vector<double> e = normalized(directions[d]);
    double value = -1.0;
    for (std::size_t i = 0; i < done.size(); ++i) {
      if (same_axis(done[i], e)) value = done_value[i];  // sigma is even in e
    }
    if (value < 0.0) {
      const SortedLine line(project(mu, e));
      std::size_t cells = base;
      auto grid = line.edges(cells, t);
      value = sigma_grid_lp(grid, line.masses(grid), t);
      if (options.refine) {
        bool ok = false;
        double change = 0.0;
        while (cells * 2 <= options.max_cells) {
          cells *= 2;
          grid = line.edges(cells, t);
          const double next = sigma_grid_lp(grid, line.masses(grid), t);
          change = std::abs(next - value) / std::max(next, 1e-300);
          value = std::max(value, next);
          if (change <= options.tolerance) {
            ok = true;
            break;
          }
        }
        est.converged = est.converged && ok;
        est.last_change = std::max(est.last_change, change);
        est.cells = std::max(est.cells, cells);
      }
      done.push_back(e);
      done_value.push_back(value);
    }
    if (value > est.lower) {
      est.lower = value;
      est.best_direction = d;
    }
  }
  if (!options.refine) est.converged = false;
  return est;
}

SigmaEstimate sigma_lower_converged(const EmpiricalMeasure& mu, double t,
                                    const std::vector<std::vector<double>>& directions) {
  SigmaOptions opts;
  opts.refine = true;
  return sigma_lower(mu, t, directions, opts);
}

SigmaEstimate sigma_lower_from_cdf(const std::function<double(double)>& cdf, double lo, double hi,
                                   const std::function<std::vector<double>(std::size_t)>& extra_edges, double t,
                                   const SigmaOptions& options) {
  if (!(hi > lo)) throw Error(ErrorCode::kInvalidArgument, "grid range is empty");
  SigmaEstimate est;
  est.t = t;
  est.direction_count = 1;
  std::size_t cells = options.cells ? options.cells : 512;
  auto solve = [&](std::size_t n) {
    std::vector<double> e = uniform_cells(lo, hi, n);
    if (extra_edges) {
      for (double x : extra_edges(n)) e.push_back(x);
    }
    e = merge_edges(std::move(e));
    std::vector<double> m(e.size() - 1);
    for (std::size_t c = 0; c + 1 < e.size(); ++c) m[c] = cdf(e[c + 1]) - cdf(e[c]);
    return sigma_grid_lp(e, m, t);
  };
  double value = solve(cells);
  est.cells = cells;
  while (cells * 2 <= options.max_cells) {
    cells *= 2;
    const double next = solve(cells);
    est.last_change = std::abs(next - value) / std::max(next, 1e-300);
    value = std::max(value, next);
    est.cells = cells;
    if (est.last_change <= options.tolerance) {
      est.converged = true;
      break;
    }
  }
  est.lower = value;
  return est;
}

SigmaEstimate sigma_lower_oracle(const std::string& density, double t) {
  const OracleDensity& d = oracle_density(density);
  const auto extra = [&d](std::size_t n) {
    std::vector<double> e{d.quantile(1e-12), d.quantile(1.0 - 1e-12)};
    for (std::size_t j = 1; j < n; ++j) e.push_back(d.quantile(static_cast<double>(j) / static_cast<double>(n)));
    return e;
  };
  return sigma_lower_from_cdf(d.cdf, d.quantile(0.001), d.quantile(0.999), extra, t);
}

SigmaUpper sigma_upper(const EmpiricalMeasure& mu, double t, const std::vector<std::vector<double>>& directions,
                       const BinningPolicy& policy) {
  if (mu.empty()) throw Error(ErrorCode::kEmptyMeasure, "modulus of an empty measure");
  if (directions.empty()) throw Error(ErrorCode::kInvalidArgument, "no directions given");
  if (!(t > 0.0)) throw Error(ErrorCode::kInvalidArgument, "t must be positive");
  const double factor = 6.0 * static_cast<double>(mu.dim());
  SigmaUpper out;
  for (const auto& raw : directions) {
    const std::vector<double> e = normalized(raw);
    for (double r : {t, 0.5 * t, 0.25 * t}) {
      std::vector<double> h(e);
      for (double& v : h) v *= r;
      const DistanceReport rep = tv_distance(shift(mu, h), mu, policy);
      if (rep.value > out.max_tv) {
        out.max_tv = rep.value;
        out.error = factor * rep.error_estimate;
      }
    }
  }
  out.value = factor * out.max_tv;
  return out;
}

BesovFit fit_power_law(std::vector<double> h, std::vector<double> tv, std::vector<double> err) {
  if (h.size() != tv.size() || h.size() != err.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "fit inputs differ in length");
  }
  BesovFit fit;
  fit.h_values = std::move(h);
  fit.tv_values = std::move(tv);
  fit.tv_errors = std::move(err);
  fit.used.assign(fit.h_values.size(), 0);
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < fit.h_values.size(); ++i) {
    const double hv = std::abs(fit.h_values[i]);
    if (hv > 0.0 && fit.tv_values[i] > 0.0 && fit.tv_values[i] >= 5.0 * fit.tv_errors[i]) {
      fit.used[i] = 1;
      lx.push_back(std::log(hv));
      ly.push_back(std::log(fit.tv_values[i]));
    }
  }
  fit.used_count = lx.size();
  if (lx.size() < 4) {
    throw Error(ErrorCode::kDegenerateFit,
                "only " + std::to_string(lx.size()) + " usable points for the log-log fit");
  }
  const double n = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw Error(ErrorCode::kDegenerateFit, "all usable h values coincide");
  fit.alpha_hat = sxy / sxx;
  fit.log_C_hat = my - fit.alpha_hat * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

BesovFit besov_fit(const EmpiricalMeasure& mu, const std::vector<double>& h_grid, std::span<const double> direction,
                   const BinningPolicy& policy) {
  const std::vector<double> e = normalized(direction);
  if (e.size() != mu.dim()) throw Error(ErrorCode::kDimensionMismatch, "direction has wrong length");
  std::vector<double> tv, err;
  for (double h : h_grid) {
    std::vector<double> shift_vec(e);
    for (double& v : shift_vec) v *= h;
    const DistanceReport rep = tv_distance(shift(mu, shift_vec), mu, policy);
    tv.push_back(rep.value);
    err.push_back(rep.error_estimate);
  }
  return fit_power_law(h_grid, std::move(tv), std::move(err));
}

BesovFit besov_fit_oracle(const std::string& density, const std::vector<double>& h_grid) {
  std::vector<double> tv, err(h_grid.size(), 0.0);
  for (double h : h_grid) tv.push_back(tv_shift_oracle_1d(density, h));
  return fit_power_law(h_grid, std::move(tv), std::move(err));
}

std::vector<double> geometric_grid(double lo, double hi, int per_decade) {
  if (!(lo > 0.0) || !(hi > lo) || per_decade < 1) {
    throw Error(ErrorCode::kInvalidArgument, "geometric grid needs 0 < lo < hi");
  }
  const int steps = std::max(1, static_cast<int>(std::lround(per_decade * std::log10(hi / lo))));
  std::vector<double> g;
  for (int i = 0; i <= steps; ++i) g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / steps));
  return g;
}

}  // namespace gaussreg
