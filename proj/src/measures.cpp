// SPDX-License-Identifier: MIT
#include "gaussreg/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "gaussreg/error.hpp"
#include "gaussreg/network_simplex.hpp"
#include "gaussreg/parallel.hpp"

namespace gaussreg {
namespace {

void require_same_dim(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::kDimensionMismatch, "measures live in different dimensions");
}

std::size_t default_equal_mass_cells(std::size_t dim) {
  switch (dim) {
    case 1: return 32;
    case 2: return 16;
    default: return 8;
  }
}

/// Values at the given sorted ranks, by recursive selection.
void select_ranks(std::vector<double>& v, std::size_t lo, std::size_t hi,
                  const std::vector<std::size_t>& ranks, std::size_t rlo, std::size_t rhi,
                  std::vector<double>& out) {
  if (rlo >= rhi) return;
  const std::size_t mid = (rlo + rhi) / 2;
  const std::size_t r = ranks[mid];
  std::nth_element(v.begin() + lo, v.begin() + r, v.begin() + hi);
  out[mid] = v[r];
  select_ranks(v, lo, r, ranks, rlo, mid, out);
  select_ranks(v, r + 1, hi, ranks, mid + 1, rhi, out);
}

std::vector<double> quantiles(std::vector<double> v, const std::vector<double>& probs) {
  std::vector<std::size_t> ranks;
  for (double p : probs) {
    ranks.push_back(std::min(v.size() - 1, static_cast<std::size_t>(p * static_cast<double>(v.size() - 1) + 0.5)));
  }
  std::vector<double> out(probs.size());
  select_ranks(v, 0, v.size(), ranks, 0, ranks.size(), out);
  return out;
}

std::vector<double> pooled_axis(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, std::size_t axis) {
  std::vector<double> v;
  v.reserve(mu.size() + nu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) v.push_back(mu.point(i)[axis]);
  for (std::size_t i = 0; i < nu.size(); ++i) v.push_back(nu.point(i)[axis]);
  return v;
}

std::vector<double> uniform_edges(double lo, double width, std::size_t cells) {
  std::vector<double> e(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) e[i] = lo + width * static_cast<double>(i);
  return e;
}

struct AxisLookup {
  const std::vector<double>* edges;
  bool uniform;
  double lo, inv_width;
  std::size_t cells;

  std::size_t operator()(double x) const {
    if (uniform) {
      const double t = (x - lo) * inv_width;
      if (!(t > 0.0)) return 0;
      const auto i = static_cast<std::size_t>(t);
      return std::min(i, cells - 1);
    }
    const auto& e = *edges;
    const auto it = std::upper_bound(e.begin() + 1, e.end() - 1, x);
    return static_cast<std::size_t>(it - (e.begin() + 1));
  }
};

AxisLookup make_lookup(const std::vector<double>& e) {
  const std::size_t cells = e.size() - 1;
  const double w = (e.back() - e.front()) / static_cast<double>(cells);
  bool uniform = w > 0.0;
  for (std::size_t i = 0; uniform && i <= cells; ++i) {
    uniform = std::abs(e[i] - (e.front() + w * static_cast<double>(i))) <= 1e-12 * std::max(1.0, std::abs(e[i]));
  }
  return AxisLookup{&e, uniform, e.front(), uniform ? 1.0 / w : 0.0, cells};
}

/// Signed cell masses of mu - nu, as a sparse or dense accumulation.
std::vector<double> cell_differences(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                                     const std::vector<std::vector<double>>& edges) {
  const std::size_t k = edges.size();
  std::vector<AxisLookup> look;
  std::size_t total = 1;
  for (const auto& e : edges) {
    look.push_back(make_lookup(e));
    total *= e.size() - 1;
  }
  auto index_of = [&](std::span<const double> x) {
    std::size_t idx = 0;
    for (std::size_t a = 0; a < k; ++a) idx = idx * look[a].cells + look[a](x[a]);
    return idx;
  };
  // The two measures are accumulated separately so identical inputs cancel exactly.
  if (total <= (std::size_t{1} << 22)) {
    std::vector<double> plus(total, 0.0), minus(total, 0.0);
    for (std::size_t i = 0; i < mu.size(); ++i) plus[index_of(mu.point(i))] += mu.weight(i);
    for (std::size_t i = 0; i < nu.size(); ++i) minus[index_of(nu.point(i))] += nu.weight(i);
    for (std::size_t c = 0; c < total; ++c) plus[c] -= minus[c];
    return plus;
  }
  struct Entry {
    std::size_t cell;
    double weight;
    bool from_nu;
  };
  std::vector<Entry> entries;
  entries.reserve(mu.size() + nu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) entries.push_back({index_of(mu.point(i)), mu.weight(i), false});
  for (std::size_t i = 0; i < nu.size(); ++i) entries.push_back({index_of(nu.point(i)), nu.weight(i), true});
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.cell < b.cell; });
  std::vector<double> mass;
  for (std::size_t i = 0; i < entries.size();) {
    double p = 0.0, q = 0.0;
    std::size_t j = i;
    for (; j < entries.size() && entries[j].cell == entries[i].cell; ++j) (entries[j].from_nu ? q : p) += entries[j].weight;
    mass.push_back(p - q);
    i = j;
  }
  return mass;
}

double abs_sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

enum class LpKind { kBounded, kUnbounded };

DistanceReport solve_transport(const EmpiricalMeasure& omega_in, const LpOptions& opts, LpKind kind) {
  EmpiricalMeasure omega = merge_atoms(omega_in);
  DistanceReport rep;
  rep.method = "lp";
  if (omega.empty()) return rep;
  if (omega.size() > opts.support_limit) {
    if (!opts.allow_coarsening) {
      throw Error(ErrorCode::kSupportTooLarge, "support of " + std::to_string(omega.size()) +
                                                   " atoms exceeds the limit of " +
                                                   std::to_string(opts.support_limit));
    }
    const Coarsened c = coarsen(omega, opts.support_limit);
    rep.coarsened = true;
    rep.error_estimate = c.cell_diameter * omega.total_variation_mass();
    omega = c.measure;
    if (omega.empty()) {
      rep.support_size = 0;
      return rep;
    }
  }
  const std::size_t m = omega.size();
  const std::size_t k = omega.dim();
  rep.support_size = m;
  rep.resolution = static_cast<double>(m);

  std::vector<double> w = omega.weights();
  if (kind == LpKind::kUnbounded) {
    // Absorb rounding-level imbalance into the heaviest atom.
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    const auto big = std::max_element(w.begin(), w.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    *big -= total;
  }
  const bool ground = kind == LpKind::kBounded;
  const std::size_t g = m;
  NetworkSimplex ns(ground ? m + 1 : m);
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    ns.set_supply(i, w[i]);
    total += w[i];
  }
  if (ground) ns.set_supply(g, -total);

  if (k == 1) {
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return omega.point(a)[0] < omega.point(b)[0];
    });
    for (std::size_t r = 0; r + 1 < m; ++r) {
      const std::size_t a = order[r], b = order[r + 1];
      const double gap = omega.point(b)[0] - omega.point(a)[0];
      ns.add_arc(a, b, gap);
      ns.add_arc(b, a, gap);
    }
    if (ground) {
      for (std::size_t i = 0; i < m; ++i) {
        ns.add_arc(i, g, 1.0);
        ns.add_arc(g, i, 1.0);
      }
    }
  } else {
    for (std::size_t i = 0; i < m; ++i) {
      if (w[i] <= 0.0) continue;
      for (std::size_t j = 0; j < m; ++j) {
        if (w[j] >= 0.0) continue;
        const double d = distance(omega.point(i), omega.point(j));
        if (ground && d >= 2.0) continue;  // routing through the ground is no dearer
        ns.add_arc(i, j, d);
      }
      if (ground) ns.add_arc(i, g, 1.0);
    }
    if (ground) {
      for (std::size_t j = 0; j < m; ++j) {
        if (w[j] < 0.0) ns.add_arc(g, j, 1.0);
      }
    }
  }
  if (ns.solve() != NetworkSimplex::Status::kOptimal) {
    throw Error(ErrorCode::kLpInfeasible, "transport problem left artificial flow");
  }
  rep.value = std::max(0.0, ns.total_cost());
  rep.refined_value = rep.value;
  return rep;
}

}  // namespace

EmpiricalMeasure::EmpiricalMeasure(std::size_t dim, std::vector<double> points, std::vector<double> weights)
    : dim_(dim), points_(std::move(points)), weights_(std::move(weights)) {
  if (dim_ == 0) throw Error(ErrorCode::kInvalidArgument, "measure dimension must be >= 1");
  if (points_.size() != weights_.size() * dim_) {
    throw Error(ErrorCode::kDimensionMismatch, "points and weights disagree in count");
  }
  for (double x : points_) {
    if (!std::isfinite(x)) throw Error(ErrorCode::kNonFiniteValue, "measure atom is not finite");
  }
  for (double x : weights_) {
    if (!std::isfinite(x)) throw Error(ErrorCode::kNonFiniteValue, "measure weight is not finite");
  }
}

EmpiricalMeasure EmpiricalMeasure::uniform(std::size_t dim, std::vector<double> points) {
  const std::size_t n = dim == 0 ? 0 : points.size() / dim;
  std::vector<double> w(n, n == 0 ? 0.0 : 1.0 / static_cast<double>(n));
  return EmpiricalMeasure(dim, std::move(points), std::move(w));
}

double EmpiricalMeasure::total_mass() const { return compensated_sum(weights_); }

double EmpiricalMeasure::total_variation_mass() const {
  double s = 0.0;
  for (double w : weights_) s += std::abs(w);
  return s;
}

bool EmpiricalMeasure::is_probability() const {
  if (std::any_of(weights_.begin(), weights_.end(), [](double w) { return w < 0.0; })) return false;
  return std::abs(total_mass() - 1.0) <= 1e-12;
}

EmpiricalMeasure pushforward(const MapSpec& map, const SampleBatch& batch) {
  if (map.dim_in() != batch.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, map.name() + ": batch dimension differs from dim_in");
  }
  const std::size_t k = map.dim_out();
  std::vector<double> pts(batch.size() * k);
  parallel_for(batch.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t c = 0; c < k; ++c) {
        const double v = map.value(c, batch.point(i));
        if (!std::isfinite(v)) throw Error(ErrorCode::kNonFiniteValue, map.name() + " image is not finite");
        pts[i * k + c] = v;
      }
    }
  });
  return EmpiricalMeasure::uniform(k, std::move(pts));
}

EmpiricalMeasure shift(const EmpiricalMeasure& mu, std::span<const double> h) {
  if (h.size() != mu.dim()) throw Error(ErrorCode::kDimensionMismatch, "shift vector has wrong length");
  std::vector<double> pts = mu.points();
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] += h[i % mu.dim()];
  return EmpiricalMeasure(mu.dim(), std::move(pts), mu.weights());
}

EmpiricalMeasure difference(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
  require_same_dim(mu, nu);
  std::vector<double> pts = mu.points();
  pts.insert(pts.end(), nu.points().begin(), nu.points().end());
  std::vector<double> w = mu.weights();
  for (double x : nu.weights()) w.push_back(-x);
  return EmpiricalMeasure(mu.dim(), std::move(pts), std::move(w));
}

EmpiricalMeasure project(const EmpiricalMeasure& mu, std::span<const double> e) {
  if (e.size() != mu.dim()) throw Error(ErrorCode::kDimensionMismatch, "direction has wrong length");
  std::vector<double> pts(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    double s = 0.0;
    const auto x = mu.point(i);
    for (std::size_t a = 0; a < mu.dim(); ++a) s += x[a] * e[a];
    pts[i] = s;
  }
  return EmpiricalMeasure(1, std::move(pts), mu.weights());
}

EmpiricalMeasure dirac(std::vector<double> at, double weight) {
  const std::size_t d = at.size();
  return EmpiricalMeasure(d, std::move(at), {weight});
}

EmpiricalMeasure merge_atoms(const EmpiricalMeasure& mu) {
  const std::size_t n = mu.size(), k = mu.dim();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto pa = mu.point(a), pb = mu.point(b);
    return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
  });
  const double tiny = 1e-15 * mu.total_variation_mass();
  std::vector<double> pts, w;
  for (std::size_t i = 0; i < n;) {
    const auto p = mu.point(order[i]);
    double s = 0.0;
    std::size_t j = i;
    for (; j < n && std::equal(p.begin(), p.end(), mu.point(order[j]).begin()); ++j) s += mu.weight(order[j]);
    if (std::abs(s) > tiny) {
      pts.insert(pts.end(), p.begin(), p.end());
      w.push_back(s);
    }
    i = j;
  }
  return EmpiricalMeasure(k, std::move(pts), std::move(w));
}

void write_measure(std::ostream& out, const EmpiricalMeasure& mu) {
  out << "# dim=" << mu.dim() << " columns: coordinates then weight\n";
  char buf[64];
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (double x : mu.point(i)) {
      std::snprintf(buf, sizeof buf, "%.17g ", x);
      out << buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g\n", mu.weight(i));
    out << buf;
  }
}

EmpiricalMeasure read_measure(std::istream& in) {
  std::string line;
  std::size_t columns = 0, row = 0;
  std::vector<double> pts, w;
  while (std::getline(in, line)) {
    ++row;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    std::vector<double> vals;
    std::string tok;
    while (ss >> tok) {
      try {
        std::size_t used = 0;
        vals.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw Error(ErrorCode::kConfigParse, "measure row " + std::to_string(row) + ": bad number '" + tok + "'");
      }
    }
    if (vals.empty()) continue;
    if (columns == 0) columns = vals.size();
    if (vals.size() != columns || columns < 2) {
      throw Error(ErrorCode::kConfigParse, "measure row " + std::to_string(row) + " has the wrong column count");
    }
    pts.insert(pts.end(), vals.begin(), vals.end() - 1);
    w.push_back(vals.back());
  }
  if (columns == 0) throw Error(ErrorCode::kEmptyMeasure, "measure file has no rows");
  return EmpiricalMeasure(columns - 1, std::move(pts), std::move(w));
}

std::vector<std::vector<double>> histogram_edges(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                                                 const BinningPolicy& policy, bool refine) {
  require_same_dim(mu, nu);
  if (mu.empty() || nu.empty()) throw Error(ErrorCode::kEmptyMeasure, "histogram of an empty measure");
  const std::size_t k = mu.dim();
  const double n_pool = static_cast<double>(mu.size() + nu.size());
  std::vector<std::vector<double>> edges;
  for (std::size_t a = 0; a < k; ++a) {
    std::vector<double> v = pooled_axis(mu, nu, a);
    const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    const double lo = *mn, hi = *mx;
    if (policy.kind == BinningPolicy::Kind::kEqualMass) {
      std::size_t cells = policy.cells_per_axis ? policy.cells_per_axis : default_equal_mass_cells(k);
      if (refine) cells *= 2;
      std::vector<double> probs;
      for (std::size_t j = 1; j < cells; ++j) probs.push_back(static_cast<double>(j) / static_cast<double>(cells));
      std::vector<double> e{lo};
      for (double q : quantiles(std::move(v), probs)) e.push_back(q);
      e.push_back(hi);
      e.erase(std::unique(e.begin(), e.end()), e.end());
      if (e.size() < 2) e = {lo - 0.5, lo + 0.5};
      edges.push_back(std::move(e));
      continue;
    }
    double width;
    if (policy.kind == BinningPolicy::Kind::kFixedWidth) {
      if (!(policy.width > 0.0)) throw Error(ErrorCode::kInvalidArgument, "fixed bin width must be positive");
      width = policy.width;
    } else {
      const auto q = quantiles(std::move(v), {0.25, 0.75});
      const double iqr = q[1] - q[0];
      const double scale = std::pow(n_pool, -1.0 / static_cast<double>(k + 2));
      width = 2.0 * iqr * scale;
      if (!(width > 0.0)) width = (hi - lo) * scale;
      if (!(width > 0.0)) width = 1.0;
    }
    if (refine) width *= 0.5;
    if (hi == lo) {
      edges.push_back({lo - 0.5 * width, lo + 0.5 * width});
      continue;
    }
    const double span = (hi - lo) / width;
    if (span > 1e7) throw Error(ErrorCode::kInvalidArgument, "histogram would need more than 1e7 cells per axis");
    const auto cells = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span)));
    edges.push_back(uniform_edges(lo, width, cells));
  }
  return edges;
}

GridDensity histogram(const EmpiricalMeasure& mu, const std::vector<std::vector<double>>& edges) {
  if (edges.size() != mu.dim()) throw Error(ErrorCode::kDimensionMismatch, "edges do not match the dimension");
  std::size_t total = 1;
  for (const auto& e : edges) {
    if (e.size() < 2) throw Error(ErrorCode::kInvalidArgument, "each axis needs at least one cell");
    total *= e.size() - 1;
  }
  if (total > (std::size_t{1} << 26)) throw Error(ErrorCode::kInvalidArgument, "grid too large for a dense histogram");
  GridDensity g{edges, std::vector<double>(total, 0.0)};
  std::vector<AxisLookup> look;
  for (const auto& e : g.edges) look.push_back(make_lookup(e));
  for (std::size_t i = 0; i < mu.size(); ++i) {
    std::size_t idx = 0;
    const auto x = mu.point(i);
    for (std::size_t a = 0; a < mu.dim(); ++a) idx = idx * look[a].cells + look[a](x[a]);
    g.mass[idx] += mu.weight(i);
  }
  return g;
}

DistanceReport tv_distance(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, const BinningPolicy& policy) {
  require_same_dim(mu, nu);
  if (mu.empty() || nu.empty()) throw Error(ErrorCode::kEmptyMeasure, "total variation of an empty measure");
  if (mu.dim() > 3) {
    throw Error(ErrorCode::kInvalidArgument, "histogram total variation supports dimension <= 3");
  }
  const auto coarse = histogram_edges(mu, nu, policy, false);
  const auto fine = histogram_edges(mu, nu, policy, true);
  DistanceReport rep;
  rep.method = "histogram";
  rep.value = abs_sum(cell_differences(mu, nu, coarse));
  rep.refined_value = abs_sum(cell_differences(mu, nu, fine));
  rep.error_estimate = std::abs(rep.value - rep.refined_value);
  rep.support_size = mu.size() + nu.size();
  if (policy.kind == BinningPolicy::Kind::kEqualMass) {
    rep.resolution = static_cast<double>(coarse[0].size() - 1);
  } else {
    rep.resolution = coarse[0].size() > 1 ? coarse[0][1] - coarse[0][0] : 0.0;
  }
  return rep;
}

Coarsened coarsen(const EmpiricalMeasure& mu, std::size_t limit) {
  if (limit == 0) throw Error(ErrorCode::kSupportTooLarge, "support limit must be positive");
  EmpiricalMeasure merged = merge_atoms(mu);
  if (merged.size() <= limit) return {merged, 0.0};
  const std::size_t k = mu.dim();
  std::vector<double> lo(k, INFINITY), hi(k, -INFINITY);
  for (std::size_t i = 0; i < merged.size(); ++i) {
    for (std::size_t a = 0; a < k; ++a) {
      lo[a] = std::min(lo[a], merged.point(i)[a]);
      hi[a] = std::max(hi[a], merged.point(i)[a]);
    }
  }
  double extent = 0.0;
  for (std::size_t a = 0; a < k; ++a) extent = std::max(extent, hi[a] - lo[a]);
  double width = extent / std::ceil(std::pow(static_cast<double>(limit), 1.0 / static_cast<double>(k)));
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<double> pts(merged.points().size());
    for (std::size_t i = 0; i < merged.size(); ++i) {
      for (std::size_t a = 0; a < k; ++a) {
        const double cell = std::floor((merged.point(i)[a] - lo[a]) / width);
        pts[i * k + a] = lo[a] + (cell + 0.5) * width;
      }
    }
    EmpiricalMeasure snapped = merge_atoms(EmpiricalMeasure(k, std::move(pts), merged.weights()));
    if (snapped.size() <= limit) return {snapped, width * std::sqrt(static_cast<double>(k))};
    width *= 1.25;
  }
  throw Error(ErrorCode::kSupportTooLarge, "could not coarsen the support below the limit");
}

DistanceReport kr_norm(const EmpiricalMeasure& omega, const LpOptions& opts) {
  return solve_transport(omega, opts, LpKind::kBounded);
}

DistanceReport kantorovich_norm(const EmpiricalMeasure& omega, const LpOptions& opts) {
  const double total = omega.total_mass();
  if (std::abs(total) > 1e-10) {
    throw Error(ErrorCode::kMassNotBalanced, "Kantorovich norm needs total mass 0, got " + std::to_string(total));
  }
  return solve_transport(omega, opts, LpKind::kUnbounded);
}

}  // namespace gaussreg
