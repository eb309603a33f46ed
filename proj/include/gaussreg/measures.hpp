// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gaussreg/gaussian_space.hpp"
#include "gaussreg/smooth_maps.hpp"

namespace gaussreg {

/// Weighted point cloud on R^dim. Weights may be signed (differences of
/// measures); points are stored row-major.
class EmpiricalMeasure {
 public:
  EmpiricalMeasure(std::size_t dim, std::vector<double> points, std::vector<double> weights);
  /// Uniform weights 1/N.
  static EmpiricalMeasure uniform(std::size_t dim, std::vector<double> points);

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] std::size_t size() const noexcept { return weights_.size(); }
  [[nodiscard]] bool empty() const noexcept { return weights_.empty(); }
  [[nodiscard]] std::span<const double> point(std::size_t i) const noexcept {
    return {points_.data() + i * dim_, dim_};
  }
  [[nodiscard]] double weight(std::size_t i) const noexcept { return weights_[i]; }
  [[nodiscard]] const std::vector<double>& points() const noexcept { return points_; }
  [[nodiscard]] const std::vector<double>& weights() const noexcept { return weights_; }
  [[nodiscard]] double total_mass() const;
  [[nodiscard]] double total_variation_mass() const;  // sum |w|
  /// Nonnegative weights summing to 1 within 1e-12.
  [[nodiscard]] bool is_probability() const;

 private:
  std::size_t dim_;
  std::vector<double> points_;
  std::vector<double> weights_;
};

/// Image of the Gaussian batch under the map, weights 1/N.
[[nodiscard]] EmpiricalMeasure pushforward(const MapSpec& map, const SampleBatch& batch);
[[nodiscard]] EmpiricalMeasure shift(const EmpiricalMeasure& mu, std::span<const double> h);
/// mu - nu as one signed measure.
[[nodiscard]] EmpiricalMeasure difference(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu);
/// Law of <x, e> under mu.
[[nodiscard]] EmpiricalMeasure project(const EmpiricalMeasure& mu, std::span<const double> e);
/// Dirac mass at a point.
[[nodiscard]] EmpiricalMeasure dirac(std::vector<double> at, double weight = 1.0);
/// Combines atoms at identical locations and drops zero-weight atoms.
[[nodiscard]] EmpiricalMeasure merge_atoms(const EmpiricalMeasure& mu);

/// Columnar text: one point per row, coordinates then weight; '#' starts a comment.
void write_measure(std::ostream& out, const EmpiricalMeasure& mu);
[[nodiscard]] EmpiricalMeasure read_measure(std::istream& in);

/// Histogram on a tensor grid given by per-axis edges; mass is signed.
struct GridDensity {
  std::vector<std::vector<double>> edges;
  std::vector<double> mass;  // row-major over cells, axis 0 slowest
};

struct BinningPolicy {
  enum class Kind { kFreedmanDiaconis, kEqualMass, kFixedWidth };
  Kind kind = Kind::kFreedmanDiaconis;
  double width = 0.0;             // kFixedWidth
  std::size_t cells_per_axis = 0;  // kEqualMass; 0 picks the default for the dimension

  static BinningPolicy freedman_diaconis() { return {}; }
  static BinningPolicy equal_mass(std::size_t cells = 0) {
    return {Kind::kEqualMass, 0.0, cells};
  }
  static BinningPolicy fixed_width(double w) { return {Kind::kFixedWidth, w, 0}; }
};

struct DistanceReport {
  double value = 0.0;
  std::string method;             // "histogram", "lp" or "closed-form"
  double resolution = 0.0;        // bin width (histogram), cells per axis (equal-mass), support size (lp)
  double refined_value = 0.0;     // value at half width / doubled cells; equals value for lp
  double error_estimate = 0.0;    // |value - refined_value| or the coarsening bound
  std::size_t support_size = 0;
  bool coarsened = false;
};

/// Edges for both measures on a common grid, per the policy. `refine` halves
/// widths (or doubles cell counts).
[[nodiscard]] std::vector<std::vector<double>> histogram_edges(const EmpiricalMeasure& mu,
                                                               const EmpiricalMeasure& nu,
                                                               const BinningPolicy& policy,
                                                               bool refine);
[[nodiscard]] GridDensity histogram(const EmpiricalMeasure& mu,
                                    const std::vector<std::vector<double>>& edges);

/// Sum over cells of |mu(cell) - nu(cell)| at the policy width and at the
/// refined width. Histogram path supports dimension <= 3.
[[nodiscard]] DistanceReport tv_distance(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                                         const BinningPolicy& policy = {});

struct LpOptions {
  std::size_t support_limit = 2000;
  /// When false, supports above the limit raise SupportTooLarge instead of
  /// being snapped to a grid.
  bool allow_coarsening = true;
};

/// sup { sum w_i phi_i : |phi_i| <= 1, |phi_i - phi_j| <= |x_i - x_j| }, solved
/// as the dual min-cost flow (transport with a ground node at cost 1).
[[nodiscard]] DistanceReport kr_norm(const EmpiricalMeasure& omega, const LpOptions& opts = {});
/// As kr_norm without the sup-norm bound; omega must have total mass 0.
[[nodiscard]] DistanceReport kantorovich_norm(const EmpiricalMeasure& omega,
                                              const LpOptions& opts = {});

/// Snaps atoms to a grid until at most `limit` distinct cells remain; returns
/// the coarsened measure and the cell diameter.
struct Coarsened {
  EmpiricalMeasure measure;
  double cell_diameter;
};
[[nodiscard]] Coarsened coarsen(const EmpiricalMeasure& mu, std::size_t limit);

}  // namespace gaussreg
