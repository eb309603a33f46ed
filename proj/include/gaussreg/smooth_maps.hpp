// SPDX-License-Identifier: MIT
#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gaussreg/dual2.hpp"
#include "gaussreg/gaussian_space.hpp"

namespace gaussreg {

/// Value, gradient and Hessian of one scalar component at a point.
struct Jet2 {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

struct Monomial {
  std::vector<int> exponents;
  double coeff = 0.0;
};

/// Polynomial mapping R^n -> R^k. Terms of each component are kept in
/// lexicographic order of their exponent vectors; duplicates are rejected.
class PolynomialMap {
 public:
  PolynomialMap(std::size_t dim_in, std::vector<std::vector<Monomial>> components);

  [[nodiscard]] std::size_t dim_in() const noexcept { return dim_in_; }
  [[nodiscard]] std::size_t dim_out() const noexcept { return components_.size(); }
  [[nodiscard]] const std::vector<std::vector<Monomial>>& components() const noexcept {
    return components_;
  }

  [[nodiscard]] double value(std::size_t component, std::span<const double> x) const;
  [[nodiscard]] Jet2 jet(std::size_t component, std::span<const double> x) const;
  [[nodiscard]] Dual2 eval_dual(std::size_t component, std::span<const Dual2> x) const;

  /// Same polynomial viewed as a map on R^dim_in (dim_in >= current).
  [[nodiscard]] PolynomialMap lifted(std::size_t dim_in) const;

 private:
  std::size_t dim_in_;
  std::vector<std::vector<Monomial>> components_;
};

/// A smooth mapping with exact jets: either a polynomial or a closure whose
/// derivatives come from second-order forward differentiation. Components are
/// indexed from 0.
class MapSpec {
 public:
  using ValueFn = std::function<double(std::span<const double>, std::size_t)>;
  using DualFn = std::function<Dual2(std::span<const Dual2>, std::size_t)>;

  MapSpec(std::string name, PolynomialMap poly);
  MapSpec(std::string name, std::size_t dim_in, std::size_t dim_out, ValueFn value,
          DualFn dual);

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] std::size_t dim_in() const noexcept { return dim_in_; }
  [[nodiscard]] std::size_t dim_out() const noexcept { return dim_out_; }
  [[nodiscard]] bool is_polynomial() const noexcept { return poly_ != nullptr; }
  [[nodiscard]] const PolynomialMap* polynomial() const noexcept { return poly_.get(); }

  [[nodiscard]] double value(std::size_t component, std::span<const double> x) const;
  [[nodiscard]] std::vector<double> evaluate(std::span<const double> x) const;
  [[nodiscard]] Jet2 jet(std::size_t component, std::span<const double> x) const;
  /// Evaluates the component on jet-valued inputs (used to differentiate
  /// compositions such as phi(f(x))).
  [[nodiscard]] Dual2 compose(std::size_t component, std::span<const Dual2> x) const;

  [[nodiscard]] MapSpec renamed(std::string name) const;

 private:
  std::string name_;
  std::size_t dim_in_;
  std::size_t dim_out_;
  std::shared_ptr<const PolynomialMap> poly_;
  ValueFn value_;
  DualFn dual_;
};

/// Builds a closure map from a generic callable `fn(x, component)` that works
/// for both double and Dual2 coordinates.
template <class Fn>
MapSpec make_closure_map(std::string name, std::size_t dim_in, std::size_t dim_out, Fn fn) {
  return MapSpec(
      std::move(name), dim_in, dim_out,
      [fn](std::span<const double> x, std::size_t c) { return fn(x, c); },
      [fn](std::span<const Dual2> x, std::size_t c) { return fn(x, c); });
}

[[nodiscard]] Jet2 eval_jet2(const MapSpec& map, std::size_t component,
                             std::span<const double> x);

/// L f = trace(D^2 f) - <x, grad f>.
[[nodiscard]] double ornstein_uhlenbeck(const MapSpec& map, std::size_t component,
                                        std::span<const double> x);
[[nodiscard]] double ornstein_uhlenbeck(const Jet2& jet, std::span<const double> x);

struct SobolevNorm {
  std::vector<MCEstimate> per_component;
  MCEstimate max;  // component with the largest mean
};

/// ||f_i||_p + || |grad f_i| ||_p (+ || ||D^2 f_i||_HS ||_p when order == 2).
/// Standard errors of the terms are added.
[[nodiscard]] SobolevNorm sobolev_norm(const MapSpec& map, double p, int order,
                                       const SampleBatch& batch);

/// Embeds the map into R^dim_in, ignoring the extra coordinates.
[[nodiscard]] MapSpec lift(const MapSpec& map, std::size_t dim_in);

}  // namespace gaussreg
