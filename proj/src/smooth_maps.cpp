// SPDX-License-Identifier: MIT
#include "gaussreg/smooth_maps.hpp"

#include <algorithm>
#include <cmath>

#include "gaussreg/error.hpp"

namespace gaussreg {
namespace {

void check_point(std::size_t expected, std::size_t got, const std::string& name) {
  if (expected != got) {
    throw Error(ErrorCode::kDimensionMismatch,
                name + " expects points of length " + std::to_string(expected) + ", got " +
                    std::to_string(got));
  }
}

void check_component(std::size_t component, std::size_t k, const std::string& name) {
  if (component >= k) {
    throw Error(ErrorCode::kInvalidArgument,
                name + ": component " + std::to_string(component) + " out of range (k=" +
                    std::to_string(k) + ")");
  }
}

/// d-th derivative of x^e.
double power_derivative(double x, int e, int d) {
  if (d > e) return 0.0;
  double factor = 1.0;
  for (int i = 0; i < d; ++i) factor *= e - i;
  return factor * std::pow(x, e - d);
}

}  // namespace

PolynomialMap::PolynomialMap(std::size_t dim_in, std::vector<std::vector<Monomial>> components)
    : dim_in_(dim_in), components_(std::move(components)) {
  if (dim_in_ == 0) throw Error(ErrorCode::kInvalidArgument, "polynomial dim_in must be >= 1");
  if (components_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "polynomial needs at least one component");
  }
  for (std::size_t c = 0; c < components_.size(); ++c) {
    auto& terms = components_[c];
    for (const auto& m : terms) {
      if (m.exponents.size() != dim_in_) {
        throw Error(ErrorCode::kDimensionMismatch,
                    "monomial exponent vector length differs from dim_in in component " +
                        std::to_string(c));
      }
      if (std::any_of(m.exponents.begin(), m.exponents.end(), [](int e) { return e < 0; })) {
        throw Error(ErrorCode::kInvalidArgument, "negative exponent in component " +
                                                     std::to_string(c));
      }
      if (!std::isfinite(m.coeff)) {
        throw Error(ErrorCode::kNonFiniteValue, "non-finite coefficient in component " +
                                                    std::to_string(c));
      }
    }
    std::sort(terms.begin(), terms.end(),
              [](const Monomial& a, const Monomial& b) { return a.exponents < b.exponents; });
    for (std::size_t i = 1; i < terms.size(); ++i) {
      if (terms[i].exponents == terms[i - 1].exponents) {
        throw Error(ErrorCode::kInvalidArgument,
                    "duplicate multi-index in component " + std::to_string(c));
      }
    }
  }
}

double PolynomialMap::value(std::size_t component, std::span<const double> x) const {
  check_component(component, dim_out(), "polynomial");
  check_point(dim_in_, x.size(), "polynomial");
  double sum = 0.0;
  for (const auto& m : components_[component]) {
    double term = m.coeff;
    for (std::size_t i = 0; i < dim_in_; ++i) {
      if (m.exponents[i] != 0) term *= std::pow(x[i], m.exponents[i]);
    }
    sum += term;
  }
  return sum;
}

Jet2 PolynomialMap::jet(std::size_t component, std::span<const double> x) const {
  check_component(component, dim_out(), "polynomial");
  check_point(dim_in_, x.size(), "polynomial");
  const std::size_t n = dim_in_;
  Jet2 out{0.0, Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(n, n)};
  std::vector<int> order(n, 0);
  auto term = [&](const Monomial& m) {
    double prod = m.coeff;
    for (std::size_t i = 0; i < n && prod != 0.0; ++i) {
      prod *= power_derivative(x[i], m.exponents[i], order[i]);
    }
    return prod;
  };
  for (const auto& m : components_[component]) {
    out.value += term(m);
    for (std::size_t l = 0; l < n; ++l) {
      ++order[l];
      out.gradient[l] += term(m);
      for (std::size_t r = l; r < n; ++r) {
        ++order[r];
        out.hessian(l, r) += term(m);
        --order[r];
      }
      --order[l];
    }
  }
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t r = 0; r < l; ++r) out.hessian(l, r) = out.hessian(r, l);
  return out;
}

Dual2 PolynomialMap::eval_dual(std::size_t component, std::span<const Dual2> x) const {
  check_component(component, dim_out(), "polynomial");
  check_point(dim_in_, x.size(), "polynomial");
  const std::size_t vars = x.empty() ? 0 : x[0].n;
  Dual2 sum(0.0, vars);
  for (const auto& m : components_[component]) {
    Dual2 term(m.coeff, vars);
    for (std::size_t i = 0; i < dim_in_; ++i) {
      if (m.exponents[i] != 0) term = term * pow(x[i], m.exponents[i]);
    }
    sum = sum + term;
  }
  return sum;
}

PolynomialMap PolynomialMap::lifted(std::size_t dim_in) const {
  if (dim_in < dim_in_) {
    throw Error(ErrorCode::kDimensionMismatch, "cannot lift a polynomial to fewer variables");
  }
  auto comps = components_;
  for (auto& terms : comps)
    for (auto& m : terms) m.exponents.resize(dim_in, 0);
  return PolynomialMap(dim_in, std::move(comps));
}

MapSpec::MapSpec(std::string name, PolynomialMap poly)
    : name_(std::move(name)),
      dim_in_(poly.dim_in()),
      dim_out_(poly.dim_out()),
      poly_(std::make_shared<const PolynomialMap>(std::move(poly))) {}

MapSpec::MapSpec(std::string name, std::size_t dim_in, std::size_t dim_out, ValueFn value,
                 DualFn dual)
    : name_(std::move(name)),
      dim_in_(dim_in),
      dim_out_(dim_out),
      value_(std::move(value)),
      dual_(std::move(dual)) {
  if (dim_in_ == 0 || dim_out_ == 0) {
    throw Error(ErrorCode::kInvalidArgument, name_ + ": dimensions must be >= 1");
  }
  if (dim_in_ > Dual2::kMaxVars) {
    throw Error(ErrorCode::kInvalidArgument,
                name_ + ": closure maps support at most " + std::to_string(Dual2::kMaxVars) +
                    " input variables");
  }
}

double MapSpec::value(std::size_t component, std::span<const double> x) const {
  if (poly_) return poly_->value(component, x);
  check_component(component, dim_out_, name_);
  check_point(dim_in_, x.size(), name_);
  const double v = value_(x, component);
  if (!std::isfinite(v)) throw Error(ErrorCode::kNonFiniteValue, name_ + " is non-finite");
  return v;
}

std::vector<double> MapSpec::evaluate(std::span<const double> x) const {
  std::vector<double> out(dim_out_);
  for (std::size_t c = 0; c < dim_out_; ++c) out[c] = value(c, x);
  return out;
}

Jet2 MapSpec::jet(std::size_t component, std::span<const double> x) const {
  if (poly_) return poly_->jet(component, x);
  check_component(component, dim_out_, name_);
  check_point(dim_in_, x.size(), name_);
  std::array<Dual2, Dual2::kMaxVars> seeded;
  for (std::size_t i = 0; i < dim_in_; ++i) seeded[i] = Dual2::variable(x[i], i, dim_in_);
  const Dual2 d = dual_(std::span<const Dual2>(seeded.data(), dim_in_), component);
  Jet2 out{d.v, Eigen::VectorXd(dim_in_), Eigen::MatrixXd(dim_in_, dim_in_)};
  bool finite = std::isfinite(d.v);
  for (std::size_t i = 0; i < dim_in_; ++i) {
    out.gradient[i] = d.g[i];
    finite = finite && std::isfinite(d.g[i]);
    for (std::size_t j = 0; j < dim_in_; ++j) {
      out.hessian(i, j) = d.hess(i, j);
      finite = finite && std::isfinite(d.hess(i, j));
    }
  }
  if (!finite) throw Error(ErrorCode::kNonFiniteValue, name_ + " jet is non-finite");
  return out;
}

Dual2 MapSpec::compose(std::size_t component, std::span<const Dual2> x) const {
  if (poly_) return poly_->eval_dual(component, x);
  check_component(component, dim_out_, name_);
  check_point(dim_in_, x.size(), name_);
  return dual_(x, component);
}

MapSpec MapSpec::renamed(std::string name) const {
  MapSpec copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

Jet2 eval_jet2(const MapSpec& map, std::size_t component, std::span<const double> x) {
  return map.jet(component, x);
}

double ornstein_uhlenbeck(const Jet2& jet, std::span<const double> x) {
  double inner = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) inner += x[i] * jet.gradient[i];
  return jet.hessian.trace() - inner;
}

double ornstein_uhlenbeck(const MapSpec& map, std::size_t component,
                          std::span<const double> x) {
  return ornstein_uhlenbeck(map.jet(component, x), x);
}

SobolevNorm sobolev_norm(const MapSpec& map, double p, int order, const SampleBatch& batch) {
  if (!(p > 1.0)) throw Error(ErrorCode::kInvalidArgument, "sobolev_norm requires p > 1");
  if (order != 1 && order != 2) {
    throw Error(ErrorCode::kInvalidArgument, "sobolev_norm order must be 1 or 2");
  }
  if (batch.dim() != map.dim_in()) {
    throw Error(ErrorCode::kDimensionMismatch, map.name() + ": batch dimension differs");
  }
  SobolevNorm out;
  const std::size_t n = batch.size();
  for (std::size_t c = 0; c < map.dim_out(); ++c) {
    std::vector<double> val(n), grad(n), hess(n);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const Jet2 j = map.jet(c, batch.point(i));
        val[i] = j.value;
        grad[i] = j.gradient.norm();
        hess[i] = j.hessian.norm();
      }
    });
    MCEstimate total{0.0, 0.0, n};
    auto add = [&](const std::vector<double>& v) {
      const MCEstimate e = lp_from_values(v, p);
      total.mean += e.mean;
      total.std_error += e.std_error;
    };
    add(val);
    add(grad);
    if (order == 2) add(hess);
    out.per_component.push_back(total);
  }
  out.max = *std::max_element(
      out.per_component.begin(), out.per_component.end(),
      [](const MCEstimate& a, const MCEstimate& b) { return a.mean < b.mean; });
  return out;
}

MapSpec lift(const MapSpec& map, std::size_t dim_in) {
  if (dim_in == map.dim_in()) return map;
  if (dim_in < map.dim_in()) {
    throw Error(ErrorCode::kDimensionMismatch, "cannot lift " + map.name() + " to fewer variables");
  }
  if (const PolynomialMap* poly = map.polynomial()) {
    return MapSpec(map.name(), poly->lifted(dim_in));
  }
  const std::size_t inner = map.dim_in();
  return MapSpec(
      map.name(), dim_in, map.dim_out(),
      [map, inner](std::span<const double> x, std::size_t c) {
        return map.value(c, x.first(inner));
      },
      [map, inner](std::span<const Dual2> x, std::size_t c) {
        return map.compose(c, x.first(inner));
      });
}

}  // namespace gaussreg
