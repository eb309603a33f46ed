// SPDX-License-Identifier: MIT
#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <cstddef>

namespace gaussreg {

/// Second-order forward-mode number: value, gradient and Hessian with respect
/// to up to kMaxVars seed variables. Only the leading `n` entries are used.
struct Dual2 {
  static constexpr std::size_t kMaxVars = 8;

  double v = 0.0;
  std::array<double, kMaxVars> g{};
  std::array<double, kMaxVars * kMaxVars> h{};
  std::size_t n = 0;

  Dual2() = default;
  Dual2(double value, std::size_t vars) : v(value), n(vars) {}

  static Dual2 variable(double value, std::size_t index, std::size_t vars) {
    Dual2 d(value, vars);
    d.g[index] = 1.0;
    return d;
  }

  [[nodiscard]] double hess(std::size_t i, std::size_t j) const { return h[i * kMaxVars + j]; }
};

namespace dual_detail {

/// Applies a scalar function with derivatives (f, f', f'') via the chain rule.
inline Dual2 chain(const Dual2& a, double f0, double f1, double f2) {
  Dual2 r(f0, a.n);
  for (std::size_t i = 0; i < a.n; ++i) r.g[i] = f1 * a.g[i];
  for (std::size_t i = 0; i < a.n; ++i) {
    for (std::size_t j = 0; j < a.n; ++j) {
      const std::size_t ij = i * Dual2::kMaxVars + j;
      r.h[ij] = f1 * a.h[ij] + f2 * a.g[i] * a.g[j];
    }
  }
  return r;
}

inline std::size_t vars(const Dual2& a, const Dual2& b) { return a.n > b.n ? a.n : b.n; }

}  // namespace dual_detail

inline Dual2 operator+(const Dual2& a, const Dual2& b) {
  Dual2 r(a.v + b.v, dual_detail::vars(a, b));
  for (std::size_t i = 0; i < r.n; ++i) r.g[i] = a.g[i] + b.g[i];
  for (std::size_t i = 0; i < r.n; ++i)
    for (std::size_t j = 0; j < r.n; ++j) {
      const std::size_t ij = i * Dual2::kMaxVars + j;
      r.h[ij] = a.h[ij] + b.h[ij];
    }
  return r;
}

inline Dual2 operator-(const Dual2& a) { return dual_detail::chain(a, -a.v, -1.0, 0.0); }
inline Dual2 operator-(const Dual2& a, const Dual2& b) { return a + (-b); }

inline Dual2 operator*(const Dual2& a, const Dual2& b) {
  Dual2 r(a.v * b.v, dual_detail::vars(a, b));
  for (std::size_t i = 0; i < r.n; ++i) r.g[i] = a.g[i] * b.v + a.v * b.g[i];
  for (std::size_t i = 0; i < r.n; ++i)
    for (std::size_t j = 0; j < r.n; ++j) {
      const std::size_t ij = i * Dual2::kMaxVars + j;
      r.h[ij] = a.h[ij] * b.v + a.v * b.h[ij] + a.g[i] * b.g[j] + a.g[j] * b.g[i];
    }
  return r;
}

inline Dual2 operator+(const Dual2& a, double c) {
  Dual2 r = a;
  r.v += c;
  return r;
}
inline Dual2 operator+(double c, const Dual2& a) { return a + c; }
inline Dual2 operator-(const Dual2& a, double c) { return a + (-c); }
inline Dual2 operator-(double c, const Dual2& a) { return (-a) + c; }
inline Dual2 operator*(const Dual2& a, double c) { return dual_detail::chain(a, a.v * c, c, 0.0); }
inline Dual2 operator*(double c, const Dual2& a) { return a * c; }
inline Dual2 operator/(const Dual2& a, double c) { return a * (1.0 / c); }

inline Dual2 reciprocal(const Dual2& a) {
  const double inv = 1.0 / a.v;
  return dual_detail::chain(a, inv, -inv * inv, 2.0 * inv * inv * inv);
}
inline Dual2 operator/(const Dual2& a, const Dual2& b) { return a * reciprocal(b); }
inline Dual2 operator/(double c, const Dual2& a) { return c * reciprocal(a); }

inline Dual2 sin(const Dual2& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return dual_detail::chain(a, s, c, -s);
}
inline Dual2 cos(const Dual2& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return dual_detail::chain(a, c, -s, -c);
}
inline Dual2 exp(const Dual2& a) {
  const double e = std::exp(a.v);
  return dual_detail::chain(a, e, e, e);
}
inline Dual2 log(const Dual2& a) {
  return dual_detail::chain(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v));
}
inline Dual2 sqrt(const Dual2& a) {
  const double s = std::sqrt(a.v);
  return dual_detail::chain(a, s, 0.5 / s, -0.25 / (s * a.v));
}
inline Dual2 tanh(const Dual2& a) {
  const double t = std::tanh(a.v);
  const double d = 1.0 - t * t;
  return dual_detail::chain(a, t, d, -2.0 * t * d);
}
inline Dual2 erfc(const Dual2& a) {
  const double d = -std::numbers::inv_sqrtpi * 2.0 * std::exp(-a.v * a.v);
  return dual_detail::chain(a, std::erfc(a.v), d, -2.0 * a.v * d);
}
/// Integer power; exponent may be zero.
inline Dual2 pow(const Dual2& a, int e) {
  if (e == 0) return Dual2(1.0, a.n);
  const double f1 = e * std::pow(a.v, e - 1);
  const double f2 = e == 1 ? 0.0 : e * (e - 1) * std::pow(a.v, e - 2);
  return dual_detail::chain(a, std::pow(a.v, e), f1, f2);
}

}  // namespace gaussreg
