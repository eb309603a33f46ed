// SPDX-License-Identifier: MIT
#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "gaussreg/smooth_maps.hpp"

namespace gaussreg {

/// Pointwise Malliavin data of f = (f_1..f_k): Gram matrix M of the component
/// gradients, its determinant, adjugate, the gradient of the determinant, and
/// per-component gradient / Hessian (Hilbert-Schmidt) norms.
struct MalliavinSample {
  Eigen::MatrixXd M;
  double delta = 0.0;
  Eigen::MatrixXd A;
  Eigen::VectorXd grad_delta;
  std::vector<double> grad_norms;
  std::vector<double> hess_norms;
};

/// Determinant and adjugate of a square matrix: explicit cofactors up to 4x4,
/// pivoted LU above that with a cofactor fallback when ill-conditioned.
struct DetAdj {
  double det = 0.0;
  Eigen::MatrixXd adj;
};
[[nodiscard]] DetAdj determinant_adjugate(const Eigen::MatrixXd& m);

[[nodiscard]] MalliavinSample malliavin_from_jets(const std::vector<Jet2>& jets);
[[nodiscard]] MalliavinSample malliavin_at(const MapSpec& map, std::span<const double> x);

/// max |A M - delta I| relative to max(1, max|M|).
[[nodiscard]] double adjugate_residual(const MalliavinSample& s);

/// Max-norm residual of M (d_1 phi(f), ..., d_k phi(f)) = (<grad(phi o f), grad f_j>)_j
/// relative to max(1, largest term). phi maps R^k -> R; grad(phi o f) is
/// obtained by differentiating the composition directly.
[[nodiscard]] double chain_identity_residual(const MapSpec& map, const MapSpec& testfn,
                                             std::span<const double> x);

struct BoundPair {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// lhs = |<grad f_j, grad delta>|, rhs = 2 (sum_m |grad f_m|)^{2k} sum_i ||D^2 f_i||_HS.
[[nodiscard]] BoundPair grad_delta_bound_margin(const MapSpec& map, std::size_t j,
                                                std::span<const double> x);
[[nodiscard]] BoundPair grad_delta_bound_margin(const MalliavinSample& s,
                                                const std::vector<Jet2>& jets, std::size_t j);

}  // namespace gaussreg
