// SPDX-License-Identifier: MIT
#include "gaussreg/malliavin.hpp"

#include <algorithm>
#include <cmath>

#include "gaussreg/error.hpp"

namespace gaussreg {
namespace {

double det3(const Eigen::Matrix3d& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

Eigen::MatrixXd minor_of(const Eigen::MatrixXd& m, Eigen::Index row, Eigen::Index col) {
  const Eigen::Index k = m.rows();
  Eigen::MatrixXd out(k - 1, k - 1);
  for (Eigen::Index i = 0, r = 0; i < k; ++i) {
    if (i == row) continue;
    for (Eigen::Index j = 0, c = 0; j < k; ++j) {
      if (j == col) continue;
      out(r, c++) = m(i, j);
    }
    ++r;
  }
  return out;
}

double small_det(const Eigen::MatrixXd& m) {
  switch (m.rows()) {
    case 0: return 1.0;
    case 1: return m(0, 0);
    case 2: return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    case 3: return det3(m);
    default: return m.fullPivLu().determinant();
  }
}

DetAdj by_cofactors(const Eigen::MatrixXd& m) {
  const Eigen::Index k = m.rows();
  DetAdj out{0.0, Eigen::MatrixXd(k, k)};
  if (k == 1) {
    out.det = m(0, 0);
    out.adj(0, 0) = 1.0;
    return out;
  }
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      out.adj(i, j) = sign * small_det(minor_of(m, j, i));
    }
  }
  for (Eigen::Index j = 0; j < k; ++j) out.det += m(0, j) * out.adj(j, 0);
  return out;
}

}  // namespace

DetAdj determinant_adjugate(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "determinant_adjugate needs a square matrix");
  }
  const Eigen::Index k = m.rows();
  if (k <= 4) return by_cofactors(m);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  const double cond = s(k - 1) > 0.0 ? s(0) / s(k - 1) : INFINITY;
  if (cond > 1e12) return by_cofactors(m);
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  DetAdj out{lu.determinant(), Eigen::MatrixXd()};
  out.adj = out.det * lu.inverse();
  return out;
}

MalliavinSample malliavin_from_jets(const std::vector<Jet2>& jets) {
  if (jets.empty()) throw Error(ErrorCode::kInvalidArgument, "no component jets");
  const std::size_t k = jets.size();
  const Eigen::Index n = jets[0].gradient.size();
  MalliavinSample s;
  s.M.resize(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      s.M(i, j) = s.M(j, i) = jets[i].gradient.dot(jets[j].gradient);
    }
    s.grad_norms.push_back(jets[i].gradient.norm());
    s.hess_norms.push_back(jets[i].hessian.norm());
  }
  DetAdj da = determinant_adjugate(s.M);
  // Gram matrix of k > n vectors has rank <= n < k.
  s.delta = static_cast<Eigen::Index>(k) > n ? 0.0 : da.det;
  s.A = std::move(da.adj);
  // Jacobi: d_l det M = sum_ij A_ji d_l m_ij, d_l m_ij = (H_i g_j + H_j g_i)_l.
  s.grad_delta = Eigen::VectorXd::Zero(n);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double a = s.A(j, i);
      if (a == 0.0) continue;
      s.grad_delta += a * (jets[i].hessian * jets[j].gradient + jets[j].hessian * jets[i].gradient);
    }
  }
  if (static_cast<Eigen::Index>(k) > n) s.grad_delta.setZero();
  return s;
}

MalliavinSample malliavin_at(const MapSpec& map, std::span<const double> x) {
  if (x.size() != map.dim_in()) {
    throw Error(ErrorCode::kDimensionMismatch, map.name() + ": point has wrong length");
  }
  std::vector<Jet2> jets;
  jets.reserve(map.dim_out());
  for (std::size_t c = 0; c < map.dim_out(); ++c) jets.push_back(map.jet(c, x));
  return malliavin_from_jets(jets);
}

double adjugate_residual(const MalliavinSample& s) {
  const Eigen::Index k = s.M.rows();
  const Eigen::MatrixXd r = s.A * s.M - s.delta * Eigen::MatrixXd::Identity(k, k);
  return r.cwiseAbs().maxCoeff() / std::max(1.0, s.M.cwiseAbs().maxCoeff());
}

double chain_identity_residual(const MapSpec& map, const MapSpec& testfn,
                               std::span<const double> x) {
  const std::size_t n = map.dim_in();
  const std::size_t k = map.dim_out();
  if (testfn.dim_in() != k || testfn.dim_out() != 1) {
    throw Error(ErrorCode::kDimensionMismatch, "test function must map R^k to R");
  }
  if (x.size() != n) throw Error(ErrorCode::kDimensionMismatch, map.name() + ": bad point");
  if (n > Dual2::kMaxVars) {
    throw Error(ErrorCode::kInvalidArgument, "chain identity supports at most 8 variables");
  }
  std::vector<Jet2> jets;
  std::vector<double> fx(k);
  for (std::size_t c = 0; c < k; ++c) {
    jets.push_back(map.jet(c, x));
    fx[c] = jets.back().value;
  }
  const MalliavinSample s = malliavin_from_jets(jets);
  const Eigen::VectorXd dphi = testfn.jet(0, fx).gradient;
  const Eigen::VectorXd lhs = s.M * dphi;

  std::vector<Dual2> xs(n), fs(k);
  for (std::size_t i = 0; i < n; ++i) xs[i] = Dual2::variable(x[i], i, n);
  for (std::size_t c = 0; c < k; ++c) fs[c] = map.compose(c, xs);
  const Dual2 comp = testfn.compose(0, fs);
  Eigen::VectorXd grad_comp(n);
  for (std::size_t i = 0; i < n; ++i) grad_comp[i] = comp.g[i];

  double scale = 1.0, residual = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const double rhs = grad_comp.dot(jets[j].gradient);
    scale = std::max({scale, std::abs(lhs[j]), std::abs(rhs)});
    residual = std::max(residual, std::abs(lhs[j] - rhs));
  }
  return residual / scale;
}

BoundPair grad_delta_bound_margin(const MalliavinSample& s, const std::vector<Jet2>& jets,
                                  std::size_t j) {
  if (j >= jets.size()) throw Error(ErrorCode::kInvalidArgument, "component out of range");
  const double k = static_cast<double>(jets.size());
  double grad_sum = 0.0, hess_sum = 0.0;
  for (std::size_t m = 0; m < jets.size(); ++m) {
    grad_sum += s.grad_norms[m];
    hess_sum += s.hess_norms[m];
  }
  return BoundPair{std::abs(jets[j].gradient.dot(s.grad_delta)),
                   2.0 * std::pow(grad_sum, 2.0 * k) * hess_sum};
}

BoundPair grad_delta_bound_margin(const MapSpec& map, std::size_t j, std::span<const double> x) {
  std::vector<Jet2> jets;
  for (std::size_t c = 0; c < map.dim_out(); ++c) jets.push_back(map.jet(c, x));
  return grad_delta_bound_margin(malliavin_from_jets(jets), jets, j);
}

}  // namespace gaussreg
