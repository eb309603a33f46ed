// SPDX-License-Identifier: MIT
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "gaussreg/catalog.hpp"
#include "gaussreg/malliavin.hpp"

using namespace gaussreg;

namespace {

std::vector<double> pt(std::initializer_list<double> v) { return std::vector<double>(v); }

const std::vector<std::string> kVectorMaps{"x1_x2", "x1sq_x2", "x1_x1", "rot45", "sin_linear",
                                           "perturbed_2d:4", "vanishing_2d:3"};

MapSpec phi_product() {
  return MapSpec("y1y2", PolynomialMap(2, {{{{1, 1}, 1.0}}}));
}
MapSpec phi_sum() {
  return MapSpec("y1+y2", PolynomialMap(2, {{{{1, 0}, 1.0}, {{0, 1}, 1.0}}}));
}
MapSpec phi_const() { return MapSpec("c", PolynomialMap(2, {{{{0, 0}, 2.0}}})); }

}  // namespace

TEST_CASE("identity map") {
  const auto s = malliavin_at(builtin_map("x1_x2"), pt({0.3, -1.1}));
  CHECK(s.M.isApprox(Eigen::Matrix2d::Identity()));
  CHECK(s.delta == 1.0);
  CHECK(s.A.isApprox(Eigen::Matrix2d::Identity()));
  CHECK(s.grad_delta.norm() == 0.0);
}

TEST_CASE("degenerate square map") {
  const double a = 1.7, b = -0.4;
  const auto s = malliavin_at(builtin_map("x1sq_x2"), pt({a, b}));
  CHECK(s.M(0, 0) == doctest::Approx(4 * a * a));
  CHECK(s.M(1, 1) == 1.0);
  CHECK(s.M(0, 1) == 0.0);
  CHECK(s.delta == doctest::Approx(4 * a * a));
  CHECK(s.A(0, 0) == 1.0);
  CHECK(s.A(1, 1) == doctest::Approx(4 * a * a));
  CHECK(s.grad_delta[0] == doctest::Approx(8 * a));
  CHECK(s.grad_delta[1] == 0.0);
}

TEST_CASE("rotated map") {
  const auto s = malliavin_at(builtin_map("rot45"), pt({2.0, 5.0}));
  CHECK(s.M.isApprox(2 * Eigen::Matrix2d::Identity()));
  CHECK(s.delta == 4.0);
  CHECK(s.A.isApprox(2 * Eigen::Matrix2d::Identity()));
}

TEST_CASE("dimension mismatch") {
  CHECK_THROWS_AS((void)malliavin_at(builtin_map("x1_x2"), pt({1.0})), Error);
}

TEST_CASE("adjugate identity and Gram positivity over Gaussian points") {
  const auto batch = sample(GaussianSpace(2), 10000, 3, 0);
  for (const auto& name : kVectorMaps) {
    const auto map = builtin_map(name);
    double worst = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const auto s = malliavin_at(map, batch.point(i));
      worst = std::max(worst, adjugate_residual(s));
      double scale = 1.0;
      for (double g : s.grad_norms) scale *= g * g;
      CHECK(s.delta >= -1e-12 * scale);
    }
    INFO(name);
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("determinant gradient matches central differences") {
  for (const auto& name : kVectorMaps) {
    const auto map = builtin_map(name);
    const std::vector<double> x{0.8, -0.35};
    const auto s = malliavin_at(map, x);
    auto delta_at = [&](std::vector<double> y) { return malliavin_at(map, y).delta; };
    double prev = -1.0;
    for (double step : {1e-2, 5e-3}) {
      Eigen::Vector2d fd;
      for (int l = 0; l < 2; ++l) {
        auto xp = x, xm = x;
        xp[l] += step;
        xm[l] -= step;
        fd[l] = (delta_at(xp) - delta_at(xm)) / (2 * step);
      }
      const double err = (fd - s.grad_delta).norm();
      INFO(name << " step " << step);
      if (prev > 1e-9) CHECK(err / prev == doctest::Approx(0.25).epsilon(0.05));
      CHECK(err < 1e-3);
      prev = err;
    }
  }
}

TEST_CASE("more components than variables gives zero determinant") {
  const MapSpec map("three", PolynomialMap(2, {{{{1, 0}, 1.0}}, {{{0, 1}, 1.0}}, {{{1, 1}, 1.0}}}));
  const auto s = malliavin_at(map, pt({0.4, 1.3}));
  CHECK(s.delta == 0.0);
  CHECK(s.grad_delta.norm() == 0.0);
}

TEST_CASE("general determinant and adjugate") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Random(6, 6);
  m = m * m.transpose() + Eigen::MatrixXd::Identity(6, 6);
  const auto da = determinant_adjugate(m);
  CHECK(da.det == doctest::Approx(m.determinant()).epsilon(1e-12));
  CHECK((da.adj * m - da.det * Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() <
        1e-10 * std::max(1.0, std::abs(da.det)));
  // rank-deficient: falls back to cofactors, adjugate still satisfies A M = 0
  Eigen::MatrixXd v = Eigen::MatrixXd::Random(5, 4);
  const Eigen::MatrixXd sing = v * v.transpose();
  const auto ds = determinant_adjugate(sing);
  CHECK(std::abs(ds.det) < 1e-10);
  CHECK((ds.adj * sing).cwiseAbs().maxCoeff() < 1e-9);
  for (int k = 1; k <= 4; ++k) {
    Eigen::MatrixXd r = Eigen::MatrixXd::Random(k, k);
    const auto d = determinant_adjugate(r);
    CHECK(d.det == doctest::Approx(r.determinant()).epsilon(1e-12));
    CHECK((d.adj * r - d.det * Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("chain identity") {
  CHECK(chain_identity_residual(builtin_map("x1_x2"), phi_product(), pt({0.2, 3.0})) < 1e-15);
  CHECK(chain_identity_residual(builtin_map("x1sq_x2"), phi_sum(), pt({1.0, 1.0})) < 1e-15);
  CHECK(chain_identity_residual(builtin_map("x1sq_x2"), phi_const(), pt({1.0, 1.0})) == 0.0);
  const MapSpec phi_sin = make_closure_map("sin-phi", 2, 1, [](auto y, std::size_t) {
    using std::sin;
    return sin(y[0] * y[1]) + y[0] * y[0];
  });
  const auto batch = sample(GaussianSpace(2), 10000, 8, 0);
  for (const auto& name : kVectorMaps) {
    const auto map = builtin_map(name);
    double worst = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      worst = std::max(worst, chain_identity_residual(map, phi_sin, batch.point(i)));
      worst = std::max(worst, chain_identity_residual(map, phi_product(), batch.point(i)));
    }
    INFO(name);
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("determinant gradient bound") {
  const auto id = grad_delta_bound_margin(builtin_map("x1_x2"), 0, pt({0.5, 0.5}));
  CHECK(id.lhs == 0.0);
  CHECK(id.rhs == 0.0);
  const auto sq = grad_delta_bound_margin(builtin_map("x1sq_x2"), 0, pt({1.0, 1.0}));
  CHECK(sq.lhs == doctest::Approx(16.0));
  CHECK(sq.rhs == doctest::Approx(324.0));
  const auto zero = grad_delta_bound_margin(builtin_map("x1sq_x2"), 0, pt({0.0, 2.0}));
  CHECK(zero.lhs == 0.0);
  const auto batch = sample(GaussianSpace(2), 5000, 4, 0);
  for (const auto& name : kVectorMaps) {
    const auto map = builtin_map(name);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      for (std::size_t j = 0; j < 2; ++j) {
        const auto b = grad_delta_bound_margin(map, j, batch.point(i));
        CHECK(b.lhs <= b.rhs + 1e-12 * std::max(1.0, b.rhs));
      }
    }
  }
}
