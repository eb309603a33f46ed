// SPDX-License-Identifier: MIT
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>
#include <cmath>
#include <random>

#include "gaussreg/catalog.hpp"
#include "gaussreg/densities.hpp"
#include "gaussreg/error.hpp"
#include "gaussreg/measures.hpp"
#include "gaussreg/smoothness.hpp"
#include "lp_oracle.hpp"

using namespace gaussreg;

namespace {

std::vector<double> abs_normals(std::size_t n, std::uint64_t seed, int power) {
  const SampleBatch b = sample(GaussianSpace(1), n, seed, 0);
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = std::pow(std::abs(b.point(i)[0]), power);
  return g;
}

// E[eps / (eps + |X|^power)] by a fine midpoint rule against the half-normal density.
double u_reference(double eps, int power) {
  const int n = 400000;
  const double hi = 12.0, dx = hi / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = (i + 0.5) * dx;
    s += eps / (eps + std::pow(x, power)) * 2.0 * normal_pdf(x) * dx;
  }
  return s;
}

// Same LP in node values phi_j in [-t, t] via the dense simplex on phi + t.
double dense_sigma_lp(const std::vector<double>& e, const std::vector<double>& m, double t) {
  const std::size_t nodes = e.size();
  std::vector<double> c(nodes, 0.0);
  for (std::size_t k = 0; k < m.size(); ++k) {
    const double s = m[k] / (e[k + 1] - e[k]);
    c[k + 1] += s;
    c[k] -= s;
  }
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  for (std::size_t j = 0; j < nodes; ++j) {
    std::vector<double> row(nodes, 0.0);
    row[j] = 1.0;
    A.push_back(row);
    b.push_back(2.0 * t);
  }
  for (std::size_t k = 0; k + 1 < nodes; ++k) {
    std::vector<double> row(nodes, 0.0);
    row[k + 1] = 1.0;
    row[k] = -1.0;
    A.push_back(row);
    b.push_back(e[k + 1] - e[k]);
    for (double& v : row) v = -v;
    A.push_back(row);
    b.push_back(e[k + 1] - e[k]);
  }
  const auto res = lp_oracle::maximize_inequality(A, b, c);
  REQUIRE(res.feasible);
  double shift = 0.0;  // objective of the constant -t, zero since sum c = 0
  for (double v : c) shift += v;
  return res.value - t * shift;
}

EmpiricalMeasure normal_sample(std::size_t n, std::uint64_t seed) {
  return pushforward(builtin_map("x1"), sample(GaussianSpace(1), n, seed, 0));
}

}  // namespace

TEST_CASE("u of a constant is eps/(eps+c) on both paths") {
  for (double c : {0.0, 0.3, 1.0, 7.5}) {
    for (double eps : {1.0, 0.1, 0.01}) {
      const std::vector<double> g(5000, c);
      const double expected = eps / (eps + c);
      CHECK(std::abs(u_gamma(g, eps).estimate.mean - expected) <= 1e-12);
      CHECK(u_gamma(g, eps).estimate.std_error == 0.0);
      const UGammaEstimate q = u_gamma_quadrature(g, eps);
      CHECK(std::abs(q.estimate.mean - expected) <= 4.0 * q.estimate.std_error);
    }
  }
}

TEST_CASE("u paths agree on non-constant g and match the density integral") {
  for (int power : {1, 2}) {
    const auto g = abs_normals(200000, 7, power);
    for (double eps : {1.0, 0.1, 0.01}) {
      const auto a = u_gamma(g, eps).estimate;
      const auto q = u_gamma_quadrature(g, eps).estimate;
      const double combined = std::hypot(a.std_error, q.std_error);
      CHECK(std::abs(a.mean - q.mean) <= 4.0 * combined);
      CHECK(std::abs(a.mean - u_reference(eps, power)) <= 4.0 * a.std_error);
    }
  }
}

TEST_CASE("u input validation") {
  const std::vector<double> g{1.0, -0.5};
  CHECK_THROWS_AS((void)u_gamma(g, 1.0), Error);
  const std::vector<double> ok{1.0};
  CHECK_THROWS_AS((void)u_gamma(ok, 0.0), Error);
  const std::vector<double> bad{std::nan("")};
  try {
    (void)u_gamma(bad, 1.0);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNonFiniteValue);
  }
}

TEST_CASE("small-ball moment bound with its explicit constant") {
  for (double eps : {1.0, 0.1, 0.01}) {
    const std::vector<double> zero(100, 0.0);
    const Lemma11Margin eq = lemma_1_1_margin(zero, 1.0, eps);
    CHECK(std::abs(eq.lhs.mean - eq.rhs.mean) <= 1e-12 * eq.rhs.mean);
  }
  const auto g = abs_normals(100000, 11, 1);
  for (double r : {1.0, 2.0}) {
    for (double eps : {1.0, 0.1, 0.01}) {
      const Lemma11Margin m = lemma_1_1_margin(g, r, eps);
      CHECK(m.lhs.mean <= m.rhs.mean + 4.0 * m.difference_stderr);
    }
  }
}

TEST_CASE("directions are unit vectors and seed-reproducible") {
  const auto d = sigma_directions(3, 5);
  REQUIRE(d.size() == 6 + 16);
  for (const auto& e : d) {
    double n = 0.0;
    for (double v : e) n += v * v;
    CHECK(n == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK(d == sigma_directions(3, 5));
  CHECK(d != sigma_directions(3, 6));
  CHECK(d[1] == std::vector<double>{-1.0, 0.0, 0.0});
}

TEST_CASE("grid LP matches the dense simplex") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> U(0.05, 1.0), W(-1.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t cells = 1 + trial % 9;
    std::vector<double> e{W(rng)};
    for (std::size_t c = 0; c < cells; ++c) e.push_back(e.back() + U(rng));
    std::vector<double> m(cells);
    for (double& v : m) v = W(rng);
    const double t = 0.02 + U(rng);
    const double fast = sigma_grid_lp(e, m, t);
    const double dense = dense_sigma_lp(e, m, t);
    CHECK(fast == doctest::Approx(dense).epsilon(1e-9));
  }
}

TEST_CASE("grid LP scaling: value(s t) <= s value(t)") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(0.01, 0.3), W(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<double> e{0.0};
    std::vector<double> m;
    for (int c = 0; c < 30; ++c) {
      e.push_back(e.back() + U(rng));
      m.push_back(W(rng));
    }
    const double t = 0.02 + 0.1 * W(rng);
    const double base = sigma_grid_lp(e, m, t);
    for (double s : {1.0, 1.5, 3.0, 10.0}) CHECK(sigma_grid_lp(e, m, s * t) <= s * base * (1 + 1e-12) + 1e-15);
  }
  const EmpiricalMeasure mu = normal_sample(20000, 3);
  SigmaOptions fixed;
  fixed.cells = 64;
  const auto dirs = sigma_directions(1, 1, 0);
  const double at = sigma_lower(mu, 0.05, dirs, fixed).lower;
  CHECK(sigma_lower(mu, 0.2, dirs, fixed).lower <= 4.0 * at * (1 + 1e-12));
}

TEST_CASE("oracle modulus matches closed forms") {
  for (double t : {0.05, 0.1, 0.2, 0.5}) {
    const SigmaEstimate n = sigma_lower_oracle("normal", t);
    CHECK(n.converged);
    CHECK(n.lower == doctest::Approx(2.0 * normal_cdf(t) - 1.0).epsilon(0.01));
    CHECK(n.lower <= 2.0 * normal_cdf(t) - 1.0 + 1e-12);
    const SigmaEstimate c = sigma_lower_oracle("chi2_1", t);
    CHECK(c.converged);
    CHECK(c.lower == doctest::Approx(oracle_density("chi2_1").cdf(2.0 * t)).epsilon(0.01));
    const SigmaEstimate u = sigma_lower_oracle("uniform", t);
    CHECK(u.lower == doctest::Approx(std::min(2.0 * t, 1.0)).epsilon(0.01));
  }
  CHECK(sigma_lower_oracle("normal", 10.0).lower >= 0.999);
}

TEST_CASE("two-sided shift bounds hold on the oracle densities") {
  for (const std::string name : {"normal", "chi2_1", "uniform"}) {
    for (double h : {0.05, 0.1, 0.2, 0.5}) {
      const SigmaEstimate half = sigma_lower_oracle(name, h / 2.0);
      REQUIRE(half.converged);
      CHECK(tv_shift_oracle_1d(name, h) <= 2.0 * half.lower * 1.05);
      const SigmaEstimate full = sigma_lower_oracle(name, h);
      CHECK(full.lower <= 6.0 * tv_shift_oracle_1d(name, h) * 1.05);
    }
  }
}

TEST_CASE("empirical modulus of N(0,1)") {
  const EmpiricalMeasure mu = normal_sample(200000, 9);
  const auto dirs = sigma_directions(1, 1);
  const SigmaEstimate s = sigma_lower(mu, 0.05, dirs);
  CHECK(s.lower == doctest::Approx(0.05 * std::sqrt(2.0 / M_PI)).epsilon(0.10));
  const SigmaEstimate big = sigma_lower(mu, 10.0, dirs);
  CHECK(big.lower >= 0.99);
  CHECK(big.lower <= 1.0 + 1e-9);
  const SigmaUpper up = sigma_upper(mu, 0.05, dirs);
  CHECK(s.lower <= up.value + up.error);
}

TEST_CASE("modulus of a point mass") {
  const EmpiricalMeasure d = dirac({0.0});
  const auto dirs = sigma_directions(1, 1, 0);
  CHECK(sigma_lower(d, 0.1, dirs).lower == doctest::Approx(1.0));
  const SigmaUpper up = sigma_upper(d, 0.1, dirs, BinningPolicy::fixed_width(0.01));
  CHECK(up.value == doctest::Approx(12.0));
}

TEST_CASE("modulus sandwich on two-dimensional pushforwards") {
  for (const std::string name : {"rot45", "x1sq_x2", "sin_linear"}) {
    const EmpiricalMeasure mu = pushforward(builtin_map(name), sample(GaussianSpace(2), 100000, 13, 0));
    const auto dirs = sigma_directions(2, 3);
    for (double t : {0.1, 0.3}) {
      const SigmaEstimate lo = sigma_lower(mu, t, dirs);
      const SigmaUpper up = sigma_upper(mu, t, dirs);
      CHECK(lo.lower <= up.value + 4.0 * up.error);
    }
  }
}

TEST_CASE("power-law fit recovers exact exponents") {
  const auto h = geometric_grid(0.01, 1.0, 8);
  CHECK(h.size() == 17);
  CHECK(h.front() == doctest::Approx(0.01));
  CHECK(h.back() == doctest::Approx(1.0));
  std::vector<double> tv, err(h.size(), 0.0);
  for (double v : h) tv.push_back(0.7 * std::pow(v, 0.37));
  const BesovFit f = fit_power_law(h, tv, err);
  CHECK(f.alpha_hat == doctest::Approx(0.37).epsilon(1e-12));
  CHECK(std::exp(f.log_C_hat) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0));
  std::vector<double> noisy_err(h.size(), 1.0);
  try {
    (void)fit_power_law(h, tv, noisy_err);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerateFit);
  }
}

TEST_CASE("Besov exponents of the oracle densities") {
  const double normal = besov_fit_oracle("normal", geometric_grid(0.02, 0.632)).alpha_hat;
  const double chi2 = besov_fit_oracle("chi2_1", geometric_grid(0.02, 0.632)).alpha_hat;
  const double uni = besov_fit_oracle("uniform", geometric_grid(0.0158, 0.5)).alpha_hat;
  MESSAGE("alpha normal " << normal << " chi2 " << chi2 << " uniform " << uni);
  CHECK(normal >= 0.95);
  CHECK(normal <= 1.02);
  CHECK(chi2 >= 0.45);
  CHECK(chi2 <= 0.55);
  CHECK(uni >= 0.95);
  CHECK(uni <= 1.02);
}

TEST_CASE("empirical Besov exponent tracks the oracle") {
  const double e[1] = {1.0};
  const auto grid = geometric_grid(0.02, 0.632);
  const auto t0 = std::chrono::steady_clock::now();
  const EmpiricalMeasure mu = normal_sample(200000, 17);
  const BesovFit f = besov_fit(mu, grid, e);
  const double oracle = besov_fit_oracle("normal", grid).alpha_hat;
  MESSAGE("empirical " << f.alpha_hat << " oracle " << oracle << " in "
                       << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s");
  CHECK(std::abs(f.alpha_hat - oracle) <= 0.05);
}
