// SPDX-License-Identifier: MIT
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "gaussreg/catalog.hpp"
#include "gaussreg/densities.hpp"
#include "gaussreg/measures.hpp"
#include "transport_oracle.hpp"

using namespace gaussreg;
using transport_oracle::pdist;
using transport_oracle::phi_lp;
using transport_oracle::transport_lp;

namespace {

EmpiricalMeasure random_signed(std::mt19937_64& rng, std::size_t dim, std::size_t atoms, bool balanced) {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> pts, w;
  double total = 0.0;
  for (std::size_t i = 0; i < atoms; ++i) {
    for (std::size_t a = 0; a < dim; ++a) pts.push_back(1.5 * gauss(rng));
    w.push_back(unif(rng));
    total += w.back();
  }
  if (balanced) {
    const double avg = total / static_cast<double>(atoms);
    for (double& x : w) x -= avg;
  }
  return EmpiricalMeasure(dim, pts, w);
}

EmpiricalMeasure random_probability(std::mt19937_64& rng, std::size_t dim, std::size_t atoms) {
  std::normal_distribution<double> gauss;
  std::vector<double> pts;
  for (std::size_t i = 0; i < atoms * dim; ++i) pts.push_back(gauss(rng));
  return EmpiricalMeasure::uniform(dim, pts);
}

}  // namespace

TEST_CASE("pushforwards") {
  const auto batch = sample(GaussianSpace(1), 1000000, 1, 0);
  const auto mu = pushforward(builtin_map("x1"), batch);
  CHECK(mu.is_probability());
  auto mean_of = [](const EmpiricalMeasure& m) {
    std::vector<double> v(m.points());
    return estimate_from_values(v);
  };
  const auto m1 = mean_of(mu);
  CHECK(std::abs(m1.mean) < 4 * m1.std_error);
  const auto m2 = mean_of(pushforward(builtin_map("x1sq"), batch));
  CHECK(std::abs(m2.mean - 1.0) < 4 * m2.std_error);
  const auto c = pushforward(builtin_map("const"), batch.prefix(100));
  for (double x : c.points()) CHECK(x == 1.5);
  CHECK_THROWS_AS((void)pushforward(builtin_map("x1_x2"), batch), Error);
}

TEST_CASE("shifts") {
  const double h[] = {0.75, -2.0};
  const auto d = shift(dirac({0.0, 0.0}), h);
  CHECK(d.point(0)[0] == 0.75);
  CHECK(d.point(0)[1] == -2.0);
  std::mt19937_64 rng(3);
  const auto mu = random_probability(rng, 2, 50);
  const double zero[] = {0.0, 0.0};
  CHECK(shift(mu, zero).points() == mu.points());
  const double back[] = {-0.75, 2.0};
  const auto round = shift(shift(mu, h), back);
  for (std::size_t i = 0; i < mu.points().size(); ++i) {
    CHECK(round.points()[i] == doctest::Approx(mu.points()[i]).epsilon(1e-15));
  }
}

TEST_CASE("total variation basics") {
  std::mt19937_64 rng(5);
  const auto mu = random_probability(rng, 1, 1000);
  CHECK(tv_distance(mu, mu).value == 0.0);
  const auto a = dirac({0.0});
  const auto b = dirac({1.0});
  const auto rep = tv_distance(a, b, BinningPolicy::fixed_width(0.25));
  CHECK(rep.value == doctest::Approx(2.0));
  CHECK(rep.refined_value == doctest::Approx(2.0));
  const EmpiricalMeasure empty(1, {}, {});
  try {
    (void)tv_distance(mu, empty);
    FAIL("expected EmptyMeasure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptyMeasure);
  }
  const auto four = random_probability(rng, 4, 10);
  CHECK_THROWS_AS((void)tv_distance(four, four), Error);
}

TEST_CASE("total variation between shifted normals") {
  const auto x = sample(GaussianSpace(1), 100000, 2, 0);
  const auto y = sample(GaussianSpace(1), 100000, 2, 1);
  const auto mu = pushforward(builtin_map("x1"), x);
  const auto nu = pushforward(builtin_map("x1_shift_1"), y);
  const double exact = 4 * normal_cdf(0.5) - 2;
  for (const auto& policy : {BinningPolicy::freedman_diaconis(), BinningPolicy::equal_mass()}) {
    const auto rep = tv_distance(mu, nu, policy);
    CHECK(std::abs(rep.value - exact) <= 0.02 * exact);
    CHECK(std::abs(rep.refined_value - exact) <= 0.04 * exact);
    CHECK(rep.value <= 2.0);
  }
}

TEST_CASE("histogram totals") {
  std::mt19937_64 rng(8);
  const auto mu = random_probability(rng, 2, 500);
  const auto edges = histogram_edges(mu, mu, BinningPolicy::freedman_diaconis(), false);
  const auto g = histogram(mu, edges);
  double total = 0.0;
  for (double m : g.mass) total += m;
  CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("KR and Kantorovich on two atoms") {
  for (double h : {0.5, 1.0, 1.9, 3.0, 10.0}) {
    const auto omega = difference(dirac({0.0}), dirac({h}));
    CHECK(kr_norm(omega).value == doctest::Approx(std::min(h, 2.0)).epsilon(1e-14));
    CHECK(kantorovich_norm(omega).value == doctest::Approx(h).epsilon(1e-14));
  }
  const auto planar = difference(dirac({0.0, 0.0}), dirac({0.3, 0.4}));
  CHECK(kr_norm(planar).value == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(kantorovich_norm(planar).value == doctest::Approx(0.5).epsilon(1e-14));
  const EmpiricalMeasure zero(1, {0.0}, {0.0});
  CHECK(kr_norm(zero).value == 0.0);
  CHECK(kantorovich_norm(zero).value == 0.0);
  const EmpiricalMeasure three(1, {0.0, 2.0, 1.0}, {0.5, 0.5, -1.0});
  CHECK(kantorovich_norm(three).value == doctest::Approx(1.0).epsilon(1e-14));
  try {
    (void)kantorovich_norm(dirac({0.0}));
    FAIL("expected MassNotBalanced");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMassNotBalanced);
  }
  // unbalanced signed mass is fine for KR: a lone unit atom has norm 1
  CHECK(kr_norm(dirac({4.0}, 0.7)).value == doctest::Approx(0.7));
}

TEST_CASE("network LP agrees with dense simplex oracles on small supports") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t dim = 1 + trial % 3;
    const std::size_t atoms = 2 + trial % 11;
    const auto w = random_signed(rng, dim, atoms, false);
    const double kr = kr_norm(w).value;
    INFO("trial " << trial << " dim " << dim << " atoms " << atoms);
    CHECK(kr == doctest::Approx(phi_lp(w, 1.0)).epsilon(1e-9));
    CHECK(kr == doctest::Approx(transport_lp(w, true)).epsilon(1e-9));

    const auto z = random_signed(rng, dim, atoms, true);
    double diameter = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i)
      for (std::size_t j = 0; j < z.size(); ++j) diameter = std::max(diameter, pdist(z.point(i), z.point(j)));
    const double k = kantorovich_norm(z).value;
    CHECK(k == doctest::Approx(phi_lp(z, diameter)).epsilon(1e-9));
    CHECK(k == doctest::Approx(transport_lp(z, false)).epsilon(1e-9));
    if (dim == 1) {
      // integral of |F - G| on the line
      std::vector<std::size_t> order(z.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](auto a, auto b) { return z.point(a)[0] < z.point(b)[0]; });
      double cum = 0.0, area = 0.0;
      for (std::size_t r = 0; r + 1 < order.size(); ++r) {
        cum += z.weight(order[r]);
        area += std::abs(cum) * (z.point(order[r + 1])[0] - z.point(order[r])[0]);
      }
      CHECK(k == doctest::Approx(area).epsilon(1e-9));
    }
    // shrinking the test class can only lower the norm
    CHECK(kr_norm(z).value <= k + 1e-12);
    CHECK(kr_norm(z).value <= z.total_variation_mass() + 1e-12);
  }
}

TEST_CASE("metric axioms on empirical measures") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t dim = 1 + trial % 2;
    const auto a = random_probability(rng, dim, 40);
    const auto b = random_probability(rng, dim, 40);
    const auto c = random_probability(rng, dim, 40);
    auto K = [](const EmpiricalMeasure& x, const EmpiricalMeasure& y) { return kantorovich_norm(difference(x, y)).value; };
    CHECK(K(a, b) == doctest::Approx(K(b, a)).epsilon(1e-12));
    CHECK(K(a, c) <= K(a, b) + K(b, c) + 1e-12);
    const auto fixed = BinningPolicy::fixed_width(0.3);
    CHECK(tv_distance(a, b, fixed).value == doctest::Approx(tv_distance(b, a, fixed).value));
    // with a grid common to all three, the triangle inequality is exact
    const EmpiricalMeasure all = difference(difference(a, b), c);
    const auto edges = histogram_edges(all, all, fixed, false);
    auto tv = [&](const EmpiricalMeasure& x, const EmpiricalMeasure& y) {
      const auto gx = histogram(x, edges), gy = histogram(y, edges);
      double s = 0.0;
      for (std::size_t i = 0; i < gx.mass.size(); ++i) s += std::abs(gx.mass[i] - gy.mass[i]);
      return s;
    };
    CHECK(tv(a, c) <= tv(a, b) + tv(b, c) + 1e-12);
  }
}

TEST_CASE("coarsening keeps the error within its bound") {
  const auto batch = sample(GaussianSpace(1), 3000, 4, 0);
  const auto other = sample(GaussianSpace(1), 3000, 4, 1);
  const auto omega = difference(pushforward(builtin_map("x1"), batch),
                                pushforward(builtin_map("x1_shift_1"), other));
  LpOptions wide;
  wide.support_limit = 10000;
  const auto exact = kr_norm(omega, wide);
  CHECK_FALSE(exact.coarsened);
  const auto coarse = kr_norm(omega);
  CHECK(coarse.coarsened);
  CHECK(coarse.support_size <= 2000);
  CHECK(std::abs(coarse.value - exact.value) <= coarse.error_estimate);
  const auto k_exact = kantorovich_norm(omega, wide);
  const auto k_coarse = kantorovich_norm(omega);
  CHECK(std::abs(k_coarse.value - k_exact.value) <= k_coarse.error_estimate);
  LpOptions strict;
  strict.allow_coarsening = false;
  try {
    (void)kr_norm(omega, strict);
    FAIL("expected SupportTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSupportTooLarge);
  }
}

TEST_CASE("2-D transport at the support limit") {
  const auto x = sample(GaussianSpace(2), 1000, 6, 0);
  const auto y = sample(GaussianSpace(2), 1000, 6, 1);
  const auto omega = difference(pushforward(builtin_map("x1_x2"), x), pushforward(builtin_map("rot45"), y));
  const auto kr = kr_norm(omega);
  const auto k = kantorovich_norm(omega);
  CHECK_FALSE(kr.coarsened);
  CHECK(kr.value > 0.0);
  CHECK(kr.value <= k.value + 1e-12);
}

TEST_CASE("shift total variation oracle") {
  for (double h : {0.0, 0.05, 0.2, 1.0, 3.0}) {
    CHECK(tv_shift_oracle_1d("normal", h) == doctest::Approx(4 * normal_cdf(h / 2) - 2).epsilon(1e-12));
    CHECK(tv_shift_oracle_1d("chi2_1", h) == doctest::Approx(2 * (2 * normal_cdf(std::sqrt(h)) - 1)).epsilon(1e-12));
    CHECK(tv_shift_oracle_1d("uniform", h) == doctest::Approx(std::min(2 * h, 2.0)).epsilon(1e-12));
    CHECK(tv_shift_oracle_1d("normal", -h) == tv_shift_oracle_1d("normal", h));
  }
  CHECK(tv_shift_oracle_1d("normal", 1.0) == doctest::Approx(0.76585).epsilon(1e-5));
  CHECK(tv_shift_oracle_1d("uniform", 0.25) == doctest::Approx(0.5));
  CHECK_THROWS_AS((void)tv_shift_oracle_1d("cauchy", 0.1), Error);
  for (const auto& name : oracle_density_names()) {
    double prev = 0.0;
    for (double h = 0.01; h < 3.0; h *= 1.3) {
      const double v = tv_shift_oracle_1d(name, h);
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("measure text round-trip") {
  std::mt19937_64 rng(1);
  const auto w = random_signed(rng, 3, 20, false);
  std::stringstream ss;
  write_measure(ss, w);
  const auto back = read_measure(ss);
  CHECK(back.dim() == 3);
  CHECK(back.points() == w.points());
  CHECK(back.weights() == w.weights());
  std::stringstream bad("1 2 3\n4 5\n");
  CHECK_THROWS_AS((void)read_measure(bad), Error);
}
