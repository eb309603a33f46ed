// SPDX-License-Identifier: MIT
// Acceptance run: every suite at N = 1e6, seed 1, one PASS/FAIL line per
// criterion. Exit status is nonzero iff a criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gaussreg/catalog.hpp"
#include "gaussreg/harness.hpp"
#include "gaussreg/measures.hpp"
#include "gaussreg/report.hpp"
#include "transport_oracle.hpp"

using namespace gaussreg;

namespace {

constexpr std::size_t kSamples = 1'000'000;

struct Timed {
  SuiteResult result;
  double seconds = 0.0;
};

std::map<std::string, Timed> g_runs;

Timed run_timed(const std::string& suite) {
  HarnessConfig c;
  c.samples = kSamples;
  c.seed = 1;
  const auto t0 = std::chrono::steady_clock::now();
  Timed t;
  t.result = run_suite(suite, c);
  t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("  suite %-10s %4zu rows %3zu fits %7.1f s\n", suite.c_str(), t.result.bounds.size(),
              t.result.scalings.size(), t.seconds);
  std::fflush(stdout);
  return t;
}

double param(const Params& p, const std::string& key, double fallback = NAN) {
  for (const auto& [k, v] : p) {
    if (k == key) return v;
  }
  return fallback;
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

std::vector<const BoundCheck*> rows(const std::string& suite, const std::string& prefix) {
  std::vector<const BoundCheck*> out;
  for (const auto& b : g_runs.at(suite).result.bounds) {
    if (starts_with(b.name, prefix)) out.push_back(&b);
  }
  return out;
}

bool not_failed(const BoundCheck& b) { return b.verdict == Verdict::kPass || b.verdict == Verdict::kPassWithinError; }

// Collects problems for one criterion; the line is PASS iff none were found.
class Criterion {
 public:
  Criterion(int id, std::string title) : id_(id), title_(std::move(title)) {}
  void require(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && problems_.size() < 8) problems_.push_back(what);
    if (!ok) ++failures_;
  }
  void note(const std::string& s) { notes_.push_back(s); }
  bool report() const {
    const bool ok = failures_ == 0 && checks_ > 0;
    std::printf("[criterion %2d] %s: %s (%d checks", id_, ok ? "PASS" : "FAIL", title_.c_str(), checks_);
    if (failures_ > 0) std::printf(", %d failed", failures_);
    std::printf(")\n");
    for (const auto& n : notes_) std::printf("    %s\n", n.c_str());
    for (const auto& p : problems_) std::printf("    failed: %s\n", p.c_str());
    std::fflush(stdout);
    return ok;
  }

 private:
  int id_;
  std::string title_;
  int checks_ = 0;
  int failures_ = 0;
  std::vector<std::string> problems_;
  std::vector<std::string> notes_;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

bool criterion_1() {
  Criterion c(1, "adjugate and chain identities, relative residual <= 1e-10 on 1e4 points x catalog, <= 10 s");
  double worst = 0.0;
  std::set<std::string> maps;
  for (const std::string prefix : {"adjugate_identity[", "chain_identity["}) {
    for (const BoundCheck* b : rows("identities", prefix)) {
      c.require(b->lhs <= 1e-10, b->name + " residual " + fmt("%.3g", b->lhs));
      c.require(param(b->params, "points") == 1e4, b->name + " point count");
      worst = std::max(worst, b->lhs);
      maps.insert(b->name.substr(b->name.find('[')));
    }
  }
  for (const auto& e : map_catalog()) {
    std::vector<std::string> names;
    if (e.name.find('<') != std::string::npos) {
      const std::string family = e.name.substr(0, e.name.find(':'));
      for (int n : {1, 3, 50}) names.push_back(builtin_map(family + ":" + std::to_string(n)).name());
    } else {
      names.push_back(e.name);
    }
    for (const auto& n : names) c.require(maps.count("[" + n + "]") == 1, "catalog entry " + n + " missing");
  }
  c.require(g_runs.at("identities").seconds <= 10.0, "runtime " + fmt("%.1f s", g_runs.at("identities").seconds));
  c.note(fmt("%.0f maps, worst residual %.3g, suite time %.1f s", double(maps.size()), worst,
             g_runs.at("identities").seconds));
  return c.report();
}

bool criterion_2() {
  Criterion c(2, "integration-by-parts identities within 4 combined stderr at N = 1e6, eps in {1, 0.1, 0.01}, <= 60 s");
  std::set<double> eps_seen;
  double worst = 0.0;
  for (const std::string prefix : {"ibp_1d[", "ibp_kd["}) {
    for (const BoundCheck* b : rows("ibp", prefix)) {
      const double err = param(b->params, "paired_err");
      const double gap = std::abs(b->lhs - b->rhs);
      c.require(gap <= 4.0 * err + 1e-12 * std::max(std::abs(b->lhs), std::abs(b->rhs)),
                b->name + fmt(" eps=%g gap %.3g > 4 x %.3g", param(b->params, "eps"), gap, err));
      c.require(param(b->params, "N") == double(kSamples), b->name + " sample count");
      eps_seen.insert(param(b->params, "eps"));
      if (err > 0.0) worst = std::max(worst, gap / err);
    }
  }
  c.require(eps_seen == std::set<double>{1.0, 0.1, 0.01}, "epsilon grid");
  c.require(g_runs.at("ibp").seconds <= 60.0, "runtime " + fmt("%.1f s", g_runs.at("ibp").seconds));
  c.note(fmt("largest |lhs - rhs| / stderr = %.2f, suite time %.1f s", worst, g_runs.at("ibp").seconds));
  return c.report();
}

bool criterion_3() {
  Criterion c(3, "u(const c, eps) = eps/(eps+c): identity path 1e-12, quadrature path 4 stderr, paths agree");
  for (const BoundCheck* b : rows("identities", "u_const_identity")) {
    const double cval = param(b->params, "c"), eps = param(b->params, "eps");
    c.require(std::abs(b->lhs - eps / (eps + cval)) <= 1e-12, b->name + fmt(" c=%g eps=%g", cval, eps));
  }
  for (const BoundCheck* b : rows("identities", "u_const_quadrature")) {
    const double cval = param(b->params, "c"), eps = param(b->params, "eps");
    c.require(std::abs(b->lhs - eps / (eps + cval)) <= 4.0 * b->lhs_err, b->name + fmt(" c=%g eps=%g", cval, eps));
  }
  for (const BoundCheck* b : rows("identities", "u_paths_agree[")) {
    c.require(std::abs(b->lhs - b->rhs) <= 4.0 * param(b->params, "paired_err"),
              b->name + fmt(" eps=%g", param(b->params, "eps")));
  }
  return c.report();
}

bool criterion_4() {
  Criterion c(4, "small-ball moment bound lhs <= r eps^-r u: equality case 1e-12, sampled cases 4 stderr");
  for (const BoundCheck* b : rows("identities", "small_ball_moment_equality")) {
    c.require(std::abs(b->lhs - b->rhs) <= 1e-12 * std::max(1.0, std::abs(b->rhs)),
              fmt("equality eps=%g gap %.3g", param(b->params, "eps"), std::abs(b->lhs - b->rhs)));
  }
  std::set<std::pair<double, double>> grid;
  for (const BoundCheck* b : rows("identities", "small_ball_moment[")) {
    c.require(b->lhs <= b->rhs * (1.0 + 1e-12) + 4.0 * std::hypot(b->lhs_err, b->rhs_err),
              b->name + fmt(" r=%g eps=%g", param(b->params, "r"), param(b->params, "eps")));
    grid.insert({param(b->params, "r"), param(b->params, "eps")});
  }
  c.require(grid.size() == 6, "(r, eps) grid coverage");
  return c.report();
}

bool criterion_5() {
  Criterion c(5, "distance oracles: Gaussian pair TV within 2%, two-point KR and K exact, LP = primal transport");
  const double exact = 4.0 * std::erfc(-0.5 / std::sqrt(2.0)) / 2.0 - 2.0;
  for (const BoundCheck* b : rows("distances", "tv_gaussian_pair[")) {
    const double est = param(b->params, "estimate");
    c.require(std::abs(est - exact) <= 0.02 * exact, b->name + fmt(" estimate %.5f", est));
    c.note(b->name + fmt(": %.5f vs %.5f", est, exact));
  }
  for (const BoundCheck* b : rows("distances", "kr_two_point")) {
    c.require(b->lhs == b->rhs || std::abs(b->lhs - b->rhs) <= 1e-12 * b->rhs, b->name + fmt(" h=%g", param(b->params, "h")));
  }
  for (const BoundCheck* b : rows("distances", "kantorovich_two_point")) {
    c.require(std::abs(b->lhs - b->rhs) <= 1e-12 * b->rhs, b->name + fmt(" h=%g", param(b->params, "h")));
  }
  for (const BoundCheck* b : rows("distances", "kantorovich_vs_cdf")) c.require(not_failed(*b), b->name);
  // Independent route: dense simplex on the primal transport LP.
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 44; ++trial) {
    const std::size_t dim = 1 + trial % 2, atoms = 2 + trial % 11;
    std::vector<double> pts, w;
    double total = 0.0;
    for (std::size_t i = 0; i < atoms; ++i) {
      for (std::size_t a = 0; a < dim; ++a) pts.push_back(1.5 * gauss(rng));
      w.push_back(unif(rng));
      total += w.back();
    }
    const EmpiricalMeasure signed_measure(dim, pts, w);
    for (double& x : w) x -= total / static_cast<double>(atoms);
    const EmpiricalMeasure balanced(dim, pts, w);
    const double kr = kr_norm(signed_measure).value, kr_ref = transport_oracle::transport_lp(signed_measure, true);
    const double k = kantorovich_norm(balanced).value, k_ref = transport_oracle::transport_lp(balanced, false);
    c.require(std::abs(kr - kr_ref) <= 1e-9 * std::max(1.0, kr_ref), fmt("KR trial %g: %.12g vs %.12g", trial, kr, kr_ref));
    c.require(std::abs(k - k_ref) <= 1e-9 * std::max(1.0, k_ref), fmt("K trial %g: %.12g vs %.12g", trial, k, k_ref));
    worst = std::max({worst, std::abs(kr - kr_ref), std::abs(k - k_ref)});
  }
  c.note(fmt("44 random supports of 2..12 atoms in R and R^2: largest LP gap %.2g", worst));
  return c.report();
}

bool criterion_6() {
  Criterion c(6, "shift-modulus constants 2 and 6 (x1.05) on normal, chi2_1, uniform; sigma converged within 1%");
  const std::set<double> grid{0.05, 0.1, 0.2, 0.5};
  std::map<std::string, std::set<double>> seen;
  double tightest = 0.0;
  for (const std::string prefix : {"shift_tv_vs_modulus[", "modulus_vs_shift_tv["}) {
    for (const BoundCheck* b : rows("modulus", prefix)) {
      const bool shift = prefix == "shift_tv_vs_modulus[";
      const double x = shift ? param(b->params, "h") : param(b->params, "t");
      if (!grid.count(x)) continue;
      seen[b->name].insert(x);
      c.require(b->lhs <= 1.05 * b->rhs, b->name + fmt(" at %g: %.6g > 1.05 x %.6g", x, b->lhs, b->rhs));
      c.require(param(b->params, "change") <= 0.01, b->name + fmt(" at %g: refinement change %.3g", x,
                                                                  param(b->params, "change")));
      if (b->rhs > 0.0) tightest = std::max(tightest, b->lhs / b->rhs);
    }
  }
  c.require(seen.size() == 6, "densities x inequalities coverage");
  for (const auto& [name, xs] : seen) c.require(xs == grid, name + " grid coverage");
  c.note(fmt("largest lhs/rhs = %.4f (near-equality case of the constant 2)", tightest));
  return c.report();
}

bool criterion_7() {
  Criterion c(7, "Besov exponents: oracle ranges, empirical within 0.05 at N = 1e6, each >= predicted alpha");
  for (const std::string d : {"normal", "chi2_1", "uniform"}) {
    for (const BoundCheck* b : rows("besov", "besov_oracle_low[" + d + "]")) c.require(not_failed(*b), b->name);
    for (const BoundCheck* b : rows("besov", "besov_oracle_high[" + d + "]")) c.require(not_failed(*b), b->name);
    for (const BoundCheck* b : rows("besov", "besov_empirical_vs_oracle[" + d + "]")) {
      c.require(b->lhs <= 0.05, b->name + fmt(" gap %.4f", b->lhs));
      c.note(d + fmt(": oracle %.4f, empirical %.4f", param(b->params, "oracle"), param(b->params, "alpha_hat")));
    }
  }
  int fits = 0;
  for (const auto& s : g_runs.at("besov").result.scalings) {
    ++fits;
    c.require(s.verdict == Verdict::kPass && s.fitted_exponent >= s.predicted_exponent - kExponentSlack,
              s.name + fmt(" p=%g theta=%g", param(s.params, "p"), param(s.params, "theta")));
  }
  c.require(fits >= 20, "(p, theta) grid coverage");
  for (const BoundCheck* b : rows("besov", "moment_hypothesis_detector[")) c.require(not_failed(*b), b->name);
  return c.report();
}

bool criterion_8(double total_seconds) {
  Criterion c(8, "scaling fits on x1, x1sq, (x1,x2), (x1sq,x2): slope >= predicted - 0.05, r2 >= 0.9, spread <= 5");
  const std::set<std::string> wanted{"modulus_scaling_1d[x1]", "modulus_scaling_1d[x1sq]", "modulus_scaling_kd[x1_x2]",
                                     "modulus_scaling_kd[x1sq_x2]"};
  std::set<std::string> seen;
  for (const auto& s : g_runs.at("scaling").result.scalings) {
    if (!wanted.count(s.name)) continue;
    seen.insert(s.name);
    c.require(s.fitted_exponent >= s.predicted_exponent - kExponentSlack, s.name + fmt(" slope %.3f", s.fitted_exponent));
    c.require(s.r_squared >= kMinRSquared, s.name + fmt(" r2 %.3f", s.r_squared));
    c.require(s.constant_spread <= kMaxConstantSpread, s.name + fmt(" spread %.3f", s.constant_spread));
    c.note(s.name + fmt(": slope %.3f (predicted %.3f), r2 %.4f", s.fitted_exponent, s.predicted_exponent,
                        s.r_squared) + fmt(", spread %.3f", s.constant_spread));
  }
  c.require(seen == wanted, "all four maps present");
  for (const auto& s : g_runs.at("scaling").result.scalings) {
    c.require(s.verdict != Verdict::kFail, s.name + " (other scaling fits in the suite)");
  }
  c.require(total_seconds <= 600.0, fmt("full verify %.1f s > 600 s", total_seconds));
  c.note(fmt("full verify suite at N = 1e6: %.1f s", total_seconds));
  return c.report();
}

bool criterion_9() {
  Criterion c(9, "convergence demos: monotone TV_n, below 0.02 at n = 50, under the fitted bound; vacuity fires");
  for (const std::string seq : {"convergence_1d[perturbed_1d]", "convergence_2d[perturbed_2d]"}) {
    int monotone = 0, bound = 0, limit = 0;
    for (const BoundCheck* b : rows("demos", seq)) {
      const std::string tail = b->name.substr(seq.size());
      if (starts_with(tail, "_monotone")) {
        ++monotone;
        c.require(not_failed(*b), b->name);
      } else if (starts_with(tail, "_limit")) {
        ++limit;
        c.require(b->lhs <= 0.02, b->name + fmt(" TV %.4f", b->lhs));
        c.note(seq + fmt(": TV at n = 50 is %.4f +- %.4f", b->lhs, b->lhs_err));
      } else if (starts_with(tail, "_bound") && b->verdict != Verdict::kReportOnly) {
        ++bound;
        c.require(not_failed(*b), b->name);
      }
    }
    c.require(monotone >= 8 && limit == 1 && bound >= 6, seq + " row coverage");
  }
  for (const std::string seq : {"convergence_1d[vanishing_1d]", "convergence_2d[vanishing_2d]"}) {
    const auto r = rows("demos", seq);
    c.require(!r.empty(), seq + " rows");
    for (const BoundCheck* b : r) c.require(b->verdict == Verdict::kVacuous, b->name + " not flagged vacuous");
  }
  for (const BoundCheck* b : rows("demos", "convergence_constant_tv")) c.require(b->lhs == 0.0, "constant sequence");
  return c.report();
}

bool criterion_10(const Report& first) {
  Criterion c(10, "determinism: a second full verify run with the same seed gives byte-identical numeric columns");
  HarnessConfig h;
  h.samples = kSamples;
  h.seed = 1;
  const auto t0 = std::chrono::steady_clock::now();
  Report second;
  append_rows(second, run_suite("all", h));
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::string a = numeric_columns(first), b = numeric_columns(second);
  c.require(a == b, "numeric columns differ");
  c.require(first.rows.size() > 300, "row count");
  c.note(fmt("%.0f rows, %.0f bytes, second run %.1f s", double(first.rows.size()), double(a.size()), dt));
  return c.report();
}

}  // namespace

int main() {
  std::printf("acceptance run: N = %zu, seed = 1\n", kSamples);
  double total = 0.0;
  SuiteResult merged;
  for (const auto& name : suite_names()) {
    if (name == "all") continue;
    g_runs[name] = run_timed(name);
    total += g_runs[name].seconds;
    merged.append(g_runs[name].result);
  }
  Report combined;
  append_rows(combined, merged);
  int failed = 0;
  failed += !criterion_1();
  failed += !criterion_2();
  failed += !criterion_3();
  failed += !criterion_4();
  failed += !criterion_5();
  failed += !criterion_6();
  failed += !criterion_7();
  failed += !criterion_8(total);
  failed += !criterion_9();
  failed += !criterion_10(combined);
  std::printf("%d of 10 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
