// SPDX-License-Identifier: MIT
// Dense two-phase tableau simplex with Bland's rule. Test-only reference
// solver for small linear programs; deliberately unrelated to the network
// code it checks.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace lp_oracle {

struct Result {
  bool feasible = false;
  double value = 0.0;
  std::vector<double> x;
};

/// maximize c.x subject to A x = b, x >= 0.
inline Result maximize_equality(std::vector<std::vector<double>> A, std::vector<double> b,
                                const std::vector<double>& c) {
  const double eps = 1e-11;
  std::size_t m = A.size();
  const std::size_t n = c.size();
  for (std::size_t i = 0; i < m; ++i) {
    if (b[i] < 0) {
      for (double& v : A[i]) v = -v;
      b[i] = -b[i];
    }
  }
  // columns: n structural, m artificial, then rhs
  const std::size_t cols = n + m;
  std::vector<std::vector<double>> T(m, std::vector<double>(cols + 1, 0.0));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) T[i][j] = A[i][j];
    T[i][n + i] = 1.0;
    T[i][cols] = b[i];
    basis[i] = n + i;
  }
  std::vector<char> allowed(cols, 1);

  auto run = [&](const std::vector<double>& cost) {
    for (int guard = 0; guard < 100000; ++guard) {
      // reduced costs
      std::size_t enter = cols;
      for (std::size_t j = 0; j < cols && enter == cols; ++j) {
        if (!allowed[j]) continue;
        double r = cost[j];
        for (std::size_t i = 0; i < T.size(); ++i) r -= cost[basis[i]] * T[i][j];
        if (r > eps) enter = j;
      }
      if (enter == cols) return true;
      std::size_t leave = T.size();
      double best = INFINITY;
      for (std::size_t i = 0; i < T.size(); ++i) {
        if (T[i][enter] > eps) {
          const double ratio = T[i][cols] / T[i][enter];
          if (leave == T.size() || ratio < best - 1e-14 ||
              (std::abs(ratio - best) <= 1e-14 && basis[i] < basis[leave])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave == T.size()) return false;  // unbounded
      const double piv = T[leave][enter];
      for (double& v : T[leave]) v /= piv;
      for (std::size_t i = 0; i < T.size(); ++i) {
        if (i == leave || T[i][enter] == 0.0) continue;
        const double f = T[i][enter];
        for (std::size_t j = 0; j <= cols; ++j) T[i][j] -= f * T[leave][j];
      }
      basis[leave] = enter;
    }
    throw std::runtime_error("lp_oracle: iteration limit");
  };

  std::vector<double> phase1(cols, 0.0);
  for (std::size_t i = 0; i < m; ++i) phase1[n + i] = -1.0;
  run(phase1);
  double infeas = 0.0;
  for (std::size_t i = 0; i < T.size(); ++i)
    if (basis[i] >= n) infeas += T[i][cols];
  Result res;
  if (infeas > 1e-9) return res;

  // drive artificials out of the basis, dropping redundant rows
  for (std::size_t i = 0; i < T.size();) {
    if (basis[i] < n) {
      ++i;
      continue;
    }
    std::size_t col = n;
    for (std::size_t j = 0; j < n; ++j)
      if (std::abs(T[i][j]) > 1e-9) { col = j; break; }
    if (col == n) {
      T.erase(T.begin() + static_cast<long>(i));
      basis.erase(basis.begin() + static_cast<long>(i));
      continue;
    }
    const double piv = T[i][col];
    for (double& v : T[i]) v /= piv;
    for (std::size_t r = 0; r < T.size(); ++r) {
      if (r == i || T[r][col] == 0.0) continue;
      const double f = T[r][col];
      for (std::size_t j = 0; j <= cols; ++j) T[r][j] -= f * T[i][j];
    }
    basis[i] = col;
    ++i;
  }
  for (std::size_t j = n; j < cols; ++j) allowed[j] = 0;
  std::vector<double> phase2(cols, 0.0);
  for (std::size_t j = 0; j < n; ++j) phase2[j] = c[j];
  if (!run(phase2)) throw std::runtime_error("lp_oracle: unbounded");
  res.feasible = true;
  res.x.assign(n, 0.0);
  for (std::size_t i = 0; i < T.size(); ++i)
    if (basis[i] < n) res.x[basis[i]] = T[i][cols];
  for (std::size_t j = 0; j < n; ++j) res.value += c[j] * res.x[j];
  return res;
}

/// maximize c.x subject to A x <= b (b >= 0), x >= 0, via slacks.
inline Result maximize_inequality(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                                  const std::vector<double>& c) {
  const std::size_t m = A.size(), n = c.size();
  std::vector<std::vector<double>> E(m, std::vector<double>(n + m, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) E[i][j] = A[i][j];
    E[i][n + i] = 1.0;
  }
  std::vector<double> cc(c);
  cc.resize(n + m, 0.0);
  Result r = maximize_equality(E, b, cc);
  r.x.resize(n);
  return r;
}

}  // namespace lp_oracle
