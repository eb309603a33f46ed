// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <vector>

namespace gaussreg {

/// Primal network simplex for uncapacitated min-cost flow with real supplies
/// (supply = outflow - inflow, summing to zero). Starts from an artificial
/// star tree and keeps the basis strongly feasible, so degenerate pivots
/// cannot cycle.
class NetworkSimplex {
 public:
  enum class Status { kOptimal, kInfeasible };

  explicit NetworkSimplex(std::size_t node_count);

  std::size_t add_arc(std::size_t from, std::size_t to, double cost);
  void set_supply(std::size_t node, double supply);

  Status solve();

  [[nodiscard]] double total_cost() const;
  [[nodiscard]] double flow(std::size_t arc) const { return flow_[arc]; }
  /// Node potentials pi with cost(a) + pi(from) - pi(to) >= 0 on every arc
  /// and equality on arcs carrying flow.
  [[nodiscard]] double potential(std::size_t node) const { return pi_[node]; }
  [[nodiscard]] std::size_t pivots() const noexcept { return pivots_; }

 private:
  void init_tree();
  long find_entering();
  void pivot(std::size_t entering);
  void detach_child(std::size_t node);
  void attach_child(std::size_t parent, std::size_t node);

  std::size_t nodes_;
  std::size_t real_arcs_ = 0;
  std::size_t root_;
  std::vector<double> supply_;
  std::vector<std::size_t> src_, dst_;
  std::vector<double> cost_, flow_;
  std::vector<char> in_tree_;

  std::vector<double> pi_;
  std::vector<std::size_t> parent_, pred_, depth_;
  std::vector<char> up_;  // pred arc points from the node to its parent
  std::vector<std::vector<std::size_t>> kids_;
  std::vector<std::size_t> pos_in_parent_;

  double eps_ = 0.0;
  double flow_tol_ = 0.0;
  std::size_t next_arc_ = 0;
  std::size_t block_ = 1;
  std::size_t pivots_ = 0;
};

}  // namespace gaussreg
