// SPDX-License-Identifier: MIT
#include "gaussreg/network_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gaussreg/error.hpp"

namespace gaussreg {

NetworkSimplex::NetworkSimplex(std::size_t node_count)
    : nodes_(node_count), root_(node_count), supply_(node_count, 0.0) {}

std::size_t NetworkSimplex::add_arc(std::size_t from, std::size_t to, double cost) {
  if (from >= nodes_ || to >= nodes_) throw Error(ErrorCode::kInvalidArgument, "arc endpoint out of range");
  if (!std::isfinite(cost)) throw Error(ErrorCode::kNonFiniteValue, "arc cost is not finite");
  src_.push_back(from);
  dst_.push_back(to);
  cost_.push_back(cost);
  return real_arcs_++;
}

void NetworkSimplex::set_supply(std::size_t node, double supply) {
  if (node >= nodes_) throw Error(ErrorCode::kInvalidArgument, "node out of range");
  supply_[node] = supply;
}

double NetworkSimplex::total_cost() const {
  double sum = 0.0;
  for (std::size_t a = 0; a < real_arcs_; ++a) sum += cost_[a] * flow_[a];
  return sum;
}

void NetworkSimplex::detach_child(std::size_t node) {
  auto& siblings = kids_[parent_[node]];
  const std::size_t pos = pos_in_parent_[node];
  siblings[pos] = siblings.back();
  pos_in_parent_[siblings[pos]] = pos;
  siblings.pop_back();
}

void NetworkSimplex::attach_child(std::size_t parent, std::size_t node) {
  parent_[node] = parent;
  pos_in_parent_[node] = kids_[parent].size();
  kids_[parent].push_back(node);
}

void NetworkSimplex::init_tree() {
  double max_cost = 0.0, max_supply = 0.0, total = 0.0;
  for (double c : cost_) max_cost = std::max(max_cost, std::abs(c));
  for (double s : supply_) {
    max_supply = std::max(max_supply, std::abs(s));
    total += s;
  }
  if (std::abs(total) > 1e-9 * std::max(1.0, max_supply) * static_cast<double>(nodes_ + 1)) {
    throw Error(ErrorCode::kMassNotBalanced, "supplies do not sum to zero");
  }
  eps_ = 1e-12 * std::max(1.0, max_cost);
  flow_tol_ = 1e-14 * std::max(1.0, max_supply);
  const double art_cost = (max_cost + 1.0) * static_cast<double>(nodes_ + 1);

  src_.resize(real_arcs_);
  dst_.resize(real_arcs_);
  cost_.resize(real_arcs_);
  flow_.assign(real_arcs_ + nodes_, 0.0);
  in_tree_.assign(real_arcs_ + nodes_, 0);
  pi_.assign(nodes_ + 1, 0.0);
  parent_.assign(nodes_ + 1, root_);
  pred_.assign(nodes_ + 1, 0);
  depth_.assign(nodes_ + 1, 1);
  up_.assign(nodes_ + 1, 0);
  kids_.assign(nodes_ + 1, {});
  pos_in_parent_.assign(nodes_ + 1, 0);
  depth_[root_] = 0;

  for (std::size_t u = 0; u < nodes_; ++u) {
    const std::size_t e = real_arcs_ + u;
    in_tree_[e] = 1;
    pred_[u] = e;
    attach_child(root_, u);
    if (supply_[u] >= 0.0) {
      src_.push_back(u);
      dst_.push_back(root_);
      cost_.push_back(0.0);
      flow_[e] = supply_[u];
      up_[u] = 1;
      pi_[u] = 0.0;
    } else {
      src_.push_back(root_);
      dst_.push_back(u);
      cost_.push_back(art_cost);
      flow_[e] = -supply_[u];
      up_[u] = 0;
      pi_[u] = art_cost;
    }
  }
  const std::size_t arcs = real_arcs_ + nodes_;
  block_ = std::max<std::size_t>(10, static_cast<std::size_t>(std::sqrt(static_cast<double>(arcs))));
  next_arc_ = 0;
}

long NetworkSimplex::find_entering() {
  const std::size_t arcs = src_.size();
  double best = -eps_;
  long best_arc = -1;
  std::size_t scanned_in_block = 0;
  for (std::size_t count = 0; count < arcs; ++count) {
    const std::size_t a = next_arc_;
    next_arc_ = next_arc_ + 1 == arcs ? 0 : next_arc_ + 1;
    if (!in_tree_[a]) {
      const double rc = cost_[a] + pi_[src_[a]] - pi_[dst_[a]];
      if (rc < best) {
        best = rc;
        best_arc = static_cast<long>(a);
      }
    }
    if (++scanned_in_block == block_) {
      if (best_arc >= 0) return best_arc;
      scanned_in_block = 0;
    }
  }
  return best_arc;
}

void NetworkSimplex::pivot(std::size_t entering) {
  const std::size_t u = src_[entering];
  const std::size_t v = dst_[entering];

  // Tree paths from both endpoints up to their common ancestor.
  std::vector<std::size_t> u_path, v_path;
  std::size_t a = u, b = v;
  while (depth_[a] > depth_[b]) { u_path.push_back(a); a = parent_[a]; }
  while (depth_[b] > depth_[a]) { v_path.push_back(b); b = parent_[b]; }
  while (a != b) {
    u_path.push_back(a);
    v_path.push_back(b);
    a = parent_[a];
    b = parent_[b];
  }

  // Walk the cycle in the direction of the entering arc starting at the
  // apex; among blocking arcs the last one encountered leaves.
  double delta = INFINITY;
  std::size_t leave_node = 0;
  bool leave_on_u_side = false;
  bool found = false;
  for (auto it = u_path.rbegin(); it != u_path.rend(); ++it) {
    const std::size_t w = *it;
    if (up_[w] && flow_[pred_[w]] <= delta) {
      delta = flow_[pred_[w]];
      leave_node = w;
      leave_on_u_side = true;
      found = true;
    }
  }
  for (std::size_t w : v_path) {
    if (!up_[w] && flow_[pred_[w]] <= delta) {
      delta = flow_[pred_[w]];
      leave_node = w;
      leave_on_u_side = false;
      found = true;
    }
  }
  if (!found) throw Error(ErrorCode::kLpInfeasible, "unbounded pivot in min-cost flow");

  auto bump = [&](std::size_t arc, double amount) {
    double f = flow_[arc] + amount;
    if (std::abs(f) < flow_tol_) f = 0.0;
    flow_[arc] = f;
  };
  if (delta > 0.0) {
    bump(entering, delta);
    for (std::size_t w : u_path) bump(pred_[w], up_[w] ? -delta : delta);
    for (std::size_t w : v_path) bump(pred_[w], up_[w] ? delta : -delta);
  }
  const std::size_t leaving = pred_[leave_node];
  flow_[leaving] = 0.0;
  in_tree_[leaving] = 0;
  in_tree_[entering] = 1;

  // Re-hang the detached subtree from the endpoint it contains.
  const std::size_t inner = leave_on_u_side ? u : v;
  const std::size_t outer = leave_on_u_side ? v : u;
  std::vector<std::size_t> chain;  // inner .. leave_node
  for (std::size_t w = inner;; w = parent_[w]) {
    chain.push_back(w);
    if (w == leave_node) break;
  }
  std::vector<std::size_t> old_pred(chain.size());
  std::vector<char> old_up(chain.size());
  for (std::size_t i = 0; i < chain.size(); ++i) {
    old_pred[i] = pred_[chain[i]];
    old_up[i] = up_[chain[i]];
    detach_child(chain[i]);
  }
  for (std::size_t i = chain.size(); i-- > 1;) {
    attach_child(chain[i - 1], chain[i]);
    pred_[chain[i]] = old_pred[i - 1];
    up_[chain[i]] = !old_up[i - 1];
  }
  attach_child(outer, inner);
  pred_[inner] = entering;
  up_[inner] = src_[entering] == inner;

  const double rc = cost_[entering] + pi_[u] - pi_[v];
  const double shift = leave_on_u_side ? -rc : rc;
  std::vector<std::size_t> stack{inner};
  depth_[inner] = depth_[outer] + 1;
  while (!stack.empty()) {
    const std::size_t w = stack.back();
    stack.pop_back();
    pi_[w] += shift;
    for (std::size_t c : kids_[w]) {
      depth_[c] = depth_[w] + 1;
      stack.push_back(c);
    }
  }
  ++pivots_;
}

NetworkSimplex::Status NetworkSimplex::solve() {
  init_tree();
  pivots_ = 0;
  const std::size_t max_pivots = 1000 * (src_.size() + 10);
  for (;;) {
    const long e = find_entering();
    if (e < 0) break;
    pivot(static_cast<std::size_t>(e));
    if (pivots_ > max_pivots) {
      throw Error(ErrorCode::kLpInfeasible, "min-cost flow exceeded the pivot limit");
    }
  }
  double max_supply = 0.0;
  for (double s : supply_) max_supply = std::max(max_supply, std::abs(s));
  for (std::size_t u = 0; u < nodes_; ++u) {
    if (flow_[real_arcs_ + u] > 1e-9 * std::max(1.0, max_supply)) return Status::kInfeasible;
  }
  return Status::kOptimal;
}

}  // namespace gaussreg
