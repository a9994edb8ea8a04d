#ifndef BUDGET_FAIR_SOLVER_HPP
#define BUDGET_FAIR_SOLVER_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "budget_fair/audit.hpp"
#include "budget_fair/errors.hpp"
#include "budget_fair/families.hpp"
#include "budget_fair/model.hpp"
#include "budget_fair/num.hpp"

namespace budget_fair {

inline constexpr std::uint64_t kDefaultNodeLimit = 10'000'000;

struct SolveResult {
  Allocation allocation;
  NswValue nsw;
  bool exact = false;
  std::uint64_t nodes_explored = 0;
};

namespace detail {

// Mutable bundle bookkeeping shared by the local search moves.
class Bundles {
 public:
  explicit Bundles(const Instance& inst)
      : inst_(inst), owner_(inst.num_items(), 0), value_(inst.num_agents(), Num(0)), spent_(inst.num_agents(), Num(0)) {}

  int owner(std::size_t item) const { return owner_[item]; }
  const std::vector<Num>& values() const { return value_; }
  const Num& value(std::size_t agent) const { return value_[agent]; }

  bool fits(int who, const Num& extra_cost) const {
    return who == 0 || spent_[who - 1] + extra_cost <= inst_.budget(static_cast<std::size_t>(who - 1));
  }

  void move(std::size_t item, int to) {
    int from = owner_[item];
    if (from > 0) {
      value_[from - 1] -= inst_.value(static_cast<std::size_t>(from - 1), item);
      spent_[from - 1] -= inst_.cost(item);
    }
    if (to > 0) {
      value_[to - 1] += inst_.value(static_cast<std::size_t>(to - 1), item);
      spent_[to - 1] += inst_.cost(item);
    }
    owner_[item] = to;
  }

  NswValue nsw() const { return nsw_of_values(value_); }
  Allocation allocation() const { return from_assignment(owner_, inst_.num_agents()); }

 private:
  const Instance& inst_;
  std::vector<int> owner_;  // 0 charity, 1 + agent
  std::vector<Num> value_;
  std::vector<Num> spent_;
};

// Tries one improving move; first improvement in seed-shuffled item order.
inline bool improve_once(const Instance& inst, Bundles& b, const std::vector<std::size_t>& order) {
  const int n = static_cast<int>(inst.num_agents());
  const NswValue current = b.nsw();
  for (auto g : order) {
    const int from = b.owner(g);
    for (int to = 0; to <= n; ++to) {
      if (to == from || !b.fits(to, inst.cost(g))) continue;
      b.move(g, to);
      if (b.nsw() > current) return true;
      b.move(g, from);
    }
  }
  for (std::size_t x = 0; x < order.size(); ++x) {
    for (std::size_t y = x + 1; y < order.size(); ++y) {
      const auto g = order[x], h = order[y];
      const int og = b.owner(g), oh = b.owner(h);
      if (og == oh) continue;
      // swap: g -> oh, h -> og
      b.move(g, 0);
      b.move(h, 0);
      bool ok = b.fits(oh, inst.cost(g));
      if (ok) b.move(g, oh);
      ok = ok && b.fits(og, inst.cost(h));
      if (ok) {
        b.move(h, og);
        if (b.nsw() > current) return true;
      }
      b.move(g, 0);
      b.move(h, 0);
      b.move(g, og);
      b.move(h, oh);
    }
  }
  return false;
}

}  // namespace detail

/// Heuristic: greedy seeding by descending best density to the affordable agent
/// with the lowest current value, then first-improvement hill climbing over
/// single-item shifts and two-item swaps. Never reports exact.
inline SolveResult solve_local_search(const Instance& inst, std::uint64_t seed = 0, std::uint64_t max_iters = 10'000) {
  const std::size_t n = inst.num_agents();
  const std::size_t m = inst.num_items();
  detail::Bundles b(inst);

  // best density as (value, cost) with the larger ratio; zero-cost positive is densest
  std::vector<std::pair<Num, Num>> best(m, {Num(0), Num(1)});
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      std::pair<Num, Num> cand{inst.value(i, j), inst.cost(j)};
      if (cand.first * best[j].second > best[j].first * cand.second ||
          (cand.second == 0 && cand.first > 0 && best[j].second != 0))
        best[j] = cand;
    }
  }
  std::vector<std::size_t> items(m);
  std::iota(items.begin(), items.end(), 0);
  std::stable_sort(items.begin(), items.end(), [&](std::size_t a, std::size_t c) {
    return best[a].first * best[c].second > best[c].first * best[a].second;
  });
  for (auto j : items) {
    if (best[j].first <= 0) continue;  // nobody values it
    int target = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const int who = static_cast<int>(i) + 1;
      if (!b.fits(who, inst.cost(j))) continue;
      if (target == 0 || b.value(i) < b.value(static_cast<std::size_t>(target - 1))) target = who;
    }
    if (target != 0) b.move(j, target);
  }

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  SplitMix64 rng(seed);
  for (std::size_t k = m; k > 1; --k) std::swap(order[k - 1], order[static_cast<std::size_t>(rng.next() % k)]);

  std::uint64_t iters = 0;
  while (iters < max_iters && detail::improve_once(inst, b, order)) ++iters;

  SolveResult out;
  out.allocation = b.allocation();
  out.nsw = b.nsw();
  out.exact = false;
  out.nodes_explored = iters;
  return out;
}

namespace detail {

class ExactSearch {
 public:
  ExactSearch(const Instance& inst, std::uint64_t node_limit) : inst_(inst), node_limit_(node_limit) {
    const std::size_t n = inst.num_agents();
    const std::size_t m = inst.num_items();
    suffix_.assign(m + 1, std::vector<Num>(n, Num(0)));
    for (std::size_t k = m; k-- > 0;)
      for (std::size_t i = 0; i < n; ++i) suffix_[k][i] = suffix_[k + 1][i] + inst.value(i, k);
    density_order_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto& ord = density_order_[i];
      for (std::size_t j = 0; j < m; ++j)
        if (inst.value(i, j) > 0) ord.push_back(j);
      std::stable_sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t c) {
        return inst.value(i, a) * inst.cost(c) > inst.value(i, c) * inst.cost(a);
      });
    }
    value_.assign(n, Num(0));
    spent_.assign(n, Num(0));
    assignment_.assign(m, 0);
  }

  SolveResult run(const SolveResult& seed) {
    incumbent_ = seed.nsw;
    best_assignment_ = to_assignment(seed.allocation, inst_.num_items());
    incumbent_from_search_ = false;
    aborted_ = false;
    nodes_ = 0;
    dfs(0);
    SolveResult out;
    out.allocation = from_assignment(best_assignment_, inst_.num_agents());
    out.nsw = incumbent_;
    out.exact = !aborted_;
    out.nodes_explored = nodes_;
    return out;
  }

 private:
  // Pruned iff the optimistic value cannot beat the incumbent. A tie with an
  // incumbent found by this search is pruned too: the search runs in
  // lexicographic assignment order, so the incumbent is the smaller vector.
  bool prune(const NswValue& bound) const {
    return incumbent_from_search_ ? bound <= incumbent_ : bound < incumbent_;
  }

  NswValue cheap_bound(std::size_t k) const {
    NswValue b;
    for (std::size_t i = 0; i < value_.size(); ++i) {
      Num v = value_[i] + suffix_[k][i];
      if (v > 0) {
        ++b.positive_count;
        b.product *= v;
      }
    }
    return b;
  }

  // Per agent: current value plus the fractional knapsack over unassigned items.
  NswValue tight_bound(std::size_t k) const {
    NswValue b;
    for (std::size_t i = 0; i < value_.size(); ++i) {
      Num v = value_[i];
      Num left = inst_.budget(i) - spent_[i];
      for (auto j : density_order_[i]) {
        if (j < k) continue;
        const Num& c = inst_.cost(j);
        if (c <= left) {
          v += inst_.value(i, j);
          left -= c;
        } else {
          v += inst_.value(i, j) * left / c;
          break;
        }
      }
      if (v > 0) {
        ++b.positive_count;
        b.product *= v;
      }
    }
    return b;
  }

  void dfs(std::size_t k) {
    if (aborted_) return;
    if (++nodes_ > node_limit_) {
      aborted_ = true;
      return;
    }
    const std::size_t m = inst_.num_items();
    if (k == m) {
      NswValue leaf = nsw_of_values(value_);
      if (leaf > incumbent_ || (leaf == incumbent_ && !incumbent_from_search_)) {
        incumbent_ = std::move(leaf);
        incumbent_from_search_ = true;
        best_assignment_ = assignment_;
      }
      return;
    }
    if (prune(cheap_bound(k)) || prune(tight_bound(k))) return;
    const auto n = static_cast<int>(inst_.num_agents());
    assignment_[k] = 0;
    dfs(k + 1);
    for (int who = 1; who <= n && !aborted_; ++who) {
      const auto i = static_cast<std::size_t>(who - 1);
      if (spent_[i] + inst_.cost(k) > inst_.budget(i)) continue;
      spent_[i] += inst_.cost(k);
      value_[i] += inst_.value(i, k);
      assignment_[k] = who;
      dfs(k + 1);
      value_[i] -= inst_.value(i, k);
      spent_[i] -= inst_.cost(k);
    }
    assignment_[k] = 0;
  }

  const Instance& inst_;
  std::uint64_t node_limit_;
  std::vector<std::vector<Num>> suffix_;
  std::vector<std::vector<std::size_t>> density_order_;
  std::vector<Num> value_;
  std::vector<Num> spent_;
  std::vector<int> assignment_;
  std::vector<int> best_assignment_;
  NswValue incumbent_;
  bool incumbent_from_search_ = false;
  bool aborted_ = false;
  std::uint64_t nodes_ = 0;
};

}  // namespace detail

/// Lexicographic Max-NSW by depth-first branch and bound over item
/// assignments (charity first, then agents in order), seeded with the local
/// search incumbent. Among optima the lexicographically smallest assignment
/// vector wins. When the node limit is hit the best incumbent is returned
/// with exact = false.
inline SolveResult solve_exact(const Instance& inst, std::uint64_t node_limit = kDefaultNodeLimit) {
  SolveResult seed = solve_local_search(inst, 0, 1000);
  detail::ExactSearch search(inst, node_limit);
  return search.run(seed);
}

struct Theorem1Report {
  SolveResult solution;
  AuditReport audit;
  std::string po_method;  // "exhaustive" or "charity_swap"
  bool ef1_ok = false;
  bool po_ok = false;

  bool passed() const { return ef1_ok && po_ok; }
};

/// Solves exactly, audits, and checks the Max-NSW allocation is 1/4-EF1 and
/// Pareto optimal. PO is exhaustive within `po_limit`; past it only the
/// charity-swap condition is checked.
inline Theorem1Report verify_theorem1(const Instance& inst, std::uint64_t po_limit = kDefaultPoLimit,
                                      std::uint64_t node_limit = kDefaultNodeLimit) {
  Theorem1Report r;
  r.solution = solve_exact(inst, node_limit);
  if (!r.solution.exact) throw LimitError("exact solve exceeded the node limit");
  r.audit = audit_allocation(inst, r.solution.allocation);
  r.ef1_ok = r.audit.ef1_alpha.at_least(make_num(1, 4));
  try {
    r.po_ok = is_pareto_optimal(inst, r.solution.allocation, po_limit);
    r.po_method = "exhaustive";
  } catch (const LimitError&) {
    r.po_ok = true;
    for (std::size_t i = 0; i < inst.num_agents(); ++i)
      r.po_ok = r.po_ok && charity_swap_optimal(inst, r.solution.allocation, i);
    r.po_method = "charity_swap";
  }
  r.audit.po = r.po_ok;
  return r;
}

struct CorollaryReport {
  NswValue optimum;
  NswValue candidate;
  Num alpha;     // candidate product / optimum product
  Alpha ef1_alpha;
  Num required;  // alpha / 4

  bool passed() const { return ef1_alpha.at_least(required); }
};

/// An alpha-approximate Max-NSW allocation is alpha/4-EF1. Needs the
/// candidate to have as many positive agents as the optimum.
inline CorollaryReport verify_approx_corollary(const Instance& inst, const Allocation& alloc,
                                               std::uint64_t node_limit = kDefaultNodeLimit) {
  CorollaryReport r;
  auto opt = solve_exact(inst, node_limit);
  if (!opt.exact) throw LimitError("exact solve exceeded the node limit");
  r.optimum = opt.nsw;
  r.candidate = nsw(inst, alloc);
  if (r.candidate.positive_count != r.optimum.positive_count)
    throw PreconditionError("allocation has " + std::to_string(r.candidate.positive_count) +
                            " positive agents, the optimum has " + std::to_string(r.optimum.positive_count));
  r.alpha = r.candidate.product / r.optimum.product;
  r.ef1_alpha = audit_allocation(inst, alloc).ef1_alpha;
  r.required = r.alpha / 4;
  return r;
}

}  // namespace budget_fair

#endif  // BUDGET_FAIR_SOLVER_HPP
