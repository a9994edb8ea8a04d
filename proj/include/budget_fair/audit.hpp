#ifndef BUDGET_FAIR_AUDIT_HPP
#define BUDGET_FAIR_AUDIT_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "budget_fair/errors.hpp"
#include "budget_fair/knapsack.hpp"
#include "budget_fair/model.hpp"
#include "budget_fair/num.hpp"

namespace budget_fair {

inline constexpr std::uint64_t kDefaultPoLimit = 2'000'000;

// Agent `envier` values the affordable subset `set` of agent `envied`'s
// bundle at `envy_value` (after dropping `removed_item` for EF1).
struct EnvyWitness {
  std::size_t envier = 0;
  std::size_t envied = 0;
  ItemSet set;
  std::optional<std::size_t> removed_item;
  Num envy_value;
};

struct AuditReport {
  Alpha ef_alpha;
  Alpha ef1_alpha;
  std::optional<EnvyWitness> ef_witness;
  std::optional<EnvyWitness> ef1_witness;
  std::optional<bool> po;

  bool is_ef1() const { return ef1_alpha.at_least(1); }
};

struct EnvyValue {
  Num value;
  ItemSet set;
};

namespace detail {

inline void check_pair(const Instance& inst, const Allocation& x, std::size_t i, std::size_t j) {
  const auto n = inst.num_agents();
  if (i >= n || j >= n) throw IndexError("agent index out of range");
  if (i == j) throw IndexError("envier and envied must differ");
  if (x.bundles.size() != n) throw PartitionError("allocation bundle count differs from agent count");
}

// Anchors of the EF1 decomposition: items of X_j agent i can afford alone and
// values positively. Anchors with equal (value, cost) give equal knapsack
// values, so only the first of each class is solved.
struct AnchorClass {
  std::vector<std::size_t> members;  // ascending
};

inline std::vector<AnchorClass> anchor_classes(const Instance& inst, const ItemSet& bundle, std::size_t i) {
  std::vector<AnchorClass> classes;
  std::map<std::pair<Num, Num>, std::size_t> index;
  for (auto a : bundle) {
    if (inst.value(i, a) <= 0 || inst.cost(a) > inst.budget(i)) continue;
    auto key = std::make_pair(inst.value(i, a), inst.cost(a));
    auto [it, inserted] = index.try_emplace(key, classes.size());
    if (inserted) classes.emplace_back();
    classes[it->second].members.push_back(a);
  }
  return classes;
}

inline KnapsackResult anchored_knapsack(const Instance& inst, const ItemSet& bundle, std::size_t i, std::size_t a) {
  std::vector<KnapsackItem> pool;
  for (auto g : bundle)
    if (g != a && inst.value(i, g) <= inst.value(i, a)) pool.push_back({g, inst.value(i, g), inst.cost(g)});
  return solve_knapsack(pool, Num(inst.budget(i) - inst.cost(a)));
}

}  // namespace detail

/// Largest value agent i gets from an affordable subset of X_j, with the
/// lexicographically smallest maximizing set of positively valued items.
inline EnvyValue max_envy_ef(const Instance& inst, const Allocation& x, std::size_t i, std::size_t j) {
  detail::check_pair(inst, x, i, j);
  auto r = solve_knapsack(inst, i, x.bundles[j], inst.budget(i));
  return {std::move(r.value), std::move(r.items)};
}

/// D = max over affordable nonempty S of X_j of v_i(S) - max_{g in S} v_ig.
/// Value only; skips witness reconstruction.
inline Num ef1_envy(const Instance& inst, const Allocation& x, std::size_t i, std::size_t j) {
  detail::check_pair(inst, x, i, j);
  const ItemSet& bundle = x.bundles[j];
  Num best = 0;
  for (const auto& cls : detail::anchor_classes(inst, bundle, i)) {
    auto r = detail::anchored_knapsack(inst, bundle, i, cls.members.front());
    if (r.value > best) best = r.value;
  }
  return best;
}

/// EF1 envy of i towards j with a witness; the witness is absent when D <= 0.
inline std::pair<Num, std::optional<EnvyWitness>> max_envy_ef1(const Instance& inst, const Allocation& x,
                                                               std::size_t i, std::size_t j) {
  detail::check_pair(inst, x, i, j);
  const ItemSet& bundle = x.bundles[j];
  auto classes = detail::anchor_classes(inst, bundle, i);
  Num best = 0;
  std::vector<std::size_t> best_classes;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    auto r = detail::anchored_knapsack(inst, bundle, i, classes[c].members.front());
    if (r.value > best) {
      best = r.value;
      best_classes.assign(1, c);
    } else if (r.value == best && best > 0) {
      best_classes.push_back(c);
    }
  }
  if (best <= 0) return {Num(0), std::nullopt};

  std::optional<ItemSet> best_set;
  for (auto c : best_classes) {
    for (auto a : classes[c].members) {
      auto r = detail::anchored_knapsack(inst, bundle, i, a);
      ItemSet s = set_union(r.items, ItemSet{a});
      if (!best_set || s < *best_set) best_set = std::move(s);
    }
  }
  EnvyWitness w;
  w.envier = i;
  w.envied = j;
  w.set = std::move(*best_set);
  std::size_t removed = w.set.front();
  for (auto g : w.set)
    if (inst.value(i, g) > inst.value(i, removed)) removed = g;
  w.removed_item = removed;
  w.envy_value = best;
  return {best, std::move(w)};
}

/// Exhaustive Pareto check over all (n+1)^m assignments.
inline bool is_pareto_optimal(const Instance& inst, const Allocation& x, std::uint64_t limit = kDefaultPoLimit) {
  require_feasible(inst, x);
  const std::size_t n = inst.num_agents();
  const std::size_t m = inst.num_items();
  std::uint64_t count = 1;
  for (std::size_t k = 0; k < m; ++k) {
    if (count > limit / (n + 1)) {
      count = limit + 1;
      break;
    }
    count *= n + 1;
  }
  if (count > limit)
    throw LimitError("Pareto enumeration exceeds the limit of " + std::to_string(limit) +
                     " assignments; use charity_swap_optimal for a necessary condition");

  const auto target = agent_values(inst, x);
  // suffix[k][i]: agent i's value for items k..m-1
  std::vector<std::vector<Num>> suffix(m + 1, std::vector<Num>(n, Num(0)));
  for (std::size_t k = m; k-- > 0;)
    for (std::size_t i = 0; i < n; ++i) suffix[k][i] = suffix[k + 1][i] + inst.value(i, k);

  std::vector<Num> value(n, Num(0));
  std::vector<Num> spent(n, Num(0));
  bool dominated = false;
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (dominated) return;
    for (std::size_t i = 0; i < n; ++i)
      if (value[i] + suffix[k][i] < target[i]) return;
    if (k == m) {
      bool strict = false;
      for (std::size_t i = 0; i < n; ++i)
        if (value[i] > target[i]) strict = true;
      if (strict) dominated = true;
      return;
    }
    self(self, k + 1);  // charity
    for (std::size_t i = 0; i < n && !dominated; ++i) {
      if (spent[i] + inst.cost(k) > inst.budget(i)) continue;
      spent[i] += inst.cost(k);
      value[i] += inst.value(i, k);
      self(self, k + 1);
      value[i] -= inst.value(i, k);
      spent[i] -= inst.cost(k);
    }
  };
  rec(rec, 0);
  return !dominated;
}

/// Necessary condition for Pareto optimality: agent i cannot do better by
/// trading with the charity within its budget.
inline bool charity_swap_optimal(const Instance& inst, const Allocation& x, std::size_t i) {
  if (i >= inst.num_agents()) throw IndexError("agent index out of range");
  check_partition(inst, x);
  ItemSet pool = set_union(x.bundles[i], x.charity);
  auto r = solve_knapsack(inst, i, pool, inst.budget(i));
  return !(r.value > bundle_value(inst, i, x.bundles[i]));
}

/// Exact EF and EF1 factors over all ordered pairs. Ties between pairs go to
/// the smallest (envier, envied).
inline AuditReport audit_allocation(const Instance& inst, const Allocation& x, bool check_po = false,
                                    std::uint64_t po_limit = kDefaultPoLimit) {
  require_feasible(inst, x);
  const std::size_t n = inst.num_agents();
  AuditReport report;
  auto own = agent_values(inst, x);
  std::optional<std::pair<std::size_t, std::size_t>> ef1_pair;

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      auto ef = max_envy_ef(inst, x, i, j);
      if (ef.value > 0) {
        Alpha a(own[i] / ef.value);
        if (a < report.ef_alpha) {
          report.ef_alpha = a;
          report.ef_witness = EnvyWitness{i, j, ef.set, std::nullopt, ef.value};
        }
      }
      Num d = ef1_envy(inst, x, i, j);
      if (d > 0) {
        Alpha a(own[i] / d);
        if (a < report.ef1_alpha) {
          report.ef1_alpha = a;
          ef1_pair = {i, j};
        }
      }
    }
  }
  if (ef1_pair) report.ef1_witness = max_envy_ef1(inst, x, ef1_pair->first, ef1_pair->second).second;
  if (check_po) report.po = is_pareto_optimal(inst, x, po_limit);
  return report;
}

}  // namespace budget_fair

#endif  // BUDGET_FAIR_AUDIT_HPP
