#ifndef BUDGET_FAIR_MODEL_HPP
#define BUDGET_FAIR_MODEL_HPP

#include <algorithm>
#include <compare>
#include <cstddef>
#include <iterator>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "budget_fair/errors.hpp"
#include "budget_fair/num.hpp"

namespace budget_fair {

// Item indices in ascending order, no duplicates.
using ItemSet = std::vector<std::size_t>;

struct Agent {
  std::string id;
  Num budget;
  std::vector<Num> values;  // one per item, instance order

  friend bool operator==(const Agent&, const Agent&) = default;
};

struct Item {
  std::string id;
  Num cost;

  friend bool operator==(const Item&, const Item&) = default;
};

struct Instance {
  std::vector<Agent> agents;
  std::vector<Item> items;

  std::size_t num_agents() const { return agents.size(); }
  std::size_t num_items() const { return items.size(); }
  const Num& value(std::size_t agent, std::size_t item) const { return agents[agent].values[item]; }
  const Num& cost(std::size_t item) const { return items[item].cost; }
  const Num& budget(std::size_t agent) const { return agents[agent].budget; }

  friend bool operator==(const Instance&, const Instance&) = default;
};

/// Throws ValidationError on negative numbers, ragged value vectors or
/// duplicate ids.
inline void validate(const Instance& inst) {
  std::set<std::string> ids;
  for (const auto& a : inst.agents) {
    if (!ids.insert(a.id).second) throw ValidationError("duplicate agent id '" + a.id + "'");
    if (a.budget < 0) throw ValidationError("agent '" + a.id + "' has a negative budget");
    if (a.values.size() != inst.items.size())
      throw ValidationError("agent '" + a.id + "' has " + std::to_string(a.values.size()) +
                            " values for " + std::to_string(inst.items.size()) + " items");
    for (const auto& v : a.values)
      if (v < 0) throw ValidationError("agent '" + a.id + "' has a negative value");
  }
  ids.clear();
  for (const auto& it : inst.items) {
    if (!ids.insert(it.id).second) throw ValidationError("duplicate item id '" + it.id + "'");
    if (it.cost < 0) throw ValidationError("item '" + it.id + "' has a negative cost");
  }
}

struct Allocation {
  std::vector<ItemSet> bundles;  // one per agent
  ItemSet charity;

  friend bool operator==(const Allocation&, const Allocation&) = default;
};

inline ItemSet make_item_set(std::vector<std::size_t> items) {
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  return items;
}

inline ItemSet set_union(const ItemSet& a, const ItemSet& b) {
  ItemSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline ItemSet set_difference(const ItemSet& a, const ItemSet& b) {
  ItemSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool is_subset(const ItemSet& sub, const ItemSet& super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

/// Builds an allocation from an assignment vector: entry j is 0 for charity or
/// 1 + agent index.
inline Allocation from_assignment(std::span<const int> assignment, std::size_t num_agents) {
  Allocation x;
  x.bundles.resize(num_agents);
  for (std::size_t j = 0; j < assignment.size(); ++j) {
    if (assignment[j] == 0)
      x.charity.push_back(j);
    else
      x.bundles[static_cast<std::size_t>(assignment[j] - 1)].push_back(j);
  }
  return x;
}

inline std::vector<int> to_assignment(const Allocation& x, std::size_t num_items) {
  std::vector<int> a(num_items, 0);
  for (std::size_t i = 0; i < x.bundles.size(); ++i)
    for (auto j : x.bundles[i]) a[j] = static_cast<int>(i) + 1;
  return a;
}

/// Throws PartitionError unless bundles and charity partition the items and
/// there is one bundle per agent.
inline void check_partition(const Instance& inst, const Allocation& x) {
  const std::size_t m = inst.num_items();
  if (x.bundles.size() != inst.num_agents())
    throw PartitionError("allocation has " + std::to_string(x.bundles.size()) + " bundles for " +
                         std::to_string(inst.num_agents()) + " agents");
  std::vector<char> seen(m, 0);
  auto mark = [&](const ItemSet& s) {
    for (auto j : s) {
      if (j >= m) throw PartitionError("item index " + std::to_string(j) + " out of range");
      if (seen[j]) throw PartitionError("item " + std::to_string(j) + " assigned twice");
      seen[j] = 1;
    }
  };
  for (const auto& b : x.bundles) mark(b);
  mark(x.charity);
  for (std::size_t j = 0; j < m; ++j)
    if (!seen[j]) throw PartitionError("item " + std::to_string(j) + " is not assigned");
}

/// Sorts every bundle; leaves the partition check to check_partition.
inline Allocation normalized(Allocation x) {
  for (auto& b : x.bundles) std::sort(b.begin(), b.end());
  std::sort(x.charity.begin(), x.charity.end());
  return x;
}

inline Num bundle_value(const Instance& inst, std::size_t agent, const ItemSet& s) {
  if (agent >= inst.num_agents()) throw IndexError("agent index " + std::to_string(agent) + " out of range");
  Num total = 0;
  for (auto j : s) {
    if (j >= inst.num_items()) throw IndexError("item index " + std::to_string(j) + " out of range");
    total += inst.value(agent, j);
  }
  return total;
}

inline Num bundle_cost(const Instance& inst, const ItemSet& s) {
  Num total = 0;
  for (auto j : s) {
    if (j >= inst.num_items()) throw IndexError("item index " + std::to_string(j) + " out of range");
    total += inst.cost(j);
  }
  return total;
}

/// Budget feasibility. A partition violation is an error, not `false`.
inline bool is_feasible(const Instance& inst, const Allocation& x) {
  check_partition(inst, x);
  for (std::size_t i = 0; i < inst.num_agents(); ++i)
    if (bundle_cost(inst, x.bundles[i]) > inst.budget(i)) return false;
  return true;
}

inline void require_feasible(const Instance& inst, const Allocation& x) {
  if (!is_feasible(inst, x)) throw InfeasibleError("allocation exceeds an agent's budget");
}

// Lexicographic Nash social welfare: more agents with positive value wins,
// then the larger product over those agents.
struct NswValue {
  std::size_t positive_count = 0;
  Num product = 1;

  friend bool operator==(const NswValue& a, const NswValue& b) {
    return a.positive_count == b.positive_count && a.product == b.product;
  }
  friend std::strong_ordering operator<=>(const NswValue& a, const NswValue& b) {
    if (auto c = a.positive_count <=> b.positive_count; c != 0) return c;
    int s = cmp(a.product, b.product);
    return s < 0 ? std::strong_ordering::less
                 : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
};

inline NswValue nsw_of_values(std::span<const Num> values) {
  NswValue out;
  for (const auto& v : values) {
    if (v > 0) {
      ++out.positive_count;
      out.product *= v;
    }
  }
  return out;
}

inline std::vector<Num> agent_values(const Instance& inst, const Allocation& x) {
  std::vector<Num> vals;
  vals.reserve(inst.num_agents());
  for (std::size_t i = 0; i < inst.num_agents(); ++i) vals.push_back(bundle_value(inst, i, x.bundles[i]));
  return vals;
}

inline NswValue nsw(const Instance& inst, const Allocation& x) {
  require_feasible(inst, x);
  auto vals = agent_values(inst, x);
  return nsw_of_values(vals);
}

/// floor(min_i B_i / max_j c_j). Undefined with zero-cost items, no agents or
/// no items.
inline long kappa(const Instance& inst) {
  if (inst.num_agents() == 0 || inst.num_items() == 0)
    throw PreconditionError("kappa needs at least one agent and one item");
  Num max_cost = 0;
  for (const auto& it : inst.items) {
    if (it.cost <= 0) throw PreconditionError("kappa is undefined with zero-cost item '" + it.id + "'");
    if (it.cost > max_cost) max_cost = it.cost;
  }
  Num min_budget = inst.agents.front().budget;
  for (const auto& a : inst.agents)
    if (a.budget < min_budget) min_budget = a.budget;
  mpz_class k = floor_of(Num(min_budget / max_cost));
  if (!k.fits_slong_p()) throw PreconditionError("kappa does not fit a long");
  return k.get_si();
}

}  // namespace budget_fair

#endif  // BUDGET_FAIR_MODEL_HPP
