#ifndef BUDGET_FAIR_KNAPSACK_HPP
#define BUDGET_FAIR_KNAPSACK_HPP

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "budget_fair/model.hpp"
#include "budget_fair/num.hpp"

namespace budget_fair {

struct KnapsackItem {
  std::size_t id;  // item index in the instance
  Num value;
  Num cost;
};

struct KnapsackResult {
  Num value = 0;
  ItemSet items;  // ascending ids
};

namespace detail {

// a before b when a is strictly denser; zero-cost items are densest. Ties keep
// the caller's order (stable sort).
inline bool denser(const KnapsackItem& a, const KnapsackItem& b) {
  return a.value * b.cost > b.value * a.cost;
}

class KnapsackSearch {
 public:
  KnapsackSearch(std::vector<KnapsackItem> items, Num capacity)
      : by_density_(std::move(items)), capacity_(std::move(capacity)) {
    std::stable_sort(by_density_.begin(), by_density_.end(), denser);
  }

  // Optimal value via depth-first branch and bound in density order, with the
  // fractional relaxation as the bound.
  Num optimum() {
    best_ = 0;
    Num value = 0;
    dive(0, value, capacity_);
    return best_;
  }

  // Lexicographically smallest id set reaching `target`. Every item has
  // positive value, so no optimal set contains another.
  ItemSet lex_smallest(const Num& target) {
    by_id_ = by_density_;
    std::sort(by_id_.begin(), by_id_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    id_pos_.resize(by_density_.size());
    for (std::size_t r = 0; r < by_density_.size(); ++r) {
      auto pos = std::lower_bound(by_id_.begin(), by_id_.end(), by_density_[r].id,
                                  [](const KnapsackItem& it, std::size_t id) { return it.id < id; });
      id_pos_[r] = static_cast<std::size_t>(pos - by_id_.begin());
    }
    chosen_.clear();
    found_.clear();
    Num value = 0;
    Num cap = capacity_;
    find(0, value, cap, target);
    return found_;
  }

 private:
  Num fractional_bound(std::size_t from, const Num& value, const Num& cap) const {
    Num bound = value;
    Num left = cap;
    for (std::size_t k = from; k < by_density_.size(); ++k) {
      const auto& it = by_density_[k];
      if (it.cost <= left) {
        bound += it.value;
        left -= it.cost;
      } else {
        bound += it.value * left / it.cost;
        break;
      }
    }
    return bound;
  }

  void dive(std::size_t k, Num& value, const Num& cap) {
    if (value > best_) best_ = value;
    if (k == by_density_.size()) return;
    if (fractional_bound(k, value, cap) <= best_) return;
    const auto& it = by_density_[k];
    if (it.cost <= cap) {
      value += it.value;
      dive(k + 1, value, Num(cap - it.cost));
      value -= it.value;
    }
    dive(k + 1, value, cap);
  }

  // Bound over the id-ordered suffix from position k, walked in density order.
  Num suffix_bound(std::size_t k, const Num& value, const Num& cap) const {
    Num bound = value;
    Num left = cap;
    for (std::size_t r = 0; r < by_density_.size(); ++r) {
      const auto& it = by_density_[r];
      if (id_pos_[r] < k) continue;
      if (it.cost <= left) {
        bound += it.value;
        left -= it.cost;
      } else {
        bound += it.value * left / it.cost;
        break;
      }
    }
    return bound;
  }

  bool find(std::size_t k, Num& value, Num& cap, const Num& target) {
    if (value == target) {
      found_ = chosen_;
      return true;
    }
    if (k == by_id_.size()) return false;
    if (suffix_bound(k, value, cap) < target) return false;
    const auto& it = by_id_[k];
    if (it.cost <= cap) {
      value += it.value;
      cap -= it.cost;
      chosen_.push_back(it.id);
      bool ok = find(k + 1, value, cap, target);
      chosen_.pop_back();
      cap += it.cost;
      value -= it.value;
      if (ok) return true;
    }
    return find(k + 1, value, cap, target);
  }

  std::vector<KnapsackItem> by_density_;
  std::vector<KnapsackItem> by_id_;
  std::vector<std::size_t> id_pos_;  // by density rank
  Num capacity_;
  Num best_ = 0;
  ItemSet chosen_;
  ItemSet found_;
};

}  // namespace detail

/// Maximum total value of a subset with cost at most `capacity`, together with
/// the lexicographically smallest optimal subset. Items of zero value are never
/// chosen; positively valued zero-cost items always are.
inline KnapsackResult solve_knapsack(std::span<const KnapsackItem> items, const Num& capacity) {
  KnapsackResult out;
  if (capacity < 0) return out;
  std::vector<KnapsackItem> open;
  Num cap = capacity;
  for (const auto& it : items) {
    if (it.value <= 0 || it.cost > capacity) continue;
    if (it.cost == 0) {
      out.value += it.value;
      out.items.push_back(it.id);
    } else {
      open.push_back(it);
    }
  }
  Num open_cost = 0;
  for (const auto& it : open) open_cost += it.cost;
  if (open_cost <= cap) {
    for (const auto& it : open) {
      out.value += it.value;
      out.items.push_back(it.id);
    }
    std::sort(out.items.begin(), out.items.end());
    return out;
  }
  detail::KnapsackSearch search(std::move(open), cap);
  Num best = search.optimum();
  ItemSet chosen = search.lex_smallest(best);
  out.value += best;
  out.items.insert(out.items.end(), chosen.begin(), chosen.end());
  std::sort(out.items.begin(), out.items.end());
  return out;
}

/// Knapsack over `pool` using agent `agent`'s values and the instance costs.
inline KnapsackResult solve_knapsack(const Instance& inst, std::size_t agent, const ItemSet& pool,
                                     const Num& capacity) {
  std::vector<KnapsackItem> items;
  items.reserve(pool.size());
  for (auto j : pool) items.push_back({j, inst.value(agent, j), inst.cost(j)});
  return solve_knapsack(items, capacity);
}

}  // namespace budget_fair

#endif  // BUDGET_FAIR_KNAPSACK_HPP
