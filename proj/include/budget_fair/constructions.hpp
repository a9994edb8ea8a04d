#ifndef BUDGET_FAIR_CONSTRUCTIONS_HPP
#define BUDGET_FAIR_CONSTRUCTIONS_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "budget_fair/errors.hpp"
#include "budget_fair/model.hpp"
#include "budget_fair/num.hpp"

// Constructive steps of the envy-to-improvement arguments. Value and cost
// vectors are indexed by instance item index; item sets are ascending.
namespace budget_fair {

inline Num sum_over(const ItemSet& s, std::span<const Num> w) {
  Num total = 0;
  for (auto j : s) total += w[j];
  return total;
}

// ---------------------------------------------------------------------------
// Pair partition: T = {t} + part1 + part2 with
//   min(v(part1), v(part2)) + v(t) >= max(v(part1), v(part2)).

struct PairPartition {
  std::size_t t = 0;
  ItemSet part1;
  ItemSet part2;
};

/// Sorts T by ascending v (ties by index); t is the last item, the rest go
/// alternately to part1 (odd ranks) and part2 (even ranks).
inline PairPartition balanced_pair_partition(const ItemSet& items, std::span<const Num> v) {
  if (items.empty()) throw PreconditionError("pair partition of an empty set");
  std::vector<std::size_t> sorted(items.begin(), items.end());
  std::stable_sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  PairPartition p;
  p.t = sorted.back();
  for (std::size_t r = 0; r + 1 < sorted.size(); ++r) (r % 2 == 0 ? p.part1 : p.part2).push_back(sorted[r]);
  std::sort(p.part1.begin(), p.part1.end());
  std::sort(p.part2.begin(), p.part2.end());
  return p;
}

// ---------------------------------------------------------------------------
// Local search split for set-function valuations.

using SetValuation = std::function<Num(const ItemSet&)>;

struct SubadditivePartition {
  ItemSet first;   // T1
  ItemSet second;  // T2
  std::size_t moves = 0;
};

/// Starts from (T, {}) and, while some e in T1 has v(T1 - e) > v(T2 + e),
/// moves the smallest such e. At most |T| moves since T1 only shrinks.
inline SubadditivePartition subadditive_partition(const ItemSet& items, const SetValuation& v) {
  SubadditivePartition p;
  p.first = items;
  for (;;) {
    bool moved = false;
    for (auto e : p.first) {
      ItemSet without = set_difference(p.first, ItemSet{e});
      ItemSet with = set_union(p.second, ItemSet{e});
      if (v(without) > v(with)) {
        p.first = std::move(without);
        p.second = std::move(with);
        ++p.moves;
        moved = true;
        break;
      }
    }
    if (!moved) return p;
  }
}

// ---------------------------------------------------------------------------

/// Subset of X with cost at most B/2 and at least a third of v(X).
/// Needs c(X) <= B and every item of X costing at most B/2.
inline ItemSet keep_fraction(const ItemSet& x, const Num& budget, std::span<const Num> costs,
                             std::span<const Num> v) {
  const Num half = budget / 2;
  const Num total_cost = sum_over(x, costs);
  if (total_cost > budget) throw PreconditionError("keep_fraction: bundle exceeds the budget");
  for (auto j : x)
    if (costs[j] > half) throw PreconditionError("keep_fraction: an item costs more than half the budget");
  if (total_cost <= half) return x;

  ItemSet prefix;
  Num spent = 0;
  std::size_t last = 0;
  for (auto j : x) {
    prefix.push_back(j);
    spent += costs[j];
    if (spent > half) {
      last = j;
      break;
    }
  }
  ItemSet head(prefix.begin(), prefix.end() - 1);
  ItemSet single{last};
  ItemSet tail = set_difference(x, prefix);
  const ItemSet* best = &head;
  Num best_value = sum_over(head, v);
  for (const ItemSet* cand : {&single, &tail}) {
    Num cv = sum_over(*cand, v);
    if (cv > best_value) {
      best_value = cv;
      best = cand;
    }
  }
  return *best;
}

inline Num density(const Num& value, const Num& cost) {
  if (cost == 0) throw PreconditionError("density of a zero-cost item");
  return value / cost;
}

/// Drops the least dense items of X (ties: lower value, then higher index)
/// until X' fits in B - c(Y), and returns Z = X' + Y. Guarantees
/// v(Z) >= (1 - c(Y)/B - 1/k^4) v(X) + v(Y) when every item of X costs at
/// most B/k^4.
inline ItemSet density_trim(const ItemSet& x, const ItemSet& y, const Num& budget, const Num& k,
                            std::span<const Num> costs, std::span<const Num> v) {
  if (k <= 0) throw PreconditionError("density_trim: k must be positive");
  if (sum_over(x, costs) > budget) throw PreconditionError("density_trim: X exceeds the budget");
  const Num y_cost = sum_over(y, costs);
  if (y_cost > budget) throw PreconditionError("density_trim: Y exceeds the budget");
  if (!set_difference(x, set_difference(x, y)).empty()) throw PreconditionError("density_trim: X and Y overlap");
  const Num max_item = budget / pow_int(k, 4);
  for (auto j : x)
    if (costs[j] > max_item) throw PreconditionError("density_trim: an item of X costs more than B/k^4");

  std::vector<std::size_t> order(x.begin(), x.end());
  // least dense first; zero-cost items are densest
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    Num lhs = v[a] * costs[b];
    Num rhs = v[b] * costs[a];
    if (lhs != rhs) return lhs < rhs;
    if (v[a] != v[b]) return v[a] < v[b];
    return a > b;
  });
  Num kept_cost = sum_over(x, costs);
  const Num room = budget - y_cost;
  std::size_t removed = 0;
  while (kept_cost > room && removed < order.size()) kept_cost -= costs[order[removed++]];
  ItemSet kept(order.begin() + static_cast<std::ptrdiff_t>(removed), order.end());
  std::sort(kept.begin(), kept.end());
  return set_union(kept, y);
}

// ---------------------------------------------------------------------------

struct HeavyLightSplit {
  ItemSet heavy;
  ItemSet light;
  Num f = 0;  // v(light) / v(T_hat), 0 when v(T_hat) = 0
  Num k = 0;
};

/// Heavy items carry at least a 1/k^3 share of v(T_hat).
inline HeavyLightSplit heavy_light_split(const ItemSet& t_hat, std::span<const Num> v, const Num& k) {
  if (k <= 0) throw PreconditionError("heavy_light_split: k must be positive");
  HeavyLightSplit s;
  s.k = k;
  const Num total = sum_over(t_hat, v);
  if (total == 0) return s;
  const Num k3 = pow_int(k, 3);
  for (auto j : t_hat) (v[j] * k3 >= total ? s.heavy : s.light).push_back(j);
  s.f = sum_over(s.light, v) / total;
  return s;
}

// ---------------------------------------------------------------------------
// Even fractional partition of T_l into k parts of equal cost and value.

struct FractionalPartition {
  std::vector<std::map<std::size_t, Num>> parts;  // item -> fraction in (0, 1]
  std::vector<Num> boundaries;                    // b_1 .. b_{k-1}
  std::vector<ItemSet> rounded;
};

namespace detail {

// Items of T_l laid end to end by descending density, each occupying
// [start, start + cost) on the cost axis.
class DensityLine {
 public:
  DensityLine(const ItemSet& items, std::span<const Num> costs, std::span<const Num> v) {
    order_.assign(items.begin(), items.end());
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] * costs[b] > v[b] * costs[a]; });
    Num at = 0;
    for (auto j : order_) {
      start_.push_back(at);
      cost_.push_back(costs[j]);
      value_.push_back(v[j]);
      at += costs[j];
    }
    length_ = at;
  }

  const Num& length() const { return length_; }
  std::size_t size() const { return order_.size(); }
  std::size_t item(std::size_t r) const { return order_[r]; }

  // Value of the prefix [0, b].
  Num prefix_value(const Num& b) const {
    Num total = 0;
    for (std::size_t r = 0; r < order_.size(); ++r) {
      if (b <= start_[r]) break;
      Num used = b - start_[r];
      total += used >= cost_[r] ? value_[r] : value_[r] * used / cost_[r];
    }
    return total;
  }

  // Fraction of item r inside (a, c].
  Num overlap(std::size_t r, const Num& a, const Num& c) const {
    Num lo = std::max(a, start_[r]);
    Num hi = std::min(c, Num(start_[r] + cost_[r]));
    if (hi <= lo) return 0;
    return (hi - lo) / cost_[r];
  }

  std::vector<Num> boundaries_in(const Num& lo, const Num& hi, const Num& shift) const {
    std::vector<Num> out;
    for (std::size_t r = 0; r <= order_.size(); ++r) {
      Num e = (r < order_.size() ? start_[r] : length_) - shift;
      if (e > lo && e < hi) out.push_back(e);
    }
    return out;
  }

 private:
  std::vector<std::size_t> order_;
  std::vector<Num> start_;
  std::vector<Num> cost_;
  std::vector<Num> value_;
  Num length_;
};

}  // namespace detail

/// Splits T_l fractionally into k parts, part i being
///   (b_{i-1}, b_i]  +  ((k-i)/k S + b_i, (k-i+1)/k S + b_{i-1}]
/// on the density-ordered cost axis (S = c(T_l), b_0 = 0), with b_i chosen
/// by an exact walk over the breakpoints so every part has value v(T_l)/k.
/// Rounding gives each split item wholly to the lowest-index part holding
/// some of it.
inline FractionalPartition fractional_even_partition(const ItemSet& t_light, std::size_t k,
                                                     std::span<const Num> costs, std::span<const Num> v) {
  if (k < 1) throw PreconditionError("fractional_even_partition: k must be at least 1");
  if (t_light.empty()) throw PreconditionError("fractional_even_partition: empty item set");
  for (auto j : t_light)
    if (costs[j] <= 0) throw PreconditionError("fractional_even_partition: costs must be positive");

  detail::DensityLine line(t_light, costs, v);
  const Num S = line.length();
  const Num width = S / Num(static_cast<long>(k));
  const Num target = line.prefix_value(S) / Num(static_cast<long>(k));

  FractionalPartition out;
  std::vector<std::pair<Num, Num>> first_interval(k), second_interval(k);
  Num prev = 0;  // b_{i-1}
  for (std::size_t i = 1; i < k; ++i) {
    const Num low_shift = width * Num(static_cast<long>(k - i));  // (k-i)/k S
    const Num upper = low_shift + width + prev;                    // (k-i+1)/k S + b_{i-1}
    const Num upper_value = line.prefix_value(upper);
    const Num prev_value = line.prefix_value(prev);
    auto part_value = [&](const Num& b) -> Num {
      return line.prefix_value(b) - prev_value + upper_value - line.prefix_value(Num(low_shift + b));
    };
    const Num lo = prev;
    const Num hi = prev + width;
    std::vector<Num> points{lo, hi};
    for (auto& e : line.boundaries_in(lo, hi, Num(0))) points.push_back(e);
    for (auto& e : line.boundaries_in(lo, hi, low_shift)) points.push_back(e);
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    Num b = hi;
    Num g_prev = part_value(points.front());
    if (g_prev >= target) {
      b = points.front();
    } else {
      for (std::size_t p = 1; p < points.size(); ++p) {
        Num g = part_value(points[p]);
        if (g >= target) {
          // part_value is linear between consecutive breakpoints
          b = points[p - 1] + (target - g_prev) * (points[p] - points[p - 1]) / (g - g_prev);
          break;
        }
        g_prev = g;
      }
    }
    out.boundaries.push_back(b);
    first_interval[i - 1] = {prev, b};
    second_interval[i - 1] = {Num(low_shift + b), upper};
    prev = b;
  }
  first_interval[k - 1] = {prev, Num(prev + width)};
  second_interval[k - 1] = {Num(0), Num(0)};

  out.parts.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t r = 0; r < line.size(); ++r) {
      Num frac = line.overlap(r, first_interval[i].first, first_interval[i].second) +
                 line.overlap(r, second_interval[i].first, second_interval[i].second);
      if (frac > 0) out.parts[i][line.item(r)] = frac;
    }
  }
  out.rounded.resize(k);
  for (auto j : t_light) {
    for (std::size_t i = 0; i < k; ++i) {
      auto it = out.parts[i].find(j);
      if (it != out.parts[i].end()) {
        out.rounded[i].push_back(j);
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Improvement builders: each turns an EF1 violation witness into a feasible
// allocation with strictly larger lexicographic NSW.

// Agent `envier` covets the affordable subset `set` of agent `envied`'s bundle.
struct ViolationWitness {
  std::size_t envier = 0;
  std::size_t envied = 0;
  ItemSet set;
};

struct Improvement {
  Allocation allocation;
  std::string route;  // which construction produced it
  NswValue before;
  NswValue after;
};

namespace detail {

inline void check_witness(const Instance& inst, const Allocation& x, const ViolationWitness& w) {
  require_feasible(inst, x);
  const auto n = inst.num_agents();
  if (w.envier >= n || w.envied >= n || w.envier == w.envied)
    throw PreconditionError("witness agents must be distinct valid indices");
  if (w.set.empty()) throw PreconditionError("witness set is empty");
  if (!is_subset(w.set, x.bundles[w.envied])) throw PreconditionError("witness set is not inside the envied bundle");
  if (bundle_cost(inst, w.set) > inst.budget(w.envier))
    throw PreconditionError("witness set exceeds the envier's budget");
  for (std::size_t a = 0; a < n; ++a)
    if (a != w.envier && bundle_value(inst, a, x.bundles[a]) <= 0)
      throw PreconditionError("every agent other than the envier needs a positive value");
}

// v_i(T - g) for the item g of T maximizing v_i, i.e. min over g of v_i(T - g).
inline Num drop_best(const Instance& inst, std::size_t i, const ItemSet& t) {
  Num total = 0, top = 0;
  for (auto g : t) {
    total += inst.value(i, g);
    if (inst.value(i, g) > top) top = inst.value(i, g);
  }
  return total - top;
}

// Moves `give` from the envied bundle to the envier, who keeps `keep` of its
// old bundle; the rest of the old bundle goes to charity.
inline Allocation reassign(const Allocation& x, const ViolationWitness& w, const ItemSet& give, const ItemSet& keep) {
  Allocation y = x;
  const ItemSet& old = x.bundles[w.envier];
  y.charity = set_union(y.charity, set_difference(old, keep));
  y.bundles[w.envier] = set_union(keep, give);
  y.bundles[w.envied] = set_difference(x.bundles[w.envied], give);
  return y;
}

inline Improvement finish(const Instance& inst, const Allocation& x, Allocation y, std::string route) {
  if (!is_feasible(inst, y)) throw DegenerateError("construction produced an infeasible allocation");
  Improvement out{std::move(y), std::move(route), nsw(inst, x), NswValue{}};
  out.after = nsw(inst, out.allocation);
  if (!(out.after > out.before)) throw DegenerateError("construction did not increase the Nash welfare");
  return out;
}

inline const std::vector<Num>& values_of(const Instance& inst, std::size_t agent) { return inst.agents[agent].values; }

inline std::vector<Num> cost_vector(const Instance& inst) {
  std::vector<Num> c;
  c.reserve(inst.num_items());
  for (const auto& it : inst.items) c.push_back(it.cost);
  return c;
}

}  // namespace detail

/// Needs v_i(T - g) > 4 v_i(X_i) for every g in T. Splits T under the envied
/// agent's values and hands the envier the part it prefers; its old bundle
/// goes to charity.
inline Improvement construct_improvement_quarter(const Instance& inst, const Allocation& x, const ViolationWitness& w) {
  detail::check_witness(inst, x, w);
  const std::size_t i = w.envier;
  if (!(detail::drop_best(inst, i, w.set) > 4 * bundle_value(inst, i, x.bundles[i])))
    throw PreconditionError("witness does not violate 1/4-EF1");
  auto pp = balanced_pair_partition(w.set, detail::values_of(inst, w.envied));
  const ItemSet& give = bundle_value(inst, i, pp.part2) > bundle_value(inst, i, pp.part1) ? pp.part2 : pp.part1;
  return detail::finish(inst, x, detail::reassign(x, w, give, {}), "pair-partition");
}

/// Needs v_i(T - g) > 11/3 v_i(X_i) for every g in T and B_i >= 2 c_g for every
/// item. If a part of the pair partition is worth more than 2 v_i(X_i) to the
/// envier it takes that part alone; otherwise it takes the cheaper part and
/// keeps a third of its bundle's value within half its budget.
inline Improvement construct_improvement_warmup(const Instance& inst, const Allocation& x, const ViolationWitness& w) {
  detail::check_witness(inst, x, w);
  const std::size_t i = w.envier;
  for (const auto& it : inst.items)
    if (inst.budget(i) < 2 * it.cost) throw PreconditionError("warm-up needs every item to cost at most half the budget");
  const Num own = bundle_value(inst, i, x.bundles[i]);
  if (!(detail::drop_best(inst, i, w.set) > make_num(11, 3) * own))
    throw PreconditionError("witness does not violate 3/11-EF1");

  auto pp = balanced_pair_partition(w.set, detail::values_of(inst, w.envied));
  const Num v1 = bundle_value(inst, i, pp.part1);
  const Num v2 = bundle_value(inst, i, pp.part2);
  if (v1 > 2 * own || v2 > 2 * own) {
    const ItemSet& give = v2 > v1 ? pp.part2 : pp.part1;
    return detail::finish(inst, x, detail::reassign(x, w, give, {}), "pair-partition");
  }
  const ItemSet& give = bundle_cost(inst, pp.part2) < bundle_cost(inst, pp.part1) ? pp.part2 : pp.part1;
  const auto costs = detail::cost_vector(inst);
  ItemSet keep = keep_fraction(x.bundles[i], inst.budget(i), costs, detail::values_of(inst, i));
  return detail::finish(inst, x, detail::reassign(x, w, give, keep), "keep-fraction");
}

/// Large-budget construction with k = kappa^(1/4) (any k > 10 runs; the
/// guarantee needs k > 20). Drops the envied agent's favourite item j* from
/// T, splits the rest into heavy and light items, partitions the light items
/// into floor(k) parts, moves the part the envier values most, and trims the
/// envier's bundle back into budget by density.
inline Improvement construct_improvement_large_budget(const Instance& inst, const Allocation& x,
                                                      const ViolationWitness& w, const Num& k) {
  if (k <= 10) throw PreconditionError("large-budget construction needs k > 10");
  detail::check_witness(inst, x, w);
  const std::size_t i = w.envier;
  const auto& owner_values = detail::values_of(inst, w.envied);

  std::size_t top = w.set.front();
  for (auto g : w.set)
    if (owner_values[g] > owner_values[top]) top = g;
  const ItemSet t_hat = set_difference(w.set, ItemSet{top});
  const Num factor = 2 + Num(20) / (k - 10);
  if (!(bundle_value(inst, i, t_hat) > factor * bundle_value(inst, i, x.bundles[i])))
    throw PreconditionError("witness does not violate the large-budget EF1 bound");

  auto split = heavy_light_split(t_hat, owner_values, k);
  if (split.light.empty()) throw DegenerateError("empty light part");
  const auto parts = static_cast<std::size_t>(floor_of(k).get_ui());
  const auto costs = detail::cost_vector(inst);
  auto partition = fractional_even_partition(split.light, parts, costs, owner_values);

  std::size_t pick = 0;
  Num pick_value = -1;
  for (std::size_t p = 0; p < partition.rounded.size(); ++p) {
    Num pv = bundle_value(inst, i, partition.rounded[p]);
    if (pv > pick_value) {
      pick_value = pv;
      pick = p;
    }
  }
  const ItemSet& give = partition.rounded[pick];
  if (give.empty()) throw DegenerateError("empty light part");
  ItemSet merged = density_trim(x.bundles[i], give, inst.budget(i), k, costs, detail::values_of(inst, i));
  ItemSet keep = set_difference(merged, give);
  return detail::finish(inst, x, detail::reassign(x, w, give, keep), "light-partition");
}

}  // namespace budget_fair

#endif  // BUDGET_FAIR_CONSTRUCTIONS_HPP
