#ifndef BUDGET_FAIR_FAMILIES_HPP
#define BUDGET_FAIR_FAMILIES_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "budget_fair/errors.hpp"
#include "budget_fair/model.hpp"
#include "budget_fair/num.hpp"

namespace budget_fair {

// SplitMix64 (Steele, Lea, Flood 2014). Fixed constants so generated
// instances are reproducible in any language:
//   state += 0x9E3779B97F4A7C15
//   z = state; z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB; return z ^ (z >> 31)
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform-ish integer in [lo, hi] by reduction modulo the range width.
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    auto width = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next() % width);
  }

 private:
  std::uint64_t state_;
};

enum class Family { TightQuarter, LargeBudgetTight, ApproxGap, Random };

inline std::optional<Family> parse_family(std::string_view name) {
  if (name == "tight-quarter") return Family::TightQuarter;
  if (name == "large-budget-tight") return Family::LargeBudgetTight;
  if (name == "approx-gap") return Family::ApproxGap;
  if (name == "random") return Family::Random;
  return std::nullopt;
}

struct FamilySpec {
  Family family = Family::TightQuarter;
  Num eps = make_num(1, 10);  // tight-quarter
  long kappa = 1;             // large-budget-tight, approx-gap, random (target)
  std::size_t n = 2;          // random
  std::size_t m = 4;          // random
  std::uint64_t seed = 0;     // random
};

struct Generated {
  Instance instance;
  std::optional<Allocation> reference;
};

namespace detail {

inline Instance two_agent_shell(const Num& budget, std::size_t m) {
  Instance inst;
  for (int i = 1; i <= 2; ++i) inst.agents.push_back({"a" + std::to_string(i), budget, std::vector<Num>(m, Num(0))});
  for (std::size_t j = 0; j < m; ++j) inst.items.push_back({"g" + std::to_string(j + 1), Num(0)});
  return inst;
}

// (M1, M2): agent 1 gets the first kappa items, agent 2 the rest.
inline Allocation halves(long kappa) {
  Allocation x;
  x.bundles.resize(2);
  for (long j = 0; j < 2 * kappa; ++j) x.bundles[j < kappa ? 0 : 1].push_back(static_cast<std::size_t>(j));
  return x;
}

}  // namespace detail

/// Two agents with budget 1 and identical values: one item of value 1+eps and
/// cost 1, then 1/eps items of value 4 eps and cost eps. Reference allocation
/// gives agent 1 the big item and agent 2 the small ones.
inline Generated tight_quarter(const Num& eps) {
  if (eps <= 0) throw ValidationError("eps must be positive");
  Num inv = 1 / eps;
  if (inv.get_den() != 1) throw ValidationError("1/eps must be an integer");
  const auto small = static_cast<std::size_t>(inv.get_num().get_ui());
  const std::size_t m = small + 1;
  Instance inst = detail::two_agent_shell(Num(1), m);
  inst.items[0].cost = 1;
  for (auto& a : inst.agents) a.values[0] = 1 + eps;
  for (std::size_t j = 1; j < m; ++j) {
    inst.items[j].cost = eps;
    for (auto& a : inst.agents) a.values[j] = 4 * eps;
  }
  Allocation x;
  x.bundles.resize(2);
  x.bundles[0] = {0};
  for (std::size_t j = 1; j < m; ++j) x.bundles[1].push_back(j);
  return {std::move(inst), std::move(x)};
}

/// Budgets kappa, 2 kappa unit-cost items. Agent 1 values M1 at 1 and M2 at 2;
/// agent 2 values M1 at 0 and M2 at 2.
inline Generated large_budget_tight(long kappa) {
  if (kappa < 1) throw ValidationError("kappa must be at least 1");
  const auto m = static_cast<std::size_t>(2 * kappa);
  Instance inst = detail::two_agent_shell(Num(kappa), m);
  for (std::size_t j = 0; j < m; ++j) {
    const bool first = j < static_cast<std::size_t>(kappa);
    inst.items[j].cost = 1;
    inst.agents[0].values[j] = first ? 1 : 2;
    inst.agents[1].values[j] = first ? 0 : 2;
  }
  return {std::move(inst), detail::halves(kappa)};
}

/// Budgets kappa, 2 kappa unit-cost items valued identically: 1 on M1, 1/5 on M2.
inline Generated approx_gap(long kappa) {
  if (kappa < 1) throw ValidationError("kappa must be at least 1");
  const auto m = static_cast<std::size_t>(2 * kappa);
  Instance inst = detail::two_agent_shell(Num(kappa), m);
  for (std::size_t j = 0; j < m; ++j) {
    inst.items[j].cost = 1;
    for (auto& a : inst.agents) a.values[j] = j < static_cast<std::size_t>(kappa) ? Num(1) : make_num(1, 5);
  }
  return {std::move(inst), detail::halves(kappa)};
}

/// Seeded random instance with kappa(inst) == kappa_target. Costs are k/8 for
/// k in [4, 12], values k/4 for k in [0, 400]; agent 1's budget is exactly
/// kappa_target * max cost and the others add a random quarter-multiple of
/// the max cost below one max cost.
inline Instance generate_random(std::size_t n, std::size_t m, long kappa_target, std::uint64_t seed) {
  if (n < 1 || m < 1 || kappa_target < 1) throw ValidationError("random family needs n >= 1, m >= 1, kappa >= 1");
  SplitMix64 rng(seed);
  Instance inst;
  Num max_cost = 0;
  for (std::size_t j = 0; j < m; ++j) {
    Num c = make_num(static_cast<long>(rng.between(4, 12)), 8);
    if (c > max_cost) max_cost = c;
    inst.items.push_back({"g" + std::to_string(j + 1), c});
  }
  for (std::size_t i = 0; i < n; ++i) {
    Agent a;
    a.id = "a" + std::to_string(i + 1);
    const long extra_quarters = i == 0 ? 0 : static_cast<long>(rng.between(0, 3));
    a.budget = max_cost * kappa_target + max_cost * make_num(extra_quarters, 4);
    for (std::size_t j = 0; j < m; ++j) a.values.push_back(make_num(static_cast<long>(rng.between(0, 400)), 4));
    inst.agents.push_back(std::move(a));
  }
  validate(inst);
  return inst;
}

inline Generated generate(const FamilySpec& spec) {
  switch (spec.family) {
    case Family::TightQuarter:
      return tight_quarter(spec.eps);
    case Family::LargeBudgetTight:
      return large_budget_tight(spec.kappa);
    case Family::ApproxGap:
      return approx_gap(spec.kappa);
    case Family::Random:
      return {generate_random(spec.n, spec.m, spec.kappa, spec.seed), std::nullopt};
  }
  throw ValidationError("unknown family");
}

}  // namespace budget_fair

#endif  // BUDGET_FAIR_FAMILIES_HPP
