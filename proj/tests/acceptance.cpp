// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "budget_fair/audit.hpp"
#include "budget_fair/constructions.hpp"
#include "budget_fair/families.hpp"
#include "budget_fair/solver.hpp"
#include "budget_fair/sweep.hpp"
#include "oracles.hpp"

using namespace budget_fair;

namespace {

// Collects failed checks for one criterion.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    ++count_;
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    failed_ += !ok;
  }
  bool ok() const { return failed_ == 0; }
  std::string summary() const {
    std::ostringstream s;
    s << count_ - failed_ << "/" << count_ << " checks";
    for (const auto& f : failures_) s << "; " << f;
    return s.str();
  }

 private:
  std::size_t count_ = 0, failed_ = 0;
  std::vector<std::string> failures_;
};

ItemSet range(std::size_t lo, std::size_t hi) {
  ItemSet s;
  for (auto j = lo; j < hi; ++j) s.push_back(j);
  return s;
}

std::string str(const Num& x) { return to_string(x); }

struct Corpus {
  Instance inst;
  std::size_t n, m;
  long kappa;
  std::uint64_t seed;
};

// AC-2 corpus: n in {2,3}, m in {4..8}, kappa target in {1,2,3}.
std::vector<Corpus> ac2_corpus() {
  std::vector<Corpus> out;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const std::size_t n = 2 + seed % 2;
    const std::size_t m = 4 + (seed / 2) % 5;
    const long k = 1 + static_cast<long>((seed / 10) % 3);
    out.push_back({generate_random(n, m, k, seed), n, m, k, seed});
  }
  return out;
}

// ---------------------------------------------------------------------------

void ac1(Checks& c) {
  std::optional<Num> prev;
  for (long d : {10, 100, 1000}) {
    const Num eps = make_num(1, d);
    auto start = std::chrono::steady_clock::now();
    auto g = tight_quarter(eps);
    const Num product = 4 * (1 + eps);
    Allocation opt = *g.reference;
    if (d == 10) {
      SolveResult r = solve_exact(g.instance);
      c.expect(r.exact, "eps=1/10 solve not exact");
      c.expect(r.nsw == NswValue{2, product}, "eps=1/10 product " + str(r.nsw.product));
      opt = r.allocation;
    } else {
      c.expect(nsw(g.instance, opt) == NswValue{2, product}, "eps=1/" + std::to_string(d) + " product");
    }
    Alpha a = audit_allocation(g.instance, opt).ef1_alpha;
    const Num expect = (1 + eps) / (4 * (1 - eps));
    c.expect(a == Alpha(expect), "eps=1/" + std::to_string(d) + " alpha " + a.str());
    c.expect(!a.is_infinite() && a.value() > make_num(1, 4), "alpha above 1/4");
    if (prev && !a.is_infinite()) c.expect(a.value() < *prev, "alpha decreasing");
    if (!a.is_infinite()) prev = a.value();
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.expect(secs < 10.0, "eps=1/" + std::to_string(d) + " took " + std::to_string(secs) + "s");
  }
}

void ac2(Checks& c) {
  for (const auto& e : ac2_corpus()) {
    SolveResult r = solve_exact(e.inst);
    const std::string tag = "seed " + std::to_string(e.seed);
    c.expect(r.exact, tag + " not exact");
    AuditReport a = audit_allocation(e.inst, r.allocation, true);
    c.expect(a.ef1_alpha.at_least(make_num(1, 4)), tag + " ef1_alpha " + a.ef1_alpha.str());
    c.expect(a.po.value_or(false), tag + " not PO");
  }
}

void ac3(Checks& c) {
  for (long k = 2; k <= 8; ++k) {
    auto g = large_budget_tight(k);
    SolveResult r = solve_exact(g.instance);
    const std::string tag = "kappa " + std::to_string(k);
    c.expect(r.exact, tag + " not exact");
    c.expect(r.allocation == *g.reference, tag + " allocation is not (M1, M2)");
    c.expect(r.nsw.product == Num(2 * k * k), tag + " product " + str(r.nsw.product));
    Alpha a = audit_allocation(g.instance, r.allocation).ef1_alpha;
    c.expect(a == Alpha(Num(k) / Num(2 * (k - 1))), tag + " alpha " + a.str());
  }
  for (long k : {160000L, 100000000L}) {
    SweepRow row = sweep_row(k);
    const Num closed = Num(k) / Num(2 * (k - 1));
    c.expect(row.source == "closed_form" && row.ef1_alpha == Alpha(closed), "closed form row");
    c.expect(closed >= row.theorem2_bound && row.bound_satisfied, "kappa " + std::to_string(k) + " bound");
  }
  c.expect(theorem2_bound(160000) == make_num(1, 4), "bound at 160000");
  c.expect(theorem2_bound(100000000) == make_num(9, 20), "bound at 1e8");
}

void ac4(Checks& c) {
  SplitMix64 rng(2024);
  // pair partition: sandwich and half-loss
  for (int t = 0; t < 1000; ++t) {
    const auto m = static_cast<std::size_t>(rng.between(1, 16));
    std::vector<Num> v;
    for (std::size_t j = 0; j < m; ++j) v.push_back(make_num(rng.between(0, 40), rng.between(1, 5)));
    PairPartition p = balanced_pair_partition(range(0, m), v);
    const Num a = sum_over(p.part1, v), b = sum_over(p.part2, v), total = sum_over(range(0, m), v);
    c.expect(std::min(a, b) + v[p.t] >= std::max(a, b), "sandwich");
    c.expect(2 * std::min(a, b) <= total && 2 * std::max(a, b) <= total, "half loss");
  }
  // keep_fraction
  for (int t = 0; t < 1000; ++t) {
    const Num budget(rng.between(2, 60));
    std::vector<Num> cost, val;
    ItemSet x;
    Num spent = 0;
    for (std::size_t j = 0; j < 14; ++j) {
      cost.push_back(budget / 2 * make_num(rng.between(0, 10), 10));
      val.push_back(Num(rng.between(0, 12)));
      if (spent + cost[j] <= budget) {
        x.push_back(j);
        spent += cost[j];
      }
    }
    ItemSet out = keep_fraction(x, budget, cost, val);
    c.expect(is_subset(out, x) && 2 * sum_over(out, cost) <= budget, "keep_fraction cost");
    c.expect(3 * sum_over(out, val) >= sum_over(x, val), "keep_fraction value");
  }
  // density_trim
  for (int t = 0; t < 1000; ++t) {
    const Num k = make_num(rng.between(2, 9), rng.between(1, 2));
    const Num budget = pow_int(k, 4) * rng.between(1, 4);
    const Num small = budget / pow_int(k, 4);
    std::vector<Num> cost, val;
    ItemSet x, y;
    Num cx = 0, cy = 0;
    for (std::size_t j = 0; j < 40; ++j) {
      const bool in_x = rng.between(0, 1) == 0;
      cost.push_back(in_x ? small * make_num(rng.between(0, 6), 6) : budget * make_num(rng.between(0, 10), 40));
      val.push_back(Num(rng.between(0, in_x ? 9 : 25)));
      Num& used = in_x ? cx : cy;
      if (used + cost[j] <= budget) {
        (in_x ? x : y).push_back(j);
        used += cost[j];
      }
    }
    ItemSet z = density_trim(x, y, budget, k, cost, val);
    c.expect(sum_over(z, cost) <= budget, "density_trim cost");
    c.expect(sum_over(z, val) >= (1 - cy / budget - 1 / pow_int(k, 4)) * sum_over(x, val) + sum_over(y, val),
             "density_trim bound");
  }
  // fractional_even_partition under the light-item preconditions
  for (int t = 0; t < 1000; ++t) {
    const auto k = static_cast<std::size_t>(rng.between(1, 6));
    const Num kk(static_cast<long>(k));
    const Num budget = pow_int(kk, 4) * rng.between(2, 6);
    const Num max_cost = budget / pow_int(kk, 4);
    const auto m = static_cast<std::size_t>(rng.between(1, 30));
    std::vector<Num> cost, val;
    Num spent = 0, max_val = 0;
    ItemSet light;
    for (std::size_t j = 0; j < m; ++j) {
      cost.push_back(max_cost * make_num(rng.between(1, 6), 6));
      val.push_back(make_num(rng.between(0, 20), rng.between(1, 3)));
      if (spent + cost[j] <= budget) {
        light.push_back(j);
        spent += cost[j];
        max_val = std::max(max_val, val[j]);
      }
    }
    const Num vl = sum_over(light, val);
    // heavy remainder of T_hat making every light item worth < v(T_hat)/k^3
    const Num heavy = std::max(Num(0), Num(max_val * pow_int(kk, 3) - vl + 1));
    const Num v_hat = vl + heavy;
    const Num f = vl / v_hat;
    FractionalPartition p = fractional_even_partition(light, k, cost, val);
    std::vector<Num> share(m, Num(0));
    for (const auto& part : p.parts) {
      Num pc = 0, pv = 0;
      int fractional = 0;
      for (const auto& [j, fr] : part) {
        share[j] += fr;
        pc += fr * cost[j];
        pv += fr * val[j];
        fractional += fr < 1;
      }
      c.expect(pc == spent / kk, "fractional cost equal");
      c.expect(pv == vl / kk, "fractional value equal");
      c.expect(fractional <= 4, "at most 4 fractional items");
    }
    for (auto j : light) c.expect(share[j] == 1, "fractions sum to 1");
    for (const auto& y : p.rounded) {
      c.expect(sum_over(y, cost) <= (1 / kk + 4 / pow_int(kk, 4)) * budget, "rounded cost bound");
      c.expect(sum_over(y, val) <= (f / kk + 4 / pow_int(kk, 3)) * v_hat, "rounded value bound");
    }
  }
  // subadditive partition termination condition
  for (int t = 0; t < 1000; ++t) {
    const auto m = static_cast<std::size_t>(rng.between(0, 12));
    std::vector<Num> v;
    for (std::size_t j = 0; j < m; ++j) v.push_back(Num(rng.between(0, 30)));
    SetValuation val = [&v](const ItemSet& s) { return sum_over(s, v); };
    SubadditivePartition p = subadditive_partition(range(0, m), val);
    for (auto e : p.first)
      c.expect(val(set_difference(p.first, {e})) <= val(set_union(p.second, {e})), "termination condition");
  }
}

// Allocation where agent 0 holds item 0 and barely values it; all values positive.
std::pair<Instance, Allocation> violating(SplitMix64& rng, bool roomy) {
  const auto n = static_cast<std::size_t>(rng.between(2, 3));
  const auto m = static_cast<std::size_t>(rng.between(5, 10));
  Instance inst;
  Num total = 0, max_cost = 0;
  for (std::size_t j = 0; j < m; ++j) {
    Num cst = make_num(rng.between(1, 4), 2);
    inst.items.push_back({"g" + std::to_string(j), cst});
    total += cst;
    max_cost = std::max(max_cost, cst);
  }
  for (std::size_t i = 0; i < n; ++i) {
    Agent a{"a" + std::to_string(i), roomy ? std::max(total, Num(2 * max_cost)) : total, {}};
    for (std::size_t j = 0; j < m; ++j) a.values.push_back(Num(rng.between(1, 10)));
    inst.agents.push_back(std::move(a));
  }
  inst.agents[0].values[0] = make_num(1, rng.between(20, 200));
  std::vector<int> assign(m);
  assign[0] = 1;
  for (std::size_t j = 1; j < m; ++j)
    assign[j] = j < n ? static_cast<int>(j) + 1 : static_cast<int>(rng.between(2, static_cast<std::int64_t>(n)));
  return {inst, from_assignment(assign, n)};
}

void ac5(Checks& c) {
  for (int variant = 0; variant < 2; ++variant) {
    SplitMix64 rng(variant == 0 ? 5150 : 5151);
    const Num bound = variant == 0 ? make_num(1, 4) : make_num(3, 11);
    int built = 0;
    for (int t = 0; t < 1000 && built < 200; ++t) {
      auto [inst, x] = violating(rng, variant == 1);
      AuditReport a = audit_allocation(inst, x);
      if (a.ef1_alpha.at_least(bound)) continue;
      const auto& w = *a.ef1_witness;
      ViolationWitness vw{w.envier, w.envied, w.set};
      ++built;
      try {
        Improvement r = variant == 0 ? construct_improvement_quarter(inst, x, vw) : construct_improvement_warmup(inst, x, vw);
        c.expect(is_feasible(inst, r.allocation) && r.after > r.before, "no strict improvement");
      } catch (const Error& e) {
        c.expect(false, std::string(variant == 0 ? "quarter: " : "warmup: ") + e.what());
      }
    }
    c.expect(built == 200, "only " + std::to_string(built) + " violating allocations");
  }
}

void ac6(Checks& c) {
  auto g = approx_gap(4);
  SolveResult opt = solve_exact(g.instance);
  c.expect(opt.exact && opt.nsw.product == make_num(144, 25), "optimum " + str(opt.nsw.product));
  NswValue ref = nsw(g.instance, *g.reference);
  c.expect(ref.product == make_num(16, 5), "reference product " + str(ref.product));
  CorollaryReport r = verify_approx_corollary(g.instance, *g.reference);
  c.expect(r.alpha == make_num(5, 9), "ratio " + str(r.alpha));
  c.expect(r.ef1_alpha == Alpha(make_num(4, 15)), "ef1_alpha " + r.ef1_alpha.str());
  c.expect(make_num(4, 15) == make_num(1, 5) + make_num(1, 5 * 3), "closed form 1/5 + 1/(5(k-1))");
  c.expect(r.required == make_num(5, 36) && r.passed(), "corollary on (M1, M2)");
  int run = 0;
  for (std::uint64_t seed = 0; run < 200 && seed < 1000; ++seed) {
    Instance inst = generate_random(2, 6, 1 + static_cast<long>(seed % 3), seed);
    SolveResult ls = solve_local_search(inst, seed);
    if (ls.nsw.positive_count != solve_exact(inst).nsw.positive_count) continue;
    ++run;
    c.expect(verify_approx_corollary(inst, ls.allocation).passed(), "corollary seed " + std::to_string(seed));
  }
  c.expect(run == 200, "only " + std::to_string(run) + " local-search allocations");
}

void ac7(Checks& c) {
  std::vector<Num> add{Num(5), Num(3), Num(2)};
  SubadditivePartition a = subadditive_partition(range(0, 3), [&](const ItemSet& s) { return sum_over(s, add); });
  c.expect(a.first == ItemSet{0, 2} && a.second == ItemSet{1}, "additive [5,3,2] trace");
  SubadditivePartition s = subadditive_partition({0}, [](const ItemSet& t) { return Num(static_cast<long>(t.size())); });
  c.expect(s.first == ItemSet{0} && s.second.empty(), "singleton trace");
  std::vector<std::set<int>> cover{{1}, {2}, {1, 2}};
  auto coverage = [&cover](const ItemSet& t) {
    std::set<int> u;
    for (auto j : t) u.insert(cover[j].begin(), cover[j].end());
    return Num(static_cast<long>(u.size()));
  };
  SubadditivePartition cv = subadditive_partition(range(0, 3), coverage);
  c.expect(cv.first == ItemSet{1, 2} && cv.second == ItemSet{0}, "coverage trace");

  SplitMix64 rng(77);
  for (int t = 0; t < 1000; ++t) {
    const auto m = static_cast<std::size_t>(rng.between(0, 14));
    std::vector<Num> v;
    for (std::size_t j = 0; j < m; ++j) v.push_back(Num(rng.between(0, 25)));
    SubadditivePartition p = subadditive_partition(range(0, m), [&](const ItemSet& q) { return sum_over(q, v); });
    c.expect(p.moves <= m, "additive moves");
  }
  for (int t = 0; t < 1000; ++t) {
    const auto m = static_cast<std::size_t>(rng.between(0, 12));
    std::vector<std::set<int>> sets(m);
    for (auto& st : sets)
      for (int r = 0, n = static_cast<int>(rng.between(0, 5)); r < n; ++r) st.insert(static_cast<int>(rng.between(0, 10)));
    auto val = [&sets](const ItemSet& q) {
      std::set<int> u;
      for (auto j : q) u.insert(sets[j].begin(), sets[j].end());
      return Num(static_cast<long>(u.size()));
    };
    SubadditivePartition p = subadditive_partition(range(0, m), val);
    c.expect(p.moves <= m, "coverage moves");
    for (auto e : p.first)
      c.expect(val(set_difference(p.first, {e})) <= val(set_union(p.second, {e})), "coverage termination condition");
  }
}

void ac8(Checks& c) {
  for (const auto& e : ac2_corpus()) {
    const std::string tag = "seed " + std::to_string(e.seed);
    if (oracle::assignment_count(e.n, e.m) <= 100000) {
      auto expect = oracle::max_nsw(e.inst);
      SolveResult r = solve_exact(e.inst);
      c.expect(r.nsw == expect.nsw, tag + " solver nsw");
      c.expect(to_assignment(r.allocation, e.m) == expect.assignment, tag + " solver tie-break");
    }
    for (const Allocation& x : {solve_exact(e.inst).allocation, solve_local_search(e.inst, e.seed).allocation}) {
      for (std::size_t i = 0; i < e.n; ++i)
        for (std::size_t j = 0; j < e.n; ++j) {
          if (i == j || x.bundles[j].size() > 18) continue;
          c.expect(max_envy_ef(e.inst, x, i, j).value == oracle::ef_envy(e.inst, x, i, j), tag + " EF knapsack");
          c.expect(max_envy_ef1(e.inst, x, i, j).first == oracle::ef1_envy(e.inst, x, i, j), tag + " EF1 knapsack");
        }
    }
  }
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    const char* name;
    double limit_seconds;  // 0: no runtime criterion
    std::function<void(Checks&)> run;
  };
  const std::vector<Criterion> criteria{
      {"AC-1", "tight-quarter tightness", 30.0, ac1},  // 10 s per epsilon, checked inside
      {"AC-2", "Max-NSW is 1/4-EF1 and PO", 300.0, ac2},
      {"AC-3", "large-budget family and bound", 60.0, ac3},
      {"AC-4", "construction invariants", 120.0, ac4},
      {"AC-5", "improvement constructions", 0.0, ac5},
      {"AC-6", "approximate Max-NSW and gap family", 0.0, ac6},
      {"AC-7", "subadditive partition traces", 0.0, ac7},
      {"AC-8", "oracle equivalence", 0.0, ac8},
  };
  bool all = true;
  for (const auto& cr : criteria) {
    Checks checks;
    auto start = std::chrono::steady_clock::now();
    try {
      cr.run(checks);
    } catch (const std::exception& e) {
      checks.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cr.limit_seconds > 0) checks.expect(secs < cr.limit_seconds, "runtime over limit");
    const bool ok = checks.ok();
    all = all && ok;
    std::printf("%s %s  %s (%s, %.2fs)\n", cr.id, ok ? "PASS" : "FAIL", cr.name, checks.summary().c_str(), secs);
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
