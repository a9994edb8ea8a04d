#ifndef BUDGET_FAIR_SWEEP_HPP
#define BUDGET_FAIR_SWEEP_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "budget_fair/audit.hpp"
#include "budget_fair/families.hpp"
#include "budget_fair/num.hpp"
#include "budget_fair/solver.hpp"

namespace budget_fair {

// Largest kappa audited on an exact Max-NSW allocation; beyond it the
// closed form kappa / (2 (kappa - 1)) of the reference allocation is used.
inline constexpr long kMaxAuditedKappa = 8;

struct SweepRow {
  long kappa = 0;
  Alpha ef1_alpha;
  Num theorem2_bound;
  bool bound_satisfied = false;
  std::string source;  // "audited" or "closed_form"
};

/// 1/2 - 5/r with r the largest multiple of 10^-6 whose fourth power is at
/// most kappa. Under-estimating kappa^(1/4) over-estimates the bound.
inline Num theorem2_bound(long kappa) {
  if (kappa < 1) throw PreconditionError("kappa must be at least 1");
  Num r = fourth_root_lower_bound(Num(kappa));
  return make_num(1, 2) - Num(5) / r;
}

inline bool bound_satisfied(const Alpha& alpha, const Num& bound) { return bound <= 0 || alpha.at_least(bound); }

inline SweepRow sweep_row(long kappa, std::uint64_t node_limit = kDefaultNodeLimit) {
  SweepRow row;
  row.kappa = kappa;
  row.theorem2_bound = theorem2_bound(kappa);
  if (kappa <= kMaxAuditedKappa) {
    auto family = large_budget_tight(kappa);
    auto opt = solve_exact(family.instance, node_limit);
    if (!opt.exact) throw LimitError("exact solve exceeded the node limit at kappa " + std::to_string(kappa));
    row.ef1_alpha = audit_allocation(family.instance, opt.allocation).ef1_alpha;
    row.source = "audited";
  } else {
    row.ef1_alpha = Alpha(Num(kappa) / Num(2 * (kappa - 1)));
    row.source = "closed_form";
  }
  row.bound_satisfied = bound_satisfied(row.ef1_alpha, row.theorem2_bound);
  return row;
}

inline std::string sweep_csv(std::span<const SweepRow> rows) {
  std::string out = "kappa,ef1_alpha,theorem2_bound,bound_satisfied,source\n";
  for (const auto& r : rows) {
    out += std::to_string(r.kappa) + "," + r.ef1_alpha.str() + "," + to_string(r.theorem2_bound) + "," +
           (r.bound_satisfied ? "true" : "false") + "," + r.source + "\n";
  }
  return out;
}

}  // namespace budget_fair

#endif  // BUDGET_FAIR_SWEEP_HPP
