#ifndef BUDGET_FAIR_REPORTS_HPP
#define BUDGET_FAIR_REPORTS_HPP

#include <optional>

#include "budget_fair/audit.hpp"
#include "budget_fair/constructions.hpp"
#include "budget_fair/io.hpp"
#include "budget_fair/solver.hpp"

namespace budget_fair {

inline json to_json(const EnvyWitness& w) {
  return {{"envier", w.envier},
          {"envied", w.envied},
          {"set", to_json(w.set)},
          {"removed_item", w.removed_item ? json(*w.removed_item) : json(nullptr)},
          {"envy_value", to_string(w.envy_value)}};
}

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? to_json(*v) : json(nullptr);
}

inline json to_json(const AuditReport& r) {
  return {{"ef_alpha", r.ef_alpha.str()},
          {"ef1_alpha", r.ef1_alpha.str()},
          {"ef_witness", optional_json(r.ef_witness)},
          {"ef1_witness", optional_json(r.ef1_witness)},
          {"po", r.po ? json(*r.po) : json(nullptr)}};
}

inline json to_json(const SolveResult& r) {
  return {{"allocation", to_json(r.allocation)},
          {"nsw", to_json(r.nsw)},
          {"exact", r.exact},
          {"nodes_explored", r.nodes_explored}};
}

inline json to_json(const Theorem1Report& r) {
  return {{"solution", to_json(r.solution)},
          {"audit", to_json(r.audit)},
          {"po_method", r.po_method},
          {"ef1_bound", "1/4"},
          {"ef1_ok", r.ef1_ok},
          {"po_ok", r.po_ok},
          {"passed", r.passed()}};
}

inline json to_json(const CorollaryReport& r) {
  return {{"optimum", to_json(r.optimum)},
          {"candidate", to_json(r.candidate)},
          {"alpha", to_string(r.alpha)},
          {"ef1_alpha", r.ef1_alpha.str()},
          {"required", to_string(r.required)},
          {"passed", r.passed()}};
}

// Loads back as an allocation; the extra keys are ignored by the reader.
inline json to_json(const Improvement& r) {
  json out = to_json(r.allocation);
  out["route"] = r.route;
  out["before"] = to_json(r.before);
  out["after"] = to_json(r.after);
  return out;
}

}  // namespace budget_fair

#endif  // BUDGET_FAIR_REPORTS_HPP
