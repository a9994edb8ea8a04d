#ifndef BUDGET_FAIR_IO_HPP
#define BUDGET_FAIR_IO_HPP

#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "json.hpp"

#include "budget_fair/errors.hpp"
#include "budget_fair/model.hpp"
#include "budget_fair/num.hpp"

namespace budget_fair {

using json = nlohmann::json;

namespace detail {

// Prefix tagging a decimal literal's source text inside the DOM.
inline constexpr std::string_view kDecimalTag = "\x1f" "dec:";

// DOM builder that keeps the source text of floating-point literals, so
// "0.1" becomes the rational 1/10 rather than the nearest double.
class ExactNumberSax {
 public:
  explicit ExactNumberSax(json& root) : dom_(root) {}

  bool null() { return dom_.null(); }
  bool boolean(bool b) { return dom_.boolean(b); }
  bool number_integer(json::number_integer_t v) { return dom_.number_integer(v); }
  bool number_unsigned(json::number_unsigned_t v) { return dom_.number_unsigned(v); }
  bool number_float(json::number_float_t, const json::string_t& text) {
    json::string_t copy = std::string(kDecimalTag) + text;
    return dom_.string(copy);
  }
  bool string(json::string_t& s) { return dom_.string(s); }
  bool binary(json::binary_t& b) { return dom_.binary(b); }
  bool start_object(std::size_t n) { return dom_.start_object(n); }
  bool key(json::string_t& k) { return dom_.key(k); }
  bool end_object() { return dom_.end_object(); }
  bool start_array(std::size_t n) { return dom_.start_array(n); }
  bool end_array() { return dom_.end_array(); }
  template <typename Exception>
  bool parse_error(std::size_t pos, const std::string& token, const Exception& ex) {
    return dom_.parse_error(pos, token, ex);
  }

 private:
  nlohmann::detail::json_sax_dom_parser<json> dom_;
};

inline Num num_from_json(const json& j, std::string_view what) {
  if (j.is_number_integer()) {
    return j.is_number_unsigned() ? Num(mpz_class(std::to_string(j.get<std::uint64_t>())))
                                  : Num(mpz_class(std::to_string(j.get<std::int64_t>())));
  }
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s.starts_with(kDecimalTag)) return parse_num(std::string_view(s).substr(kDecimalTag.size()));
    return parse_num(s);
  }
  throw ParseError(std::string(what) + ": expected a number or a \"p/q\" string");
}

inline const json& field(const json& obj, const char* name, std::string_view where) {
  if (!obj.is_object()) throw ParseError(std::string(where) + ": expected an object");
  auto it = obj.find(name);
  if (it == obj.end()) throw ParseError(std::string(where) + ": missing field '" + name + "'");
  return *it;
}

inline std::string id_from_json(const json& j, std::string_view where) {
  if (!j.is_string()) throw ParseError(std::string(where) + ": id must be a string");
  const auto& s = j.get_ref<const std::string&>();
  if (s.starts_with(kDecimalTag)) throw ParseError(std::string(where) + ": id must be a string");
  return s;
}

inline ItemSet index_set_from_json(const json& arr, std::string_view where) {
  if (!arr.is_array()) throw ParseError(std::string(where) + ": expected an array of item indices");
  ItemSet out;
  out.reserve(arr.size());
  for (const auto& e : arr) {
    if (!e.is_number_integer() || (e.is_number_integer() && !e.is_number_unsigned() && e.get<std::int64_t>() < 0))
      throw ParseError(std::string(where) + ": item indices must be non-negative integers");
    out.push_back(e.get<std::size_t>());
  }
  return out;
}

}  // namespace detail

inline json parse_json(std::string_view text) {
  json root;
  detail::ExactNumberSax sax(root);
  try {
    if (!json::sax_parse(text.begin(), text.end(), &sax)) throw ParseError("malformed JSON");
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return root;
}

inline Instance instance_from_json(const json& root) {
  Instance inst;
  const json& agents = detail::field(root, "agents", "instance");
  const json& items = detail::field(root, "items", "instance");
  if (!agents.is_array() || !items.is_array()) throw ParseError("instance: 'agents' and 'items' must be arrays");
  for (const auto& it : items) {
    Item item;
    item.id = detail::id_from_json(detail::field(it, "id", "item"), "item");
    item.cost = detail::num_from_json(detail::field(it, "cost", "item"), "item cost");
    inst.items.push_back(std::move(item));
  }
  for (const auto& a : agents) {
    Agent agent;
    agent.id = detail::id_from_json(detail::field(a, "id", "agent"), "agent");
    agent.budget = detail::num_from_json(detail::field(a, "budget", "agent"), "agent budget");
    const json& vals = detail::field(a, "values", "agent");
    if (!vals.is_array()) throw ParseError("agent '" + agent.id + "': 'values' must be an array");
    for (const auto& v : vals) agent.values.push_back(detail::num_from_json(v, "agent value"));
    inst.agents.push_back(std::move(agent));
  }
  validate(inst);
  return inst;
}

/// Parses and validates an instance document.
inline Instance load_instance(std::string_view text) { return instance_from_json(parse_json(text)); }

inline json to_json(const Instance& inst) {
  json agents = json::array();
  for (const auto& a : inst.agents) {
    json vals = json::array();
    for (const auto& v : a.values) vals.push_back(to_string(v));
    agents.push_back({{"id", a.id}, {"budget", to_string(a.budget)}, {"values", std::move(vals)}});
  }
  json items = json::array();
  for (const auto& it : inst.items) items.push_back({{"id", it.id}, {"cost", to_string(it.cost)}});
  return {{"agents", std::move(agents)}, {"items", std::move(items)}};
}

inline std::string serialize(const Instance& inst) { return to_json(inst).dump(2) + "\n"; }

inline json to_json(const ItemSet& s) {
  json arr = json::array();
  for (auto j : s) arr.push_back(j);
  return arr;
}

inline json to_json(const Allocation& x) {
  json bundles = json::array();
  for (const auto& b : x.bundles) bundles.push_back(to_json(b));
  return {{"bundles", std::move(bundles)}, {"charity", to_json(x.charity)}};
}

inline Allocation allocation_from_json(const json& root, const Instance& inst) {
  Allocation x;
  const json& bundles = detail::field(root, "bundles", "allocation");
  if (!bundles.is_array()) throw ParseError("allocation: 'bundles' must be an array");
  for (const auto& b : bundles) x.bundles.push_back(detail::index_set_from_json(b, "bundle"));
  auto it = root.find("charity");
  if (it != root.end()) {
    x.charity = detail::index_set_from_json(*it, "charity");
  } else {
    // Without an explicit charity bundle, unassigned items go there.
    std::vector<bool> assigned(inst.num_items(), false);
    for (const auto& b : x.bundles)
      for (auto j : b)
        if (j < assigned.size()) assigned[j] = true;
    for (std::size_t j = 0; j < assigned.size(); ++j)
      if (!assigned[j]) x.charity.push_back(j);
  }
  x = normalized(std::move(x));
  check_partition(inst, x);
  return x;
}

/// Parses an allocation against `inst`; a partition violation is a
/// PartitionError.
inline Allocation load_allocation(std::string_view text, const Instance& inst) {
  return allocation_from_json(parse_json(text), inst);
}

inline std::string serialize(const Allocation& x) { return to_json(x).dump() + "\n"; }

inline json to_json(const NswValue& v) {
  return {{"positive_count", v.positive_count}, {"product", to_string(v.product)}};
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

}  // namespace budget_fair

#endif  // BUDGET_FAIR_IO_HPP
