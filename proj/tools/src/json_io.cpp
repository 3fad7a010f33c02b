// SPDX-License-Identifier: Apache-2.0
#include "json_io.hpp"

#include <set>

#include "capid/error.hpp"

namespace capid::cli {

namespace {

std::string at(std::string_view where, std::string_view what) {
  return std::string(where) + ": " + std::string(what);
}

std::vector<std::string_view> split_key(std::string_view key) {
  std::vector<std::string_view> parts;
  if (key.empty()) return parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = key.find(',', start);
    parts.push_back(key.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return parts;
}

std::string trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return std::string(s);
}

std::vector<std::size_t> permutation_from_json(const Json& j, const LabelResolver& resolve, std::string_view where) {
  if (!j.is_array()) throw ValidationError(at(where, "expected an array of labels"));
  std::vector<std::size_t> out;
  for (const auto& label : j) out.push_back(resolve(label.get<std::string>()));
  return out;
}

}  // namespace

LabelResolver label_resolver(const GroundSet& ground) {
  return [&ground](std::string_view label) { return ground.require_index(label); };
}

template <Scalar T>
LabelResolver numeric_resolver(const GroundSet& ground, const std::vector<T>& points) {
  return [&ground, &points](std::string_view label) {
    if (auto i = ground.index_of(label)) return *i;
    T value;
    try {
      value = parse_scalar<T>(label);
    } catch (const ValidationError&) {
      throw ValidationError("unknown grid point '" + std::string(label) + "'");
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (approx_eq(points[i], value)) return i;
    }
    throw ValidationError("'" + std::string(label) + "' is not a grid point");
  };
}

void check_schema(const Json& doc) {
  if (!doc.is_object()) throw ValidationError("input must be a JSON object");
  if (doc.contains("schema") && doc["schema"] != kSchema) {
    throw ValidationError("unsupported schema '" + doc["schema"].dump() + "', expected \"capid/1\"");
  }
}

const Json& require(const Json& obj, std::string_view key, std::string_view where) {
  if (!obj.is_object() || !obj.contains(std::string(key))) {
    throw ValidationError(at(where, "missing field \"" + std::string(key) + "\""));
  }
  return obj[std::string(key)];
}

template <Scalar T>
T scalar_from_json(const Json& j, std::string_view where) {
  if (j.is_string()) return parse_scalar<T>(j.get<std::string>());
  if (j.is_number_integer()) return T(j.get<std::int64_t>());
  if (j.is_number_unsigned()) return parse_scalar<T>(std::to_string(j.get<std::uint64_t>()));
  if (j.is_number_float()) {
    if constexpr (ScalarTraits<T>::exact) {
      return rational_from_double(j.get<double>());
    } else {
      return j.get<double>();
    }
  }
  throw ValidationError(at(where, "expected a number or a \"p/q\" string"));
}

template <Scalar T>
Json scalar_to_json(const T& v) {
  if constexpr (ScalarTraits<T>::exact) {
    return format_scalar(v);
  } else {
    return v;
  }
}

SubsetMask subset_from_json(const Json& j, const LabelResolver& resolve, std::string_view where) {
  std::vector<std::string> labels;
  if (j.is_string()) {
    for (auto part : split_key(j.get<std::string>())) labels.push_back(trim(part));
  } else if (j.is_array()) {
    for (const auto& l : j) {
      if (!l.is_string()) throw ValidationError(at(where, "subset labels must be strings"));
      labels.push_back(l.get<std::string>());
    }
  } else {
    throw ValidationError(at(where, "expected a list of labels"));
  }
  SubsetMask mask;
  for (const auto& l : labels) {
    const std::size_t i = resolve(l);
    if (mask.contains(i)) throw ValidationError(at(where, "label '" + l + "' repeated"));
    mask = mask.with(i);
  }
  return mask;
}

Json subset_to_json(const GroundSet& ground, SubsetMask mask) {
  Json out = Json::array();
  for (const auto& l : ground.labels_of(mask)) out.push_back(l);
  return out;
}

template <Scalar T>
std::vector<T> weights_from_json(const Json& j, const GroundSet& ground, const LabelResolver& resolve,
                                 std::string_view where) {
  std::vector<T> w(ground.size(), T(0));
  if (j.is_array()) {
    if (j.size() != ground.size()) throw ValidationError(at(where, "array needs one entry per element"));
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = scalar_from_json<T>(j[i], where);
  } else if (j.is_object()) {
    std::vector<bool> seen(ground.size(), false);
    for (const auto& [key, value] : j.items()) {
      const std::size_t i = resolve(key);
      if (seen[i]) throw ValidationError(at(where, "element '" + key + "' given twice"));
      seen[i] = true;
      w[i] = scalar_from_json<T>(value, where);
    }
  } else {
    throw ValidationError(at(where, "expected an object {label: weight} or an array"));
  }
  return w;
}

template <Scalar T>
Measure<T> measure_from_json(const Json& j, const GroundSet& ground, const LabelResolver& resolve,
                             std::string_view where) {
  try {
    return Measure<T>(weights_from_json<T>(j, ground, resolve, where));
  } catch (const ValidationError& e) {
    throw ValidationError(at(where, e.what()));
  }
}

template <Scalar T>
Json measure_to_json(const GroundSet& ground, const Measure<T>& m) {
  Json out = Json::object();
  for (std::size_t i = 0; i < m.size(); ++i) out[ground.label(i)] = scalar_to_json(m[i]);
  return out;
}

template <Scalar T>
Capacity<T> capacity_from_json(const Json& j, const GroundSet& ground, const LabelResolver& resolve,
                               std::string_view where) {
  if (j.contains("labels")) {
    const Json& labels = j["labels"];
    if (!labels.is_array() || labels.size() != ground.size()) {
      throw ValidationError(at(where, "capacity labels do not match the ground set"));
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (resolve(labels[i].get<std::string>()) != i) {
        throw ValidationError(at(where, "capacity labels must list the ground set in order"));
      }
    }
  }
  const Json& values = require(j, "values", where);
  if (!values.is_object()) throw ValidationError(at(where, "\"values\" must be an object"));
  std::vector<T> v(ground.num_subsets(), T(0));
  std::vector<bool> seen(v.size(), false);
  for (const auto& [key, value] : values.items()) {
    SubsetMask mask;
    for (auto part : split_key(key)) {
      const std::size_t i = resolve(trim(part));
      if (mask.contains(i)) throw ValidationError(at(where, "subset key '" + key + "' repeats a label"));
      mask = mask.with(i);
    }
    if (seen[mask.bits()]) throw ValidationError(at(where, "subset " + ground.describe(mask) + " given twice"));
    seen[mask.bits()] = true;
    v[mask.bits()] = scalar_from_json<T>(value, where);
  }
  for (std::uint32_t k = 0; k < v.size(); ++k) {
    if (!seen[k]) {
      throw ValidationError(at(where, "capacity value missing for " + ground.describe(SubsetMask(k)) +
                                          " (all 2^n subsets are required)"));
    }
  }
  std::optional<SubsetMask> carrier;
  if (j.contains("carrier")) carrier = subset_from_json(j["carrier"], resolve, where);
  try {
    return Capacity<T>(ground, std::move(v), carrier);
  } catch (const ValidationError& e) {
    throw ValidationError(at(where, e.what()));
  }
}

template <Scalar T>
Json capacity_to_json(const Capacity<T>& nu) {
  Json out = Json::object();
  out["labels"] = nu.ground().labels();
  Json values = Json::object();
  for (std::uint32_t k = 0; k < nu.values().size(); ++k) {
    values[nu.ground().key_of(SubsetMask(k))] = scalar_to_json(nu.values()[k]);
  }
  out["values"] = std::move(values);
  if (nu.carrier()) out["carrier"] = subset_to_json(nu.ground(), *nu.carrier());
  return out;
}

std::optional<SubsetMask> info_spec_carrier(const Json& j, const LabelResolver& resolve, std::string_view where) {
  if (!j.is_object() || !j.contains("carrier")) return std::nullopt;
  return subset_from_json(j["carrier"], resolve, where);
}

template <Scalar T>
InfoSpec<T> info_spec_from_json(const Json& j, const GroundSet& ground, const LabelResolver& resolve,
                                std::optional<SubsetMask> carrier, std::string_view where) {
  if (!j.is_object()) throw ValidationError(at(where, "info_spec must be an object"));
  const std::string tag = require(j, "tag", where).get<std::string>();
  const auto declared = info_spec_carrier(j, resolve, where);
  if (carrier && declared && *carrier != *declared) {
    throw ValidationError(at(where, "info_spec carrier " + ground.describe(*declared) +
                                        " differs from the rule's carrier " + ground.describe(*carrier)));
  }
  const SubsetMask c = carrier ? *carrier : declared ? *declared : ground.full();
  const Json params = j.contains("params") ? j["params"] : Json::object();
  const std::string here = std::string(where) + " (" + tag + ")";
  try {
    if (tag == "ignorance") return InfoSpec<T>::ignorance(ground, c);
    if (tag == "contamination") {
      return InfoSpec<T>::contamination(ground, c, measure_from_json<T>(require(params, "focal", here), ground, resolve, here),
                                        scalar_from_json<T>(require(params, "epsilon", here), here));
    }
    if (tag == "variation") {
      return InfoSpec<T>::variation(ground, c,
                                    measure_from_json<T>(require(params, "reference", here), ground, resolve, here),
                                    scalar_from_json<T>(require(params, "epsilon", here), here));
    }
    if (tag == "interval") {
      return InfoSpec<T>::interval(ground, c, weights_from_json<T>(require(params, "lower", here), ground, resolve, here),
                                   weights_from_json<T>(require(params, "upper", here), ground, resolve, here));
    }
    if (tag == "explicit") {
      return InfoSpec<T>::explicit_capacity(c, capacity_from_json<T>(require(params, "capacity", here), ground, resolve, here));
    }
    if (tag == "point") {
      return InfoSpec<T>::point(ground, c, measure_from_json<T>(require(params, "measure", here), ground, resolve, here));
    }
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    if (msg.rfind(here, 0) == 0) throw;
    throw ValidationError(at(here, msg));
  }
  throw ValidationError(at(where, "unknown info_spec tag '" + tag + "'"));
}

template <Scalar T>
std::size_t LoadedProblem<T>::rule_index(std::string_view id) const {
  for (std::size_t d = 0; d < rules.size(); ++d) {
    if (rules[d].id == id) return d;
  }
  throw ValidationError("unknown rule id '" + std::string(id) + "'");
}

template <Scalar T>
bool LoadedProblem<T>::has_vertex_rules() const {
  for (const auto& r : rules) {
    if (!r.spec) return true;
  }
  return false;
}

namespace {

MenuCollection menus_from_json(const Json& j, const GroundSet& ground, const LabelResolver& resolve,
                               std::string_view where) {
  if (!j.is_array()) throw ValidationError(at(where, "menus must be an array of label lists"));
  std::vector<SubsetMask> menus;
  for (const auto& m : j) menus.push_back(subset_from_json(m, resolve, where));
  return MenuCollection(ground, std::move(menus));
}

template <Scalar T>
std::optional<DecisionRule> decision_from_json(const Json& rule, const std::string& id,
                                               const std::optional<MenuCollection>& menus, const LabelResolver& resolve,
                                               std::string_view where) {
  const int sources = int(rule.contains("choices")) + int(rule.contains("ranking")) + int(rule.contains("satisficing"));
  if (sources == 0) return std::nullopt;
  if (sources > 1) throw ValidationError(at(where, "give only one of choices, ranking, satisficing"));
  if (!menus) throw ValidationError(at(where, "choices need a menu collection (rule or top-level \"menus\")"));
  if (rule.contains("ranking")) {
    const PreferenceOrder order{id, permutation_from_json(rule["ranking"], resolve, where)};
    return rules_from_preferences(std::span<const PreferenceOrder>(&order, 1), *menus).front();
  }
  if (rule.contains("satisficing")) {
    const Json& s = rule["satisficing"];
    const GroundSet& ground = menus->ground();
    SatisficingSpec<T> spec{id, weights_from_json<T>(require(s, "value", where), ground, resolve, where),
                            scalar_from_json<T>(require(s, "threshold", where), where),
                            permutation_from_json(require(s, "search_order", where), resolve, where)};
    return rules_from_satisficing<T>(std::span<const SatisficingSpec<T>>(&spec, 1), *menus).front();
  }
  const Json& c = rule["choices"];
  std::vector<std::size_t> choices(menus->size(), menus->ground().size());
  if (c.is_array()) {
    if (c.size() != menus->size()) throw ValidationError(at(where, "choices must give one label per menu"));
    for (std::size_t i = 0; i < c.size(); ++i) choices[i] = resolve(c[i].get<std::string>());
  } else if (c.is_object()) {
    for (const auto& [key, label] : c.items()) {
      std::size_t index = 0;
      try {
        std::size_t used = 0;
        index = std::stoul(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        throw ValidationError(at(where, "choice key '" + key + "' is not a menu index"));
      }
      if (index >= menus->size()) throw ValidationError(at(where, "menu index " + key + " out of range"));
      choices[index] = resolve(label.template get<std::string>());
    }
    for (std::size_t i = 0; i < choices.size(); ++i) {
      if (choices[i] == menus->ground().size()) {
        throw ValidationError(at(where, "rule is not total: no choice for menu " + std::to_string(i)));
      }
    }
  } else {
    throw ValidationError(at(where, "choices must be an object {menu index: label} or an array"));
  }
  return DecisionRule(id, *menus, std::move(choices));
}

}  // namespace

template <Scalar T>
LoadedProblem<T> load_problem(const Json& doc) {
  check_schema(doc);
  LoadedProblem<T> out;
  out.ground = GroundSet(require(doc, "labels", "problem").template get<std::vector<std::string>>());
  const LabelResolver resolve = label_resolver(out.ground);
  if (doc.contains("menus")) out.menus = menus_from_json(doc["menus"], out.ground, resolve, "menus");

  const Json& rules = require(doc, "rules", "problem");
  if (!rules.is_array() || rules.empty()) throw ValidationError("\"rules\" must be a nonempty array");
  for (std::size_t r = 0; r < rules.size(); ++r) {
    const Json& rule = rules[r];
    std::string where = "rules[" + std::to_string(r) + "]";
    LoadedRule<T> loaded;
    loaded.id = require(rule, "id", where).template get<std::string>();
    where += " '" + loaded.id + "'";
    loaded.source = rule;
    loaded.menus = rule.contains("menus") ? std::optional(menus_from_json(rule["menus"], out.ground, resolve, where))
                                          : out.menus;
    loaded.decision = decision_from_json<T>(rule, loaded.id, loaded.menus, resolve, where);

    const Json& spec = require(rule, "info_spec", where);
    std::optional<SubsetMask> carrier;
    auto agree = [&](SubsetMask c, std::string_view source) {
      if (carrier && *carrier != c) {
        throw ValidationError(at(where, std::string(source) + " carrier " + out.ground.describe(c) +
                                            " conflicts with " + out.ground.describe(*carrier)));
      }
      carrier = c;
    };
    if (loaded.decision) agree(choice_range(*loaded.decision, *loaded.menus), "choice-range");
    if (rule.contains("carrier")) agree(subset_from_json(rule["carrier"], resolve, where), "rule");
    if (auto c = info_spec_carrier(spec, resolve, where)) agree(*c, "info_spec");
    if (!carrier) throw ValidationError(at(where, "needs menus with choices, or a carrier"));
    loaded.carrier = *carrier;

    if (require(spec, "tag", where) == "vertices") {
      const Json params = spec.contains("params") ? spec["params"] : Json::object();
      const Json& list = require(params, "vertices", where);
      if (!list.is_array() || list.empty()) throw ValidationError(at(where, "vertex list must be a nonempty array"));
      for (const auto& v : list) {
        Measure<T> m = measure_from_json<T>(v, out.ground, resolve, where);
        if (!m.supported_on(loaded.carrier)) throw ValidationError(at(where, "a vertex puts mass outside the carrier"));
        loaded.vertex_list.push_back(std::move(m));
      }
    } else {
      loaded.spec = info_spec_from_json<T>(spec, out.ground, resolve, loaded.carrier, where);
    }
    for (const auto& prior : out.rules) {
      if (prior.id == loaded.id) throw ValidationError(at(where, "duplicate rule id"));
    }
    out.rules.push_back(std::move(loaded));
  }
  if (doc.contains("lambda")) out.lambda = measure_from_json<T>(doc["lambda"], out.ground, resolve, "lambda");
  if (doc.contains("options")) {
    if (!doc["options"].is_object()) throw ValidationError("\"options\" must be an object");
    out.options = doc["options"];
  }
  return out;
}

template <Scalar T>
Measure<T> q_from_json(const Json& j, const LoadedProblem<T>& problem) {
  std::vector<T> w(problem.rules.size(), T(0));
  if (j.is_array()) {
    if (j.size() != w.size()) throw ValidationError("Q array needs one weight per rule");
    for (std::size_t d = 0; d < w.size(); ++d) w[d] = scalar_from_json<T>(j[d], "Q");
  } else if (j.is_object()) {
    std::set<std::string> seen;
    for (const auto& [id, value] : j.items()) {
      if (!seen.insert(id).second) throw ValidationError("Q gives rule '" + id + "' twice");
      w[problem.rule_index(id)] = scalar_from_json<T>(value, "Q");
    }
  } else {
    throw ValidationError("Q must be an object {rule id: weight} or an array");
  }
  try {
    return Measure<T>(std::move(w));
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("Q: ") + e.what());
  }
}

template <Scalar T>
Json q_to_json(const LoadedProblem<T>& problem, const Measure<T>& q) {
  Json out = Json::object();
  for (std::size_t d = 0; d < q.size(); ++d) out[problem.rules[d].id] = scalar_to_json(q[d]);
  return out;
}

#define CAPID_INSTANTIATE(T)                                                                                  \
  template LabelResolver numeric_resolver(const GroundSet&, const std::vector<T>&);                          \
  template T scalar_from_json<T>(const Json&, std::string_view);                                              \
  template Json scalar_to_json(const T&);                                                                     \
  template std::vector<T> weights_from_json<T>(const Json&, const GroundSet&, const LabelResolver&,          \
                                               std::string_view);                                             \
  template Measure<T> measure_from_json<T>(const Json&, const GroundSet&, const LabelResolver&, std::string_view); \
  template Json measure_to_json(const GroundSet&, const Measure<T>&);                                         \
  template Capacity<T> capacity_from_json<T>(const Json&, const GroundSet&, const LabelResolver&,            \
                                             std::string_view);                                               \
  template Json capacity_to_json(const Capacity<T>&);                                                         \
  template InfoSpec<T> info_spec_from_json<T>(const Json&, const GroundSet&, const LabelResolver&,           \
                                              std::optional<SubsetMask>, std::string_view);                   \
  template struct LoadedProblem<T>;                                                                           \
  template LoadedProblem<T> load_problem<T>(const Json&);                                                     \
  template Measure<T> q_from_json(const Json&, const LoadedProblem<T>&);                                      \
  template Json q_to_json(const LoadedProblem<T>&, const Measure<T>&);

CAPID_INSTANTIATE(Rational)
CAPID_INSTANTIATE(double)

#undef CAPID_INSTANTIATE

}  // namespace capid::cli
