// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "capid/capacity.hpp"
#include "capid/choice.hpp"
#include "capid/info_spec.hpp"
#include "capid/measure.hpp"
#include "capid/simulate.hpp"

namespace capid::cli {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kSchema = "capid/1";

/// Maps a label as written in a file to an index of the ground set.
using LabelResolver = std::function<std::size_t(std::string_view)>;

/// Resolves by exact label.
LabelResolver label_resolver(const GroundSet& ground);

/// Resolves by exact label, then by numeric value (for odds grids whose
/// labels are formatted numbers, so "0.5" and "1/2" name the same point).
template <Scalar T>
LabelResolver numeric_resolver(const GroundSet& ground, const std::vector<T>& points);

/// Throws ValidationError when "schema" is present and is not capid/1.
void check_schema(const Json& doc);

const Json& require(const Json& obj, std::string_view key, std::string_view where);

template <Scalar T>
T scalar_from_json(const Json& j, std::string_view where);

/// "p/q" strings in exact mode, JSON numbers in float mode.
template <Scalar T>
Json scalar_to_json(const T& v);

SubsetMask subset_from_json(const Json& j, const LabelResolver& resolve, std::string_view where);
Json subset_to_json(const GroundSet& ground, SubsetMask mask);

/// Object {label: value} (missing labels weigh 0) or an array aligned with the ground set.
template <Scalar T>
std::vector<T> weights_from_json(const Json& j, const GroundSet& ground, const LabelResolver& resolve,
                                 std::string_view where);

template <Scalar T>
Measure<T> measure_from_json(const Json& j, const GroundSet& ground, const LabelResolver& resolve,
                             std::string_view where);

template <Scalar T>
Json measure_to_json(const GroundSet& ground, const Measure<T>& m);

/// {labels?, values: {"a,b": v, ...}} with every subset present ("" is ∅).
template <Scalar T>
Capacity<T> capacity_from_json(const Json& j, const GroundSet& ground, const LabelResolver& resolve,
                               std::string_view where);

template <Scalar T>
Json capacity_to_json(const Capacity<T>& nu);

/// {tag, carrier?, params}. `carrier` is the carrier fixed by the caller
/// (from choices or the rule), checked against any carrier in the spec.
template <Scalar T>
InfoSpec<T> info_spec_from_json(const Json& j, const GroundSet& ground, const LabelResolver& resolve,
                                std::optional<SubsetMask> carrier, std::string_view where);

/// Carrier declared inside an info_spec object, if any.
std::optional<SubsetMask> info_spec_carrier(const Json& j, const LabelResolver& resolve, std::string_view where);

/// One rule of a problem file after parsing.
template <Scalar T>
struct LoadedRule {
  std::string id;
  std::optional<MenuCollection> menus;
  std::optional<DecisionRule> decision;
  SubsetMask carrier;
  std::optional<InfoSpec<T>> spec;      // absent for the "vertices" tag
  std::vector<Measure<T>> vertex_list;  // "vertices" tag only
  Json source;
};

template <Scalar T>
struct LoadedProblem {
  GroundSet ground;
  std::optional<MenuCollection> menus;  // top-level collection
  std::vector<LoadedRule<T>> rules;
  std::optional<Measure<T>> lambda;
  Json options = Json::object();

  std::size_t rule_index(std::string_view id) const;
  bool has_vertex_rules() const;
};

/// Parses a problem (or simulate) document. lambda is optional here; the
/// commands that need it check for it.
template <Scalar T>
LoadedProblem<T> load_problem(const Json& doc);

/// Q given as {rule id: weight} (missing ids weigh 0) or as an array in rule order.
template <Scalar T>
Measure<T> q_from_json(const Json& j, const LoadedProblem<T>& problem);

template <Scalar T>
Json q_to_json(const LoadedProblem<T>& problem, const Measure<T>& q);

}  // namespace capid::cli
