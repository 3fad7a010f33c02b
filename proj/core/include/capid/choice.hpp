// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "capid/measure.hpp"
#include "capid/subset.hpp"

namespace capid {

/// The analyst's list of relevant menus, each a nonempty subset of X.
class MenuCollection {
 public:
  MenuCollection() = default;
  /// Throws ValidationError on an empty list, an empty menu, or a menu not within X.
  MenuCollection(const GroundSet& ground, std::vector<SubsetMask> menus);

  std::size_t size() const { return menus_.size(); }
  SubsetMask operator[](std::size_t i) const { return menus_[i]; }
  const std::vector<SubsetMask>& menus() const { return menus_; }
  const GroundSet& ground() const { return ground_; }

  /// Ground set whose elements are the menus themselves, labelled "{a,b}".
  GroundSet as_ground_set() const;

 private:
  GroundSet ground_;
  std::vector<SubsetMask> menus_;
};

/// A total map from menus to chosen alternatives.
class DecisionRule {
 public:
  DecisionRule() = default;
  /// choices[i] is the index in X chosen from menus[i]. Throws ValidationError
  /// unless the map is total and every choice lies in its menu.
  DecisionRule(std::string id, const MenuCollection& menus, std::vector<std::size_t> choices);

  const std::string& id() const { return id_; }
  std::size_t choice(std::size_t menu_index) const { return choices_.at(menu_index); }
  const std::vector<std::size_t>& choices() const { return choices_; }
  std::size_t num_menus() const { return choices_.size(); }

  /// Indices of the menus whose choice falls in K, as a mask over the menu collection.
  SubsetMask preimage(SubsetMask alternatives) const;

 private:
  std::string id_;
  std::vector<std::size_t> choices_;
};

/// C_d = {d(A) : A ∈ 𝒜}.
SubsetMask choice_range(const DecisionRule& rule, const MenuCollection& menus);

/// ρ(a) = π({A : d(A) = a}).
template <Scalar T>
Measure<T> induce_choice_distribution(const Measure<T>& menu_distribution,
                                      const DecisionRule& rule, std::size_t ground_size);

}  // namespace capid
