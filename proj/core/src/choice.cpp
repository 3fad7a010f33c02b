// SPDX-License-Identifier: Apache-2.0
#include "capid/choice.hpp"

#include <string>

#include "capid/error.hpp"

namespace capid {

MenuCollection::MenuCollection(const GroundSet& ground, std::vector<SubsetMask> menus)
    : ground_(ground), menus_(std::move(menus)) {
  if (menus_.empty()) throw ValidationError("menu collection must be nonempty");
  if (menus_.size() > kMaskBits) {
    throw SizeLimit("menu collection of size " + std::to_string(menus_.size()) + " exceeds " +
                    std::to_string(kMaskBits));
  }
  for (std::size_t i = 0; i < menus_.size(); ++i) {
    if (menus_[i].empty()) throw ValidationError("menu " + std::to_string(i) + " is empty");
    if (!menus_[i].subset_of(ground_.full())) {
      throw ValidationError("menu " + std::to_string(i) + " is not a subset of the ground set");
    }
  }
}

GroundSet MenuCollection::as_ground_set() const {
  std::vector<std::string> labels;
  labels.reserve(menus_.size());
  for (SubsetMask m : menus_) {
    std::string l = "{";
    bool first = true;
    for (std::size_t i : m.elements()) {
      if (!first) l += ';';
      l += ground_.label(i);
      first = false;
    }
    labels.push_back(l + "}");
  }
  // Repeated menus still need distinct labels.
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (labels[j] == labels[i]) {
        labels[i] += "#" + std::to_string(i);
        break;
      }
    }
  }
  return GroundSet(std::move(labels));
}

DecisionRule::DecisionRule(std::string id, const MenuCollection& menus,
                           std::vector<std::size_t> choices)
    : id_(std::move(id)), choices_(std::move(choices)) {
  if (choices_.size() != menus.size()) {
    throw ValidationError("rule '" + id_ + "' is not total on the menu collection");
  }
  for (std::size_t i = 0; i < choices_.size(); ++i) {
    if (!menus[i].contains(choices_[i])) {
      throw ValidationError("rule '" + id_ + "' chooses outside menu " + std::to_string(i));
    }
  }
}

SubsetMask DecisionRule::preimage(SubsetMask alternatives) const {
  SubsetMask out;
  for (std::size_t i = 0; i < choices_.size(); ++i) {
    if (alternatives.contains(choices_[i])) out = out.with(i);
  }
  return out;
}

SubsetMask choice_range(const DecisionRule& rule, const MenuCollection& menus) {
  if (rule.num_menus() != menus.size()) {
    throw ValidationError("rule '" + rule.id() + "' is not total on the menu collection");
  }
  SubsetMask range;
  for (std::size_t c : rule.choices()) range = range.with(c);
  return range;
}

template <Scalar T>
Measure<T> induce_choice_distribution(const Measure<T>& menu_distribution,
                                      const DecisionRule& rule, std::size_t ground_size) {
  if (menu_distribution.size() != rule.num_menus()) {
    throw ValidationError("menu distribution does not match the rule's menu collection");
  }
  std::vector<T> w(ground_size, T(0));
  for (std::size_t i = 0; i < rule.num_menus(); ++i) {
    w.at(rule.choice(i)) += menu_distribution[i];
  }
  return Measure<T>(std::move(w));
}

template Measure<Rational> induce_choice_distribution(const Measure<Rational>&,
                                                      const DecisionRule&, std::size_t);
template Measure<double> induce_choice_distribution(const Measure<double>&, const DecisionRule&,
                                                    std::size_t);

}  // namespace capid
