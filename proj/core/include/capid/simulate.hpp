// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "capid/choice.hpp"
#include "capid/info_spec.hpp"
#include "capid/measure.hpp"

namespace capid {

/// Identifier of the generator behind every seeded draw, reported in output metadata.
inline constexpr const char* kRngAlgorithm = "mt19937_64";

/// A strict ranking of X, best first, as indices into the ground set.
struct PreferenceOrder {
  std::string id;
  std::vector<std::size_t> ranking;
};

/// Search X in `search_order` and take the first alternative worth at least
/// `threshold`; with none in the menu, take the menu's search-last element.
template <Scalar T>
struct SatisficingSpec {
  std::string id;
  std::vector<T> value;  // one per alternative
  T threshold;
  std::vector<std::size_t> search_order;
};

/// d(A) = the best element of A under each ranking. Throws ValidationError
/// when a ranking is not a permutation of X.
std::vector<DecisionRule> rules_from_preferences(std::span<const PreferenceOrder> orders,
                                                 const MenuCollection& menus);

template <Scalar T>
std::vector<DecisionRule> rules_from_satisficing(std::span<const SatisficingSpec<T>> specs,
                                                 const MenuCollection& menus);

template <Scalar T>
struct SyntheticPopulation {
  Measure<T> lambda;
  std::vector<Measure<T>> rho;  // one admissible distribution per rule
};

/**
 * Draws ρ_d from each spec's admissible set as a random mixture of the core
 * vertices of its capacity (weights in twentieths) and sets λ = Σ Q(d)·ρ_d.
 * The same seed always gives the same draw.
 */
template <Scalar T>
SyntheticPopulation<T> synth_population(std::span<const InfoSpec<T>> specs, const Measure<T>& q,
                                        std::uint64_t seed);

}  // namespace capid
