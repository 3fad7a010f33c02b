// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "capid/choice.hpp"
#include "capid/measure.hpp"
#include "capid/scalar.hpp"
#include "capid/subset.hpp"

namespace capid {

/**
 * A capacity on a finite ground set X: a monotone set function with
 * ν(∅) = 0 and ν(X) = 1, stored densely as 2^n values indexed by bitmask.
 *
 * An optional carrier C records that ν lives on C, i.e. ν(C) = 1 and
 * ν(K) = ν(K ∩ C) for every K. Construction validates every invariant and
 * the object is immutable afterwards.
 */
template <Scalar T>
class Capacity {
 public:
  /// Throws ValidationError if values.size() != 2^n or any invariant fails.
  Capacity(GroundSet ground, std::vector<T> values,
           std::optional<SubsetMask> carrier = std::nullopt);

  /// p viewed as an additive capacity.
  static Capacity from_measure(GroundSet ground, const Measure<T>& p);
  /// ν(K) = 1 if C ⊆ K, else 0.
  static Capacity ignorance(GroundSet ground, SubsetMask carrier);

  const GroundSet& ground() const { return ground_; }
  std::size_t ground_size() const { return ground_.size(); }
  const T& operator()(SubsetMask k) const { return values_[k.bits()]; }
  std::span<const T> values() const { return values_; }
  const std::optional<SubsetMask>& carrier() const { return carrier_; }

  /// Same values with a carrier attached; throws if ν does not live on it.
  Capacity with_carrier(SubsetMask carrier) const;
  /// Smallest C with ν(K) = ν(K ∩ C) for every K.
  SubsetMask minimal_carrier() const;

  friend bool operator==(const Capacity& a, const Capacity& b) {
    return a.ground_ == b.ground_ && a.values_ == b.values_;
  }

 private:
  GroundSet ground_;
  std::vector<T> values_;
  std::optional<SubsetMask> carrier_;
};

/// ν(K'∪K) + ν(K'∩K) ≥ ν(K') + ν(K) for every pair, checked pairwise.
template <Scalar T>
bool is_convex(const Capacity<T>& nu);

/// Möbius masses: m(K) = Σ_{J⊆K} (−1)^{|K∖J|} ν(J), indexed by bitmask.
template <Scalar T>
std::vector<T> mobius(const Capacity<T>& nu);

/// Zeta transform, the inverse of mobius: returns Σ_{J⊆K} m(J) for every K.
template <Scalar T>
std::vector<T> zeta(std::span<const T> masses);

/// Every Möbius mass nonnegative (total monotonicity on a finite set).
template <Scalar T>
bool is_belief_function(const Capacity<T>& nu);

/// p(K) ≥ ν(K) for every K.
template <Scalar T>
bool core_contains(const Capacity<T>& nu, const Measure<T>& p);

/// Marginal vectors of every ordering of X, deduplicated, in the order the
/// orderings are first visited (lexicographic permutations). For convex ν
/// this is exactly the vertex set of the core. Throws ValidationError if ν
/// is not convex.
template <Scalar T>
std::vector<Measure<T>> core_vertices(const Capacity<T>& nu);

/// ν(K) = min over the given measures of p(K). Throws ValidationError on an
/// empty list or a size mismatch.
template <Scalar T>
Capacity<T> lower_probability(std::span<const Measure<T>> vertices, const GroundSet& ground);

/// Pointwise Σ weights[i]·capacities[i]. Weights must form a probability vector.
template <Scalar T>
Capacity<T> mixture(std::span<const Capacity<T>> capacities, const Measure<T>& weights);

/**
 * Finds p_i ∈ core(ν_i) with Σ weights_i·p_i = p by solving the linear
 * feasibility problem in the entries of the p_i. For convex inputs and
 * p ∈ core(mixture) a solution always exists; nullopt means one of those
 * preconditions fails.
 */
template <Scalar T>
std::optional<std::vector<Measure<T>>> decompose_in_mixture_core(
    const Measure<T>& p, std::span<const Capacity<T>> capacities, const Measure<T>& weights);

/// ν'(K) = ν(K ∩ C) on the larger ground set X, where C is the ground set of
/// ν_on_c embedded into X by label. The result carries C as its carrier.
template <Scalar T>
Capacity<T> cylindrical_extension(const Capacity<T>& nu_on_c, const GroundSet& x);

/// ν(K) = ψ(d⁻¹(K)) for a capacity ψ on the menu collection. The result is a
/// capacity on X carried by C_d.
template <Scalar T>
Capacity<T> pushforward(const Capacity<T>& psi, const DecisionRule& rule, const MenuCollection& menus);

}  // namespace capid
