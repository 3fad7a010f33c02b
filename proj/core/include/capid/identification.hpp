// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "capid/capacity.hpp"
#include "capid/choice.hpp"
#include "capid/measure.hpp"
#include "capid/polytope.hpp"
#include "capid/subset.hpp"

namespace capid {

/// Largest rule count accepted by identified_vertices.
inline constexpr std::size_t kMaxVertexRules = 8;

/// Verdicts list at most this many violated subsets.
inline constexpr std::size_t kMaxListedViolations = 64;

/// One decision rule as the identification engine sees it: its choice range
/// C and the convex capacity ν whose core is the admissible set R ⊆ Δ(C).
template <Scalar T>
struct RuleSpec {
  std::string id;
  SubsetMask carrier;
  Capacity<T> capacity;
};

/**
 * Ground set, rules and observed choice distribution λ. A distribution Q
 * over the rules rationalizes λ exactly when
 *
 *     λ(K) ≥ Σ_d Q(d)·ν_d(K ∩ C_d)   for every K ⊆ X.
 */
template <Scalar T>
class IdentificationProblem {
 public:
  /// Throws ValidationError on an empty rule list, duplicate ids, a
  /// non-convex capacity, a capacity that does not live on its carrier, or
  /// size mismatches.
  IdentificationProblem(GroundSet ground, std::vector<RuleSpec<T>> rules, Measure<T> lambda);

  const GroundSet& ground() const { return ground_; }
  const std::vector<RuleSpec<T>>& rules() const { return rules_; }
  std::size_t num_rules() const { return rules_.size(); }
  const Measure<T>& lambda() const { return lambda_; }
  std::optional<std::size_t> rule_index(std::string_view id) const;

 private:
  GroundSet ground_;
  std::vector<RuleSpec<T>> rules_;
  Measure<T> lambda_;
};

/// A subset K at which the rationalization inequality fails by `shortfall`.
template <Scalar T>
struct Violation {
  SubsetMask subset;
  T shortfall;
};

template <Scalar T>
struct Verdict {
  bool rationalizes = true;
  /// Increasing bitmask order, truncated to kMaxListedViolations.
  std::vector<Violation<T>> violated;
  std::size_t total_violations = 0;
};

/// The inequality for one subset, as coefficients·Q ≤ bound.
template <Scalar T>
struct DominanceRow {
  SubsetMask subset;
  std::vector<T> coefficients;  // ν_d(K) per rule
  T bound;                      // λ(K)
};

template <Scalar T>
Verdict<T> check_rationalizes(const IdentificationProblem<T>& problem, const Measure<T>& q);

/// Every inequality with a nonzero left-hand side, except K = X (which the
/// simplex already imposes), in increasing bitmask order.
template <Scalar T>
std::vector<DominanceRow<T>> dominance_rows(const IdentificationProblem<T>& problem);

/**
 * The rows left after removing, one at a time in bitmask order, every row
 * implied by the simplex and the rows still kept. Redundancy is judged for
 * the problem's own λ.
 */
template <Scalar T>
std::vector<DominanceRow<T>> nonredundant_constraints(const IdentificationProblem<T>& problem);

/// Separation oracle over the rationalization inequalities, for use with the
/// polytope routines.
template <Scalar T>
polytope::HalfSpaceOracle<T> dominance_oracle(const IdentificationProblem<T>& problem);

/// Some Q (a measure over rules) that rationalizes λ, or nullopt.
template <Scalar T>
std::optional<Measure<T>> exists_rationalizing(const IdentificationProblem<T>& problem);

template <Scalar T>
struct RuleBounds {
  std::string id;
  T lower;
  T upper;
  Measure<T> argmin;  // a rationalizing Q attaining `lower`
  Measure<T> argmax;
};

/// [min Q(d), max Q(d)] over the identified set, per rule. Throws
/// InfeasibleSet when no Q rationalizes λ.
template <Scalar T>
std::vector<RuleBounds<T>> probability_bounds(const IdentificationProblem<T>& problem);

/// Vertices of the identified set in lexicographic order. Throws SizeLimit
/// above kMaxVertexRules rules and InfeasibleSet when the set is empty.
template <Scalar T>
std::vector<Measure<T>> identified_vertices(const IdentificationProblem<T>& problem);

template <Scalar T>
struct Witness {
  std::string rule_id;
  Measure<T> rho;
};

/**
 * ρ_d ∈ core(ν_d) for each rule with Q(d) > 0 such that Σ Q(d)·ρ_d = λ.
 * Throws ValidationError when Q does not rationalize λ.
 */
template <Scalar T>
std::vector<Witness<T>> witness_decomposition(const IdentificationProblem<T>& problem, const Measure<T>& q);

/**
 * Menu distributions that reproduce the given choice distributions: π_d puts
 * ρ_d(a) on the first menu (in collection order) from which d picks a.
 * Throws ValidationError when some ρ_d has mass outside C_d.
 */
template <Scalar T>
std::vector<Measure<T>> construct_menu_measures(std::span<const Measure<T>> rho_by_rule,
                                                std::span<const DecisionRule> rules,
                                                const MenuCollection& menus);

/// A single menu distribution π shared by every rule with
/// Σ_d Q(d)·π({A : d(A) = a}) = λ(a) for all a, or nullopt.
template <Scalar T>
std::optional<Measure<T>> check_menu_homogeneous(std::span<const DecisionRule> rules,
                                                 const MenuCollection& menus, const Measure<T>& lambda,
                                                 const Measure<T>& q);

template <Scalar T>
struct HomogeneousPoint {
  Measure<T> q;
  Measure<T> menu_distribution;
};

/// check_menu_homogeneous at every Q on the grid with the given denominator.
template <Scalar T>
std::vector<HomogeneousPoint<T>> menu_homogeneous_sweep(std::span<const DecisionRule> rules,
                                                        const MenuCollection& menus,
                                                        const Measure<T>& lambda, std::size_t denominator);

/// All measures over `size` points with weights in multiples of 1/denominator,
/// in lexicographic order.
template <Scalar T>
std::vector<Measure<T>> simplex_grid(std::size_t size, std::size_t denominator);

/// A rule whose admissible set is given only by a finite list of measures.
template <Scalar T>
struct VertexRule {
  std::string id;
  std::vector<Measure<T>> vertices;
};

template <Scalar T>
struct VertexSetProblem {
  GroundSet ground;
  std::vector<VertexRule<T>> rules;
  Measure<T> lambda;
};

/**
 * Runs the rationalization inequalities with ν_d the lower probability of
 * each vertex list. Without convexity a failure refutes rationalizability
 * but a pass does not certify it. Throws ValidationError on an empty list.
 */
template <Scalar T>
Verdict<T> necessary_check(const VertexSetProblem<T>& problem, const Measure<T>& q);

/// Some Q passing necessary_check, or nullopt (then no Q rationalizes λ).
template <Scalar T>
std::optional<Measure<T>> necessary_exists(const VertexSetProblem<T>& problem);

}  // namespace capid
