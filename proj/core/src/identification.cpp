// SPDX-License-Identifier: Apache-2.0
#include "capid/identification.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "capid/error.hpp"
#include "capid/lp.hpp"

namespace capid {

namespace {

template <Scalar T>
std::vector<T> subset_masses(const Measure<T>& p) {
  std::vector<T> out(std::size_t{1} << p.size(), T(0));
  for (std::uint32_t k = 1; k < out.size(); ++k) {
    const std::uint32_t low = k & (~k + 1);
    out[k] = out[k ^ low] + p[static_cast<std::size_t>(std::countr_zero(low))];
  }
  return out;
}

// LP solutions in float mode can carry noise of order 1e-15 below zero.
template <Scalar T>
Measure<T> to_measure(std::vector<T> x) {
  if constexpr (!ScalarTraits<T>::exact) {
    for (T& v : x) {
      if (v < 0) v = 0;
    }
  }
  return Measure<T>(std::move(x));
}

// The rationalization inequalities Σ_d Q(d)·ν_d(K) ≤ λ(K) over all K, shared
// by the convex engine and the necessity check.
template <Scalar T>
class DominanceSystem {
 public:
  DominanceSystem(std::vector<std::vector<T>> nu_values, const Measure<T>& lambda)
      : nu_(std::move(nu_values)), lambda_k_(subset_masses(lambda)) {}

  std::size_t num_rules() const { return nu_.size(); }
  std::uint32_t full() const { return static_cast<std::uint32_t>(lambda_k_.size() - 1); }

  T lhs(std::uint32_t k, std::span<const T> q) const {
    T s(0);
    for (std::size_t d = 0; d < nu_.size(); ++d) {
      if (q[d] != 0 && nu_[d][k] != 0) s += q[d] * nu_[d][k];
    }
    return s;
  }

  Verdict<T> verdict(const Measure<T>& q) const {
    if (q.size() != nu_.size()) throw ValidationError("Q must have one weight per rule");
    Verdict<T> out;
    for (std::uint32_t k = 0; k <= full(); ++k) {
      T gap = lhs(k, q.weights()) - lambda_k_[k];
      if (!definitely_gt(gap, T(0))) continue;
      ++out.total_violations;
      if (out.violated.size() < kMaxListedViolations) out.violated.push_back({SubsetMask(k), std::move(gap)});
    }
    out.rationalizes = out.total_violations == 0;
    return out;
  }

  std::vector<DominanceRow<T>> rows() const {
    std::vector<DominanceRow<T>> out;
    for (std::uint32_t k = 1; k < full(); ++k) {
      std::vector<T> coefficients(nu_.size());
      bool nonzero = false;
      for (std::size_t d = 0; d < nu_.size(); ++d) {
        coefficients[d] = nu_[d][k];
        nonzero = nonzero || !is_zero(coefficients[d]);
      }
      if (nonzero) out.push_back({SubsetMask(k), std::move(coefficients), lambda_k_[k]});
    }
    return out;
  }

  polytope::HalfSpaceOracle<T> oracle() const {
    const std::size_t per_round = std::max<std::size_t>(16, 2 * nu_.size());
    return [self = *this, per_round](std::span<const T> q) {
      std::vector<std::pair<T, std::uint32_t>> hits;
      for (std::uint32_t k = 1; k < self.full(); ++k) {
        T gap = self.lhs(k, q) - self.lambda_k_[k];
        if (definitely_gt(gap, T(0))) hits.emplace_back(std::move(gap), k);
      }
      auto by_gap = [](const auto& a, const auto& b) { return a.first > b.first || (a.first == b.first && a.second < b.second); };
      if (hits.size() > per_round) {
        std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(per_round), hits.end(), by_gap);
        hits.resize(per_round);
      } else {
        std::sort(hits.begin(), hits.end(), by_gap);
      }
      std::vector<polytope::HalfSpace<T>> out;
      out.reserve(hits.size());
      for (const auto& [gap, k] : hits) {
        std::vector<T> normal(self.nu_.size());
        for (std::size_t d = 0; d < self.nu_.size(); ++d) normal[d] = self.nu_[d][k];
        out.push_back({std::move(normal), self.lambda_k_[k]});
      }
      return out;
    };
  }

  std::optional<Measure<T>> feasible_point() const {
    const std::vector<T> zero(nu_.size(), T(0));
    auto x = polytope::optimize_over_slice<T>(nu_.size(), zero, false, oracle());
    if (!x) return std::nullopt;
    return to_measure(std::move(*x));
  }

 private:
  std::vector<std::vector<T>> nu_;
  std::vector<T> lambda_k_;
};

template <Scalar T>
DominanceSystem<T> system_of(const IdentificationProblem<T>& problem) {
  std::vector<std::vector<T>> values;
  values.reserve(problem.num_rules());
  for (const auto& rule : problem.rules()) {
    values.emplace_back(rule.capacity.values().begin(), rule.capacity.values().end());
  }
  return DominanceSystem<T>(std::move(values), problem.lambda());
}

template <Scalar T>
DominanceSystem<T> system_of(const VertexSetProblem<T>& problem) {
  if (problem.rules.empty()) throw ValidationError("at least one rule is required");
  if (problem.lambda.size() != problem.ground.size()) {
    throw ValidationError("lambda size does not match ground set");
  }
  std::vector<std::vector<T>> values;
  for (const auto& rule : problem.rules) {
    if (rule.vertices.empty()) throw ValidationError("rule '" + rule.id + "' has an empty vertex list");
    Capacity<T> nu = lower_probability(std::span<const Measure<T>>(rule.vertices), problem.ground);
    values.emplace_back(nu.values().begin(), nu.values().end());
  }
  return DominanceSystem<T>(std::move(values), problem.lambda);
}

}  // namespace

template <Scalar T>
IdentificationProblem<T>::IdentificationProblem(GroundSet ground, std::vector<RuleSpec<T>> rules,
                                                Measure<T> lambda)
    : ground_(std::move(ground)), rules_(std::move(rules)), lambda_(std::move(lambda)) {
  if (rules_.empty()) throw ValidationError("at least one rule is required");
  if (lambda_.size() != ground_.size()) throw ValidationError("lambda size does not match ground set");
  std::set<std::string> ids;
  for (const auto& rule : rules_) {
    if (!ids.insert(rule.id).second) throw ValidationError("duplicate rule id '" + rule.id + "'");
    if (!(rule.capacity.ground() == ground_)) {
      throw ValidationError("capacity of rule '" + rule.id + "' is on a different ground set");
    }
    if (rule.carrier.empty() || !rule.carrier.subset_of(ground_.full())) {
      throw ValidationError("rule '" + rule.id + "' needs a nonempty carrier within X");
    }
    const auto values = rule.capacity.values();
    for (std::uint32_t k = 0; k < values.size(); ++k) {
      if (!approx_eq(values[k], values[k & rule.carrier.bits()])) {
        throw ValidationError("capacity of rule '" + rule.id + "' does not live on its carrier");
      }
    }
    if (!is_convex(rule.capacity)) throw ValidationError("capacity of rule '" + rule.id + "' is not convex");
  }
}

template <Scalar T>
std::optional<std::size_t> IdentificationProblem<T>::rule_index(std::string_view id) const {
  for (std::size_t d = 0; d < rules_.size(); ++d) {
    if (rules_[d].id == id) return d;
  }
  return std::nullopt;
}

template <Scalar T>
Verdict<T> check_rationalizes(const IdentificationProblem<T>& problem, const Measure<T>& q) {
  return system_of(problem).verdict(q);
}

template <Scalar T>
std::vector<DominanceRow<T>> dominance_rows(const IdentificationProblem<T>& problem) {
  return system_of(problem).rows();
}

template <Scalar T>
std::vector<DominanceRow<T>> nonredundant_constraints(const IdentificationProblem<T>& problem) {
  std::vector<DominanceRow<T>> rows = dominance_rows(problem);
  std::vector<polytope::HalfSpace<T>> halfspaces;
  halfspaces.reserve(rows.size());
  for (const auto& r : rows) halfspaces.push_back({r.coefficients, r.bound});
  std::vector<DominanceRow<T>> out;
  for (std::size_t i : polytope::irredundant_rows<T>(problem.num_rules(), halfspaces)) {
    out.push_back(std::move(rows[i]));
  }
  return out;
}

template <Scalar T>
polytope::HalfSpaceOracle<T> dominance_oracle(const IdentificationProblem<T>& problem) {
  return system_of(problem).oracle();
}

template <Scalar T>
std::optional<Measure<T>> exists_rationalizing(const IdentificationProblem<T>& problem) {
  return system_of(problem).feasible_point();
}

template <Scalar T>
std::vector<RuleBounds<T>> probability_bounds(const IdentificationProblem<T>& problem) {
  const DominanceSystem<T> system = system_of(problem);
  const auto oracle = system.oracle();
  const std::size_t m = problem.num_rules();
  std::vector<RuleBounds<T>> out;
  for (std::size_t d = 0; d < m; ++d) {
    std::vector<T> objective(m, T(0));
    objective[d] = T(1);
    auto lo = polytope::optimize_over_slice<T>(m, objective, false, oracle);
    if (!lo) throw InfeasibleSet();
    auto hi = polytope::optimize_over_slice<T>(m, objective, true, oracle);
    if (!hi) throw InfeasibleSet();
    Measure<T> argmin = to_measure(std::move(*lo));
    Measure<T> argmax = to_measure(std::move(*hi));
    out.push_back({problem.rules()[d].id, argmin[d], argmax[d], std::move(argmin), std::move(argmax)});
  }
  return out;
}

template <Scalar T>
std::vector<Measure<T>> identified_vertices(const IdentificationProblem<T>& problem) {
  if (problem.num_rules() > kMaxVertexRules) {
    throw SizeLimit("vertex enumeration supports at most " + std::to_string(kMaxVertexRules) + " rules, got " +
                    std::to_string(problem.num_rules()));
  }
  auto points = polytope::slice_vertices<T>(problem.num_rules(), dominance_oracle(problem));
  if (points.empty()) throw InfeasibleSet();
  std::vector<Measure<T>> out;
  out.reserve(points.size());
  for (auto& p : points) out.push_back(to_measure(std::move(p)));
  return out;
}

template <Scalar T>
std::vector<Witness<T>> witness_decomposition(const IdentificationProblem<T>& problem, const Measure<T>& q) {
  if (!check_rationalizes(problem, q).rationalizes) {
    throw ValidationError("Q does not rationalize lambda, so no witness exists");
  }
  std::vector<std::size_t> active;
  std::vector<Capacity<T>> caps;
  std::vector<T> weights;
  for (std::size_t d = 0; d < problem.num_rules(); ++d) {
    if (is_zero(q[d])) continue;
    active.push_back(d);
    caps.push_back(problem.rules()[d].capacity);
    weights.push_back(q[d]);
  }
  auto parts = decompose_in_mixture_core(problem.lambda(), std::span<const Capacity<T>>(caps),
                                         Measure<T>(std::move(weights)));
  if (!parts) throw std::logic_error("mixture-core decomposition failed for a rationalizing Q");
  std::vector<Witness<T>> out;
  for (std::size_t i = 0; i < active.size(); ++i) {
    out.push_back({problem.rules()[active[i]].id, std::move((*parts)[i])});
  }
  return out;
}

template <Scalar T>
std::vector<Measure<T>> construct_menu_measures(std::span<const Measure<T>> rho_by_rule,
                                                std::span<const DecisionRule> rules,
                                                const MenuCollection& menus) {
  if (rho_by_rule.size() != rules.size()) throw ValidationError("one choice distribution per rule is required");
  std::vector<Measure<T>> out;
  for (std::size_t d = 0; d < rules.size(); ++d) {
    const DecisionRule& rule = rules[d];
    const Measure<T>& rho = rho_by_rule[d];
    if (rule.num_menus() != menus.size()) {
      throw ValidationError("rule '" + rule.id() + "' is not total on the menu collection");
    }
    std::vector<T> pi(menus.size(), T(0));
    for (std::size_t a = 0; a < rho.size(); ++a) {
      if (is_zero(rho[a])) continue;
      std::size_t menu = 0;
      while (menu < menus.size() && rule.choice(menu) != a) ++menu;
      if (menu == menus.size()) {
        throw ValidationError("rule '" + rule.id() + "' never chooses '" + menus.ground().label(a) +
                              "' but its distribution puts mass there");
      }
      pi[menu] += rho[a];
    }
    out.push_back(to_measure(std::move(pi)));
  }
  return out;
}

template <Scalar T>
std::optional<Measure<T>> check_menu_homogeneous(std::span<const DecisionRule> rules,
                                                 const MenuCollection& menus, const Measure<T>& lambda,
                                                 const Measure<T>& q) {
  if (rules.size() != q.size()) throw ValidationError("Q must have one weight per rule");
  if (lambda.size() != menus.ground().size()) throw ValidationError("lambda size does not match ground set");
  const std::size_t m = menus.size();
  lp::Program<T> program(m);
  program.add(std::vector<T>(m, T(1)), lp::Sense::Equal, T(1));
  for (std::size_t a = 0; a < lambda.size(); ++a) {
    std::vector<T> row(m, T(0));
    for (std::size_t d = 0; d < rules.size(); ++d) {
      if (rules[d].num_menus() != m) {
        throw ValidationError("rule '" + rules[d].id() + "' is not total on the menu collection");
      }
      for (std::size_t menu = 0; menu < m; ++menu) {
        if (rules[d].choice(menu) == a) row[menu] += q[d];
      }
    }
    program.add(std::move(row), lp::Sense::Equal, lambda[a]);
  }
  lp::Solution<T> sol = lp::solve(program);
  if (sol.status != lp::Status::Optimal) return std::nullopt;
  return to_measure(std::move(sol.x));
}

template <Scalar T>
std::vector<Measure<T>> simplex_grid(std::size_t size, std::size_t denominator) {
  if (size == 0 || denominator == 0) throw ValidationError("grid needs a positive size and denominator");
  std::vector<Measure<T>> out;
  std::vector<std::size_t> parts(size, 0);
  // Compositions of `denominator` into `size` parts, lexicographically.
  auto emit = [&](auto&& self, std::size_t index, std::size_t remaining) -> void {
    if (index + 1 == size) {
      parts[index] = remaining;
      std::vector<T> w(size);
      for (std::size_t i = 0; i < size; ++i) w[i] = T(parts[i]) / T(denominator);
      if constexpr (!ScalarTraits<T>::exact) {
        T total(0);
        for (std::size_t i = 0; i + 1 < size; ++i) total += w[i];
        w.back() = std::max(T(0), T(1 - total));
      }
      out.emplace_back(std::move(w));
      return;
    }
    for (std::size_t v = 0; v <= remaining; ++v) {
      parts[index] = v;
      self(self, index + 1, remaining - v);
    }
  };
  emit(emit, 0, denominator);
  return out;
}

template <Scalar T>
std::vector<HomogeneousPoint<T>> menu_homogeneous_sweep(std::span<const DecisionRule> rules,
                                                        const MenuCollection& menus,
                                                        const Measure<T>& lambda, std::size_t denominator) {
  std::vector<HomogeneousPoint<T>> out;
  for (auto& q : simplex_grid<T>(rules.size(), denominator)) {
    if (auto pi = check_menu_homogeneous(rules, menus, lambda, q)) out.push_back({std::move(q), std::move(*pi)});
  }
  return out;
}

template <Scalar T>
Verdict<T> necessary_check(const VertexSetProblem<T>& problem, const Measure<T>& q) {
  return system_of(problem).verdict(q);
}

template <Scalar T>
std::optional<Measure<T>> necessary_exists(const VertexSetProblem<T>& problem) {
  return system_of(problem).feasible_point();
}

#define CAPID_INSTANTIATE(T)                                                                              \
  template class IdentificationProblem<T>;                                                                \
  template Verdict<T> check_rationalizes(const IdentificationProblem<T>&, const Measure<T>&);             \
  template std::vector<DominanceRow<T>> dominance_rows(const IdentificationProblem<T>&);                  \
  template std::vector<DominanceRow<T>> nonredundant_constraints(const IdentificationProblem<T>&);        \
  template polytope::HalfSpaceOracle<T> dominance_oracle(const IdentificationProblem<T>&);                \
  template std::optional<Measure<T>> exists_rationalizing(const IdentificationProblem<T>&);               \
  template std::vector<RuleBounds<T>> probability_bounds(const IdentificationProblem<T>&);                \
  template std::vector<Measure<T>> identified_vertices(const IdentificationProblem<T>&);                  \
  template std::vector<Witness<T>> witness_decomposition(const IdentificationProblem<T>&, const Measure<T>&); \
  template std::vector<Measure<T>> construct_menu_measures(std::span<const Measure<T>>,                   \
                                                           std::span<const DecisionRule>, const MenuCollection&); \
  template std::optional<Measure<T>> check_menu_homogeneous(std::span<const DecisionRule>,                \
                                                            const MenuCollection&, const Measure<T>&,     \
                                                            const Measure<T>&);                           \
  template std::vector<HomogeneousPoint<T>> menu_homogeneous_sweep(                                       \
      std::span<const DecisionRule>, const MenuCollection&, const Measure<T>&, std::size_t);              \
  template std::vector<Measure<T>> simplex_grid<T>(std::size_t, std::size_t);                             \
  template Verdict<T> necessary_check(const VertexSetProblem<T>&, const Measure<T>&);                     \
  template std::optional<Measure<T>> necessary_exists(const VertexSetProblem<T>&);

CAPID_INSTANTIATE(Rational)
CAPID_INSTANTIATE(double)

#undef CAPID_INSTANTIATE

}  // namespace capid
