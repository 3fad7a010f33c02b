// SPDX-License-Identifier: Apache-2.0
#include "capid/simulate.hpp"

#include <random>

#include "capid/capacity.hpp"
#include "capid/error.hpp"

namespace capid {

namespace {

constexpr std::size_t kMixtureUnits = 20;

void require_permutation(const std::vector<std::size_t>& order, std::size_t n, const std::string& id) {
  if (order.size() != n) throw ValidationError("order of '" + id + "' must list every alternative once");
  std::vector<bool> seen(n, false);
  for (std::size_t i : order) {
    if (i >= n || seen[i]) throw ValidationError("order of '" + id + "' is not a permutation");
    seen[i] = true;
  }
}

}  // namespace

std::vector<DecisionRule> rules_from_preferences(std::span<const PreferenceOrder> orders,
                                                 const MenuCollection& menus) {
  const std::size_t n = menus.ground().size();
  std::vector<DecisionRule> out;
  for (const auto& order : orders) {
    require_permutation(order.ranking, n, order.id);
    std::vector<std::size_t> choices;
    for (SubsetMask menu : menus.menus()) {
      for (std::size_t a : order.ranking) {
        if (menu.contains(a)) {
          choices.push_back(a);
          break;
        }
      }
    }
    out.emplace_back(order.id, menus, std::move(choices));
  }
  return out;
}

template <Scalar T>
std::vector<DecisionRule> rules_from_satisficing(std::span<const SatisficingSpec<T>> specs,
                                                 const MenuCollection& menus) {
  const std::size_t n = menus.ground().size();
  std::vector<DecisionRule> out;
  for (const auto& spec : specs) {
    require_permutation(spec.search_order, n, spec.id);
    if (spec.value.size() != n) throw ValidationError("satisficing rule '" + spec.id + "' needs one value per alternative");
    std::vector<std::size_t> choices;
    for (SubsetMask menu : menus.menus()) {
      std::size_t pick = n;
      std::size_t last = n;
      for (std::size_t a : spec.search_order) {
        if (!menu.contains(a)) continue;
        last = a;
        if (pick == n && approx_ge(spec.value[a], spec.threshold)) pick = a;
      }
      choices.push_back(pick == n ? last : pick);
    }
    out.emplace_back(spec.id, menus, std::move(choices));
  }
  return out;
}

template <Scalar T>
SyntheticPopulation<T> synth_population(std::span<const InfoSpec<T>> specs, const Measure<T>& q,
                                        std::uint64_t seed) {
  if (specs.empty() || specs.size() != q.size()) throw ValidationError("Q must have one weight per spec");
  const std::size_t n = specs.front().ground().size();
  std::mt19937_64 rng(seed);
  SyntheticPopulation<T> out;
  std::vector<T> lambda(n, T(0));
  for (std::size_t d = 0; d < specs.size(); ++d) {
    if (specs[d].ground().size() != n) throw ValidationError("specs are on different ground sets");
    const std::vector<Measure<T>> vertices = core_vertices(build_capacity(specs[d]));
    // Modulo reduction keeps the draw identical across standard libraries.
    std::vector<std::size_t> units(vertices.size(), 0);
    for (std::size_t u = 0; u < kMixtureUnits; ++u) ++units[rng() % vertices.size()];
    std::vector<T> rho(n, T(0));
    for (std::size_t v = 0; v < vertices.size(); ++v) {
      if (units[v] == 0) continue;
      const T w = T(units[v]) / T(kMixtureUnits);
      for (std::size_t i = 0; i < n; ++i) rho[i] += w * vertices[v][i];
    }
    for (std::size_t i = 0; i < n; ++i) lambda[i] += q[d] * rho[i];
    out.rho.emplace_back(std::move(rho));
  }
  out.lambda = Measure<T>(std::move(lambda));
  return out;
}

template std::vector<DecisionRule> rules_from_satisficing(std::span<const SatisficingSpec<Rational>>,
                                                          const MenuCollection&);
template std::vector<DecisionRule> rules_from_satisficing(std::span<const SatisficingSpec<double>>,
                                                          const MenuCollection&);
template SyntheticPopulation<Rational> synth_population(std::span<const InfoSpec<Rational>>,
                                                        const Measure<Rational>&, std::uint64_t);
template SyntheticPopulation<double> synth_population(std::span<const InfoSpec<double>>, const Measure<double>&,
                                                      std::uint64_t);

}  // namespace capid
