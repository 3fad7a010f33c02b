// SPDX-License-Identifier: Apache-2.0
#include "capid/capacity.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "capid/error.hpp"
#include "capid/lp.hpp"

namespace capid {

namespace {

template <Scalar T>
std::vector<T> subset_masses(const Measure<T>& p) {
  const std::size_t n = p.size();
  std::vector<T> out(std::size_t{1} << n, T(0));
  for (std::uint32_t k = 1; k < out.size(); ++k) {
    const std::uint32_t low = k & (~k + 1);
    out[k] = out[k ^ low] + p[static_cast<std::size_t>(std::countr_zero(low))];
  }
  return out;
}

}  // namespace

template <Scalar T>
Capacity<T>::Capacity(GroundSet ground, std::vector<T> values, std::optional<SubsetMask> carrier)
    : ground_(std::move(ground)), values_(std::move(values)), carrier_(carrier) {
  const std::size_t n = ground_.size();
  if (values_.size() != ground_.num_subsets()) {
    throw ValidationError("capacity needs " + std::to_string(ground_.num_subsets()) +
                          " values, got " + std::to_string(values_.size()));
  }
  if (!is_zero(values_.front())) throw ValidationError("capacity must vanish on the empty set");
  if (!approx_eq(values_.back(), T(1))) throw ValidationError("capacity must equal 1 on X");
  for (std::uint32_t k = 0; k < values_.size(); ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if ((k >> i) & 1u) continue;
      if (definitely_gt(values_[k], values_[k | (1u << i)])) {
        throw ValidationError("capacity is not monotone at " + ground_.describe(SubsetMask(k)) +
                              " ⊂ " + ground_.describe(SubsetMask(k | (1u << i))));
      }
    }
  }
  if (carrier_) {
    const SubsetMask c = *carrier_;
    if (c.empty()) throw ValidationError("carrier must be nonempty");
    if (!c.subset_of(ground_.full())) throw ValidationError("carrier is not within the ground set");
    for (std::uint32_t k = 0; k < values_.size(); ++k) {
      if (!approx_eq(values_[k], values_[k & c.bits()])) {
        throw ValidationError("capacity does not live on carrier " + ground_.describe(c) +
                              " (differs at " + ground_.describe(SubsetMask(k)) + ")");
      }
    }
  }
}

template <Scalar T>
Capacity<T> Capacity<T>::from_measure(GroundSet ground, const Measure<T>& p) {
  if (p.size() != ground.size()) throw ValidationError("measure size does not match ground set");
  std::vector<T> v = subset_masses(p);
  v.back() = T(1);
  const SubsetMask support = p.support();
  return Capacity(std::move(ground), std::move(v), support);
}

template <Scalar T>
Capacity<T> Capacity<T>::ignorance(GroundSet ground, SubsetMask carrier) {
  if (carrier.empty() || !carrier.subset_of(ground.full())) {
    throw ValidationError("ignorance carrier must be a nonempty subset of the ground set");
  }
  std::vector<T> v(ground.num_subsets(), T(0));
  for (std::uint32_t k = 0; k < v.size(); ++k) {
    if (carrier.subset_of(SubsetMask(k))) v[k] = T(1);
  }
  return Capacity(std::move(ground), std::move(v), carrier);
}

template <Scalar T>
Capacity<T> Capacity<T>::with_carrier(SubsetMask c) const {
  return Capacity(ground_, values_, c);
}

template <Scalar T>
SubsetMask Capacity<T>::minimal_carrier() const {
  // i is inessential iff ν(K ∪ {i}) = ν(K) for all K.
  SubsetMask c = ground_.full();
  for (std::size_t i = 0; i < ground_.size(); ++i) {
    bool inessential = true;
    for (std::uint32_t k = 0; k < values_.size() && inessential; ++k) {
      if ((k >> i) & 1u) continue;
      inessential = approx_eq(values_[k], values_[k | (1u << i)]);
    }
    if (inessential) c = c.without(i);
  }
  return c;
}

// Above this size the pairwise definition (4^n pairs) gives way to the
// equivalent local test on second differences (2^n·n² terms).
constexpr std::size_t kPairwiseConvexityMaxN = 12;

template <Scalar T>
bool is_convex(const Capacity<T>& nu) {
  const std::uint32_t count = static_cast<std::uint32_t>(nu.values().size());
  if (nu.ground_size() > kPairwiseConvexityMaxN) {
    const std::size_t n = nu.ground_size();
    for (std::uint32_t k = 0; k < count; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        if ((k >> i) & 1u) continue;
        for (std::size_t j = i + 1; j < n; ++j) {
          if ((k >> j) & 1u) continue;
          const T& both = nu.values()[k | (1u << i) | (1u << j)];
          if (!approx_ge(T(both + nu.values()[k]),
                         T(nu.values()[k | (1u << i)] + nu.values()[k | (1u << j)]))) {
            return false;
          }
        }
      }
    }
    return true;
  }
  for (std::uint32_t a = 0; a < count; ++a) {
    for (std::uint32_t b = a + 1; b < count; ++b) {
      // Nested pairs satisfy the inequality with equality.
      if ((a & b) == a || (a & b) == b) continue;
      const SubsetMask ka(a), kb(b);
      if (!approx_ge(T(nu(ka | kb) + nu(ka & kb)), T(nu(ka) + nu(kb)))) return false;
    }
  }
  return true;
}

template <Scalar T>
std::vector<T> mobius(const Capacity<T>& nu) {
  std::vector<T> m(nu.values().begin(), nu.values().end());
  const std::size_t n = nu.ground_size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t bit = 1u << i;
    for (std::uint32_t k = 0; k < m.size(); ++k) {
      if (k & bit) m[k] -= m[k ^ bit];
    }
  }
  return m;
}

template <Scalar T>
std::vector<T> zeta(std::span<const T> masses) {
  std::vector<T> v(masses.begin(), masses.end());
  if (!std::has_single_bit(v.size())) throw ValidationError("zeta transform needs 2^n masses");
  const std::size_t n = static_cast<std::size_t>(std::countr_zero(v.size()));
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t bit = 1u << i;
    for (std::uint32_t k = 0; k < v.size(); ++k) {
      if (k & bit) v[k] += v[k ^ bit];
    }
  }
  return v;
}

template <Scalar T>
bool is_belief_function(const Capacity<T>& nu) {
  for (const T& mass : mobius(nu)) {
    if (definitely_gt(T(0), mass)) return false;
  }
  return true;
}

template <Scalar T>
bool core_contains(const Capacity<T>& nu, const Measure<T>& p) {
  if (p.size() != nu.ground_size()) throw ValidationError("measure size does not match ground set");
  const std::vector<T> pk = subset_masses(p);
  for (std::size_t k = 0; k < pk.size(); ++k) {
    if (!approx_ge(pk[k], nu.values()[k])) return false;
  }
  return true;
}

namespace {

template <Scalar T>
class MarginalVectors {
 public:
  explicit MarginalVectors(const Capacity<T>& nu)
      : nu_(nu), n_(nu.ground_size()), current_(n_, T(0)) {}

  std::vector<Measure<T>> run() {
    visit(SubsetMask());
    return std::move(out_);
  }

 private:
  // Depth-first over orderings in lexicographic order; `chosen` is the set
  // of elements already placed.
  void visit(SubsetMask chosen) {
    if (static_cast<std::size_t>(chosen.size()) == n_) {
      record();
      return;
    }
    for (std::size_t i = 0; i < n_; ++i) {
      if (chosen.contains(i)) continue;
      const SubsetMask next = chosen.with(i);
      current_[i] = nu_(next) - nu_(chosen);
      visit(next);
    }
  }

  void record() {
    if constexpr (ScalarTraits<T>::exact) {
      if (!seen_.insert(current_).second) return;
    } else {
      for (const auto& v : out_) {
        bool same = true;
        for (std::size_t i = 0; i < n_ && same; ++i) same = approx_eq(v[i], current_[i]);
        if (same) return;
      }
    }
    out_.emplace_back(current_);
  }

  const Capacity<T>& nu_;
  std::size_t n_;
  std::vector<T> current_;
  std::set<std::vector<T>> seen_;
  std::vector<Measure<T>> out_;
};

}  // namespace

template <Scalar T>
std::vector<Measure<T>> core_vertices(const Capacity<T>& nu) {
  if (!is_convex(nu)) {
    throw ValidationError("core vertices are marginal vectors only for convex capacities");
  }
  return MarginalVectors<T>(nu).run();
}

template <Scalar T>
Capacity<T> lower_probability(std::span<const Measure<T>> vertices, const GroundSet& ground) {
  if (vertices.empty()) throw ValidationError("lower probability of an empty set of measures");
  std::vector<T> values;
  for (const auto& p : vertices) {
    if (p.size() != ground.size()) throw ValidationError("measure size does not match ground set");
    std::vector<T> pk = subset_masses(p);
    if (values.empty()) {
      values = std::move(pk);
    } else {
      for (std::size_t k = 0; k < values.size(); ++k) {
        if (pk[k] < values[k]) values[k] = pk[k];
      }
    }
  }
  values.back() = T(1);
  return Capacity<T>(ground, std::move(values));
}

template <Scalar T>
Capacity<T> mixture(std::span<const Capacity<T>> capacities, const Measure<T>& weights) {
  if (capacities.empty() || capacities.size() != weights.size()) {
    throw ValidationError("mixture needs one weight per capacity");
  }
  const GroundSet& ground = capacities.front().ground();
  std::vector<T> values(ground.num_subsets(), T(0));
  bool all_carried = true;
  SubsetMask carrier;
  for (std::size_t i = 0; i < capacities.size(); ++i) {
    const auto& nu = capacities[i];
    if (!(nu.ground() == ground)) throw ValidationError("mixture of capacities on different ground sets");
    if (weights[i] == 0) continue;
    if (nu.carrier()) {
      carrier = carrier | *nu.carrier();
    } else {
      all_carried = false;
    }
    for (std::size_t k = 0; k < values.size(); ++k) values[k] += weights[i] * nu.values()[k];
  }
  values.back() = T(1);
  return Capacity<T>(ground, std::move(values),
                     all_carried ? std::optional<SubsetMask>(carrier) : std::nullopt);
}

template <Scalar T>
std::optional<std::vector<Measure<T>>> decompose_in_mixture_core(
    const Measure<T>& p, std::span<const Capacity<T>> capacities, const Measure<T>& weights) {
  if (capacities.empty() || capacities.size() != weights.size()) {
    throw ValidationError("decomposition needs one weight per capacity");
  }
  const std::size_t n = p.size();
  const std::size_t k = capacities.size();
  for (const auto& nu : capacities) {
    if (nu.ground_size() != n) throw ValidationError("measure size does not match ground set");
  }
  const std::uint32_t full = SubsetMask::full(n).bits();
  lp::Program<T> program(n * k);
  auto var = [n](std::size_t i, std::size_t x) { return i * n + x; };

  for (std::size_t i = 0; i < k; ++i) {
    std::vector<T> row(n * k, T(0));
    for (std::size_t x = 0; x < n; ++x) row[var(i, x)] = T(1);
    program.add(std::move(row), lp::Sense::Equal, T(1));
  }
  for (std::size_t x = 0; x < n; ++x) {
    std::vector<T> row(n * k, T(0));
    for (std::size_t i = 0; i < k; ++i) row[var(i, x)] = weights[i];
    program.add(std::move(row), lp::Sense::Equal, p[x]);
  }
  // p_i(K) ≥ ν_i(K) is written on the complement, p_i(X∖K) ≤ 1 − ν_i(K), so
  // every such row starts with a feasible slack. There are 2^n of them per
  // capacity, so they are generated on demand.
  const std::size_t per_round = std::max<std::size_t>(8, n);
  auto separate = [&](std::span<const T> x) {
    std::vector<lp::Constraint<T>> cuts;
    for (std::size_t i = 0; i < k; ++i) {
      const auto& nu = capacities[i];
      std::vector<T> pk(std::size_t{1} << n, T(0));
      for (std::uint32_t mask = 1; mask <= full; ++mask) {
        const std::uint32_t low = mask & (~mask + 1);
        pk[mask] = pk[mask ^ low] + x[var(i, static_cast<std::size_t>(std::countr_zero(low)))];
      }
      std::vector<std::pair<T, std::uint32_t>> hits;
      for (std::uint32_t mask = 1; mask < full; ++mask) {
        const T& lower = nu.values()[mask];
        if (is_zero(lower)) continue;
        if (definitely_gt(lower, pk[mask])) hits.emplace_back(T(lower - pk[mask]), mask);
      }
      if (hits.size() > per_round) {
        std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(per_round), hits.end(),
                          [](const auto& a, const auto& b) { return a.first > b.first; });
        hits.resize(per_round);
      }
      for (const auto& [gap, mask] : hits) {
        std::vector<T> row(n * k, T(0));
        for (std::size_t e = 0; e < n; ++e) {
          if (!((mask >> e) & 1u)) row[var(i, e)] = T(1);
        }
        cuts.push_back({std::move(row), lp::Sense::LessEqual, T(1 - nu.values()[mask])});
      }
    }
    return cuts;
  };

  const lp::Solution<T> sol = lp::solve_with_cuts(std::move(program), lp::Separator<T>(separate));
  if (sol.status != lp::Status::Optimal) return std::nullopt;
  std::vector<Measure<T>> parts;
  parts.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<T> w(sol.x.begin() + static_cast<std::ptrdiff_t>(var(i, 0)),
                     sol.x.begin() + static_cast<std::ptrdiff_t>(var(i, 0) + n));
    parts.emplace_back(std::move(w));
  }
  return parts;
}

template <Scalar T>
Capacity<T> cylindrical_extension(const Capacity<T>& nu_on_c, const GroundSet& x) {
  const GroundSet& c = nu_on_c.ground();
  // position_in_x[j] = index in X of the j-th element of C
  std::vector<std::size_t> position_in_x(c.size());
  SubsetMask carrier;
  for (std::size_t j = 0; j < c.size(); ++j) {
    auto idx = x.index_of(c.label(j));
    if (!idx) throw ValidationError("carrier element '" + c.label(j) + "' is not in X");
    position_in_x[j] = *idx;
    carrier = carrier.with(*idx);
  }
  std::vector<T> values(x.num_subsets(), T(0));
  for (std::uint32_t k = 0; k < values.size(); ++k) {
    std::uint32_t inner = 0;
    for (std::size_t j = 0; j < c.size(); ++j) {
      if ((k >> position_in_x[j]) & 1u) inner |= 1u << j;
    }
    values[k] = nu_on_c(SubsetMask(inner));
  }
  return Capacity<T>(x, std::move(values), carrier);
}

template <Scalar T>
Capacity<T> pushforward(const Capacity<T>& psi, const DecisionRule& rule, const MenuCollection& menus) {
  if (psi.ground_size() != menus.size()) {
    throw ValidationError("pushforward: capacity is not on the menu collection");
  }
  const SubsetMask range = choice_range(rule, menus);
  const GroundSet& x = menus.ground();
  std::vector<T> values(x.num_subsets(), T(0));
  for (std::uint32_t k = 0; k < values.size(); ++k) {
    values[k] = psi(rule.preimage(SubsetMask(k)));
  }
  return Capacity<T>(x, std::move(values), range);
}

#define CAPID_INSTANTIATE(T)                                                                       \
  template class Capacity<T>;                                                                      \
  template bool is_convex(const Capacity<T>&);                                                     \
  template std::vector<T> mobius(const Capacity<T>&);                                              \
  template std::vector<T> zeta(std::span<const T>);                                                \
  template bool is_belief_function(const Capacity<T>&);                                            \
  template bool core_contains(const Capacity<T>&, const Measure<T>&);                              \
  template std::vector<Measure<T>> core_vertices(const Capacity<T>&);                              \
  template Capacity<T> lower_probability(std::span<const Measure<T>>, const GroundSet&);           \
  template Capacity<T> mixture(std::span<const Capacity<T>>, const Measure<T>&);                   \
  template std::optional<std::vector<Measure<T>>> decompose_in_mixture_core(                       \
      const Measure<T>&, std::span<const Capacity<T>>, const Measure<T>&);                         \
  template Capacity<T> cylindrical_extension(const Capacity<T>&, const GroundSet&);                \
  template Capacity<T> pushforward(const Capacity<T>&, const DecisionRule&, const MenuCollection&);

CAPID_INSTANTIATE(Rational)
CAPID_INSTANTIATE(double)

#undef CAPID_INSTANTIATE

}  // namespace capid
