// SPDX-License-Identifier: Apache-2.0
#include <algorithm>

#include <gtest/gtest.h>

#include "capid/capacity.hpp"
#include "capid/error.hpp"
#include "capid/info_spec.hpp"
#include "test_support.hpp"

namespace capid {
namespace {

using testing::r;
using testing::rm;
using Cap = Capacity<Rational>;

const GroundSet kAb({"a", "b"});
const GroundSet kAbc({"a", "b", "c"});

Cap by_cardinality(const GroundSet& g, std::vector<Rational> f) {
  std::vector<Rational> v(g.num_subsets());
  for (std::uint32_t k = 0; k < v.size(); ++k) v[k] = f[std::popcount(k)];
  return Cap(g, std::move(v));
}

Cap half_contamination() {
  return build_capacity(
      InfoSpec<Rational>::contamination(kAb, kAb.full(), Measure<Rational>::uniform(2), r("1/2")));
}

std::vector<Measure<Rational>> sorted(std::vector<Measure<Rational>> v) {
  std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) {
    return std::lexicographical_compare(x.weights().begin(), x.weights().end(), y.weights().begin(),
                                        y.weights().end());
  });
  return v;
}

// Local supermodularity ν(K∪{i,j}) + ν(K) ≥ ν(K∪{i}) + ν(K∪{j}).
bool locally_convex(const Cap& nu) {
  const std::size_t n = nu.ground_size();
  for (std::uint32_t k = 0; k < nu.values().size(); ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if ((k >> i & 1u) || (k >> j & 1u)) continue;
        const std::uint32_t ki = k | 1u << i, kj = k | 1u << j;
        if (nu.values()[ki | kj] + nu.values()[k] < nu.values()[ki] + nu.values()[kj]) return false;
      }
    }
  }
  return true;
}

Cap random_monotone(testing::Rng& rng, const GroundSet& g) {
  std::vector<Rational> v(g.num_subsets());
  for (auto& x : v) x = Rational(static_cast<long>(rng() % 11), 10);
  v.front() = 0;
  v.back() = 1;
  for (std::uint32_t k = 1; k < v.size(); ++k) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (k >> i & 1u) v[k] = std::max(v[k], v[k ^ (1u << i)]);
    }
  }
  v.back() = 1;
  return Cap(g, std::move(v));
}

TEST(Capacity, ConstructionValidates) {
  EXPECT_THROW(Cap(kAb, {r("0"), r("1")}), ValidationError);
  EXPECT_THROW(Cap(kAb, {r("1/2"), r("1/2"), r("1/2"), r("1")}), ValidationError);
  EXPECT_THROW(Cap(kAb, {r("0"), r("1/2"), r("1/2"), r("3/4")}), ValidationError);
  EXPECT_THROW(Cap(kAb, {r("0"), r("3/4"), r("1/2"), r("1/2")}), ValidationError);
  EXPECT_THROW(Cap(kAb, {r("0"), r("1/2"), r("0"), r("1")}, SubsetMask(0b01)), ValidationError);
  EXPECT_THROW(Cap(kAb, {r("0"), r("1"), r("0"), r("1")}, SubsetMask()), ValidationError);
  const Cap point(kAb, {r("0"), r("1"), r("0"), r("1")}, SubsetMask(0b01));
  EXPECT_EQ(point.minimal_carrier().bits(), 0b01u);
  EXPECT_THROW(point.with_carrier(SubsetMask(0b10)), ValidationError);
}

TEST(Capacity, IsConvexExamples) {
  EXPECT_TRUE(is_convex(Cap::from_measure(kAbc, rm({"1/6", "1/3", "1/2"}))));
  EXPECT_TRUE(is_convex(by_cardinality(kAbc, {r("0"), r("0"), r("1/2"), r("1")})));
  const Capacity<double> bad(kAb, {0.0, 0.7, 0.7, 1.0});
  EXPECT_FALSE(is_convex(bad));
}

TEST(Capacity, MobiusExamples) {
  const auto ign = mobius(Cap::ignorance(kAbc, SubsetMask(0b011)));
  for (std::uint32_t k = 0; k < 8; ++k) EXPECT_EQ(ign[k], k == 0b011 ? 1 : 0) << k;

  const auto add = mobius(Cap::from_measure(kAbc, rm({"1/6", "1/3", "1/2"})));
  EXPECT_EQ(add[0b001], r("1/6"));
  EXPECT_EQ(add[0b100], r("1/2"));
  EXPECT_EQ(add[0b011], 0);
  EXPECT_EQ(add[0b111], 0);

  const auto card = mobius(by_cardinality(kAbc, {r("0"), r("0"), r("1/2"), r("1")}));
  EXPECT_EQ(card[0b011], r("1/2"));
  EXPECT_EQ(card[0b110], r("1/2"));
  EXPECT_EQ(card[0b111], r("-1/2"));
  EXPECT_EQ(card[0b001], 0);
}

TEST(Capacity, BeliefFunctionExamples) {
  EXPECT_TRUE(is_belief_function(Cap::ignorance(kAbc, SubsetMask(0b110))));
  EXPECT_TRUE(is_belief_function(build_capacity(InfoSpec<Rational>::contamination(
      kAbc, SubsetMask(0b111), rm({"1/2", "1/4", "1/4"}), r("1/3")))));
  const Cap card = by_cardinality(kAbc, {r("0"), r("0"), r("1/2"), r("1")});
  EXPECT_FALSE(is_belief_function(card));
  EXPECT_TRUE(is_convex(card));
}

TEST(Capacity, CoreContainsExamples) {
  const auto p = rm({"1/4", "3/4"});
  const Cap nu = Cap::from_measure(kAb, p);
  EXPECT_TRUE(core_contains(nu, p));
  EXPECT_FALSE(core_contains(nu, rm({"1/2", "1/2"})));

  const Cap ign = Cap::ignorance(kAbc, SubsetMask(0b011));
  EXPECT_TRUE(core_contains(ign, rm({"1/3", "2/3", "0"})));
  EXPECT_FALSE(core_contains(ign, rm({"1/3", "1/3", "1/3"})));

  const Cap cont = half_contamination();
  EXPECT_EQ(cont(SubsetMask(0b01)), r("1/4"));
  EXPECT_FALSE(core_contains(cont, rm({"1/5", "4/5"})));
  EXPECT_TRUE(core_contains(cont, rm({"1/4", "3/4"})));
}

TEST(Capacity, CoreVerticesExamples) {
  EXPECT_EQ(sorted(core_vertices(Cap::ignorance(kAbc, SubsetMask(0b011)))),
            sorted({rm({"1", "0", "0"}), rm({"0", "1", "0"})}));
  const auto p = rm({"1/6", "1/3", "1/2"});
  EXPECT_EQ(core_vertices(Cap::from_measure(kAbc, p)), std::vector<Measure<Rational>>{p});
  EXPECT_EQ(sorted(core_vertices(half_contamination())), sorted({rm({"1/4", "3/4"}), rm({"3/4", "1/4"})}));
  EXPECT_THROW(core_vertices(Capacity<double>(kAb, {0.0, 0.7, 0.7, 1.0})), ValidationError);
}

TEST(Capacity, LowerProbabilityExamples) {
  const std::vector<Measure<Rational>> simplex_ab{rm({"1", "0", "0"}), rm({"0", "1", "0"})};
  EXPECT_EQ(lower_probability<Rational>(simplex_ab, kAbc), Cap::ignorance(kAbc, SubsetMask(0b011)));
  const std::vector<Measure<Rational>> one{rm({"1/6", "1/3", "1/2"})};
  EXPECT_EQ(lower_probability<Rational>(one, kAbc), Cap::from_measure(kAbc, one.front()));
  const std::vector<Measure<Rational>> two{rm({"1/4", "3/4"}), rm({"3/4", "1/4"})};
  const Cap lp = lower_probability<Rational>(two, kAb);
  EXPECT_EQ(lp(SubsetMask(0b01)), r("1/4"));
  EXPECT_EQ(lp(SubsetMask(0b10)), r("1/4"));
  EXPECT_THROW(lower_probability<Rational>({}, kAb), ValidationError);
}

TEST(Capacity, MixtureExamples) {
  const std::vector<Cap> caps{Cap::ignorance(kAb, kAb.full()), Cap::from_measure(kAb, rm({"1", "0"}))};
  EXPECT_EQ(mixture<Rational>(caps, rm({"1", "0"})), caps[0]);
  const Cap half = mixture<Rational>(caps, rm({"1/2", "1/2"}));
  EXPECT_EQ(half(SubsetMask(0b01)), r("1/2"));
  EXPECT_EQ(half(SubsetMask(0b10)), 0);

  const std::vector<Cap> measures{Cap::from_measure(kAb, rm({"1", "0"})), Cap::from_measure(kAb, rm({"1/2", "1/2"}))};
  EXPECT_EQ(mixture<Rational>(measures, rm({"1/3", "2/3"})), Cap::from_measure(kAb, rm({"2/3", "1/3"})));

  const std::vector<Cap> mismatched{caps[0], Cap::ignorance(kAbc, kAbc.full())};
  EXPECT_THROW(mixture<Rational>(mismatched, rm({"1/2", "1/2"})), ValidationError);
}

TEST(Capacity, DecomposeExamples) {
  const auto p = rm({"1/3", "2/3"});
  const std::vector<Cap> single{Cap::ignorance(kAb, kAb.full())};
  const auto one = decompose_in_mixture_core<Rational>(p, single, rm({"1"}));
  ASSERT_TRUE(one);
  EXPECT_EQ(one->front(), p);

  const auto delta_a = rm({"1", "0", "0"});
  const std::vector<Cap> point{Cap::from_measure(kAbc, delta_a), Cap::ignorance(kAbc, SubsetMask(0b001))};
  const auto two = decompose_in_mixture_core<Rational>(delta_a, point, rm({"1/2", "1/2"}));
  ASSERT_TRUE(two);
  EXPECT_EQ((*two)[0], delta_a);
  EXPECT_EQ((*two)[1], delta_a);

  const std::vector<Cap> pair{Cap::ignorance(kAbc, SubsetMask(0b011)), Cap::ignorance(kAbc, SubsetMask(0b101))};
  const auto ex = decompose_in_mixture_core<Rational>(Measure<Rational>::uniform(3), pair, rm({"2/3", "1/3"}));
  ASSERT_TRUE(ex);
  EXPECT_EQ((*ex)[0], rm({"1/2", "1/2", "0"}));
  EXPECT_EQ((*ex)[1], rm({"0", "0", "1"}));

  // Outside the mixture core.
  EXPECT_FALSE(decompose_in_mixture_core<Rational>(rm({"0", "0", "1"}), pair, rm({"2/3", "1/3"})));
}

TEST(Capacity, CylindricalExtensionExamples) {
  const Cap on_ab = Cap::ignorance(kAb, kAb.full());
  const Cap ext = cylindrical_extension(on_ab, kAbc);
  EXPECT_EQ(ext(kAbc.full()), 1);
  EXPECT_EQ(ext(SubsetMask(0b101)), 0);
  EXPECT_EQ(ext(SubsetMask(0b011)), 1);
  EXPECT_EQ(ext.carrier(), SubsetMask(0b011));

  const Cap delta(GroundSet({"a"}), {r("0"), r("1")});
  const Cap e2 = cylindrical_extension(delta, kAbc);
  for (std::uint32_t k = 0; k < 8; ++k) EXPECT_EQ(e2(SubsetMask(k)), (k & 1u) ? 1 : 0);

  const Cap nu = by_cardinality(kAbc, {r("0"), r("0"), r("1/2"), r("1")});
  EXPECT_EQ(cylindrical_extension(nu, kAbc), nu);
  EXPECT_THROW(cylindrical_extension(Cap::ignorance(GroundSet({"z"}), SubsetMask(1)), kAbc), ValidationError);
}

TEST(Capacity, PushforwardExamples) {
  const MenuCollection m(kAbc, {SubsetMask(0b011), SubsetMask(0b110), SubsetMask(0b101), SubsetMask(0b111)});
  const DecisionRule d1("1", m, {0, 1, 0, 0});
  const GroundSet mg = m.as_ground_set();

  const Cap at_bc = Cap::from_measure(mg, Measure<Rational>::point_mass(4, 1));
  EXPECT_EQ(pushforward(at_bc, d1, m), Cap::from_measure(kAbc, rm({"0", "1", "0"})));

  const Cap pushed = pushforward(Cap::ignorance(mg, mg.full()), d1, m);
  EXPECT_EQ(pushed, Cap::ignorance(kAbc, SubsetMask(0b011)));
  EXPECT_EQ(pushed.carrier(), SubsetMask(0b011));
}

TEST(CapacityProperty, MobiusRoundTrip) {
  testing::Rng rng(101);
  for (int trial = 0; trial < 40; ++trial) {
    const GroundSet g = testing::letters(testing::pick(rng, 1, 8));
    const Cap nu = random_monotone(rng, g);
    const auto m = mobius(nu);
    const auto back = zeta<Rational>(m);
    EXPECT_TRUE(std::equal(back.begin(), back.end(), nu.values().begin()));
    Rational total = 0;
    for (const auto& x : m) total += x;
    EXPECT_EQ(total, 1);
  }
}

TEST(CapacityProperty, BeliefFunctionsAreConvex) {
  testing::Rng rng(102);
  for (int trial = 0; trial < 60; ++trial) {
    const GroundSet g = testing::letters(testing::pick(rng, 1, 6));
    std::vector<Rational> masses(g.num_subsets(), Rational(0));
    for (int u = 0; u < 10; ++u) masses[testing::random_subset(rng, g.full()).bits()] += Rational(1, 10);
    const Cap nu(g, zeta<Rational>(masses));
    EXPECT_TRUE(is_belief_function(nu));
    EXPECT_TRUE(is_convex(nu));
  }
}

TEST(CapacityProperty, GreedyVerticesLieInCoreAndRecoverCapacity) {
  testing::Rng rng(103);
  for (int trial = 0; trial < 60; ++trial) {
    const GroundSet g = testing::letters(testing::pick(rng, 1, 6));
    const Cap nu = testing::random_convex_capacity(rng, g, testing::random_subset(rng, g.full()));
    ASSERT_TRUE(is_convex(nu));
    const auto vs = core_vertices(nu);
    for (const auto& p : vs) EXPECT_TRUE(core_contains(nu, p));
    EXPECT_EQ(lower_probability<Rational>(vs, g), nu);
    // Independent greedy pass gives the same vertex set.
    EXPECT_EQ(testing::greedy_vertices(nu).size(), vs.size());
  }
}

TEST(CapacityProperty, MixtureLinearity) {
  testing::Rng rng(104);
  for (int trial = 0; trial < 25; ++trial) {
    const GroundSet g = testing::letters(testing::pick(rng, 2, 5));
    const std::vector<Cap> caps{testing::random_convex_capacity(rng, g, g.full()),
                                testing::random_convex_capacity(rng, g, testing::random_subset(rng, g.full()))};
    for (const char* a : {"0", "1/4", "1/2", "1"}) {
      const Rational alpha = r(a);
      const Measure<Rational> w(std::vector<Rational>{alpha, 1 - alpha});
      const Cap mix = mixture<Rational>(caps, w);
      ASSERT_TRUE(is_convex(mix));
      for (const auto& v : core_vertices(mix)) {
        const auto parts = decompose_in_mixture_core<Rational>(v, caps, w);
        ASSERT_TRUE(parts) << "alpha " << a;
        for (std::size_t i = 0; i < 2; ++i) EXPECT_TRUE(core_contains(caps[i], (*parts)[i]));
        const std::vector<Rational> coef{alpha, 1 - alpha};
        EXPECT_EQ(combine<Rational>(*parts, coef), v);
      }
      for (const auto& p0 : core_vertices(caps[0])) {
        for (const auto& p1 : core_vertices(caps[1])) {
          const std::vector<Measure<Rational>> pair{p0, p1};
          const std::vector<Rational> coef{alpha, 1 - alpha};
          EXPECT_TRUE(core_contains(mix, combine<Rational>(pair, coef)));
        }
      }
    }
  }
}

TEST(CapacityProperty, PushforwardPreservesConvexityAndCore) {
  testing::Rng rng(105);
  const GroundSet x = testing::letters(4);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t k = testing::pick(rng, 1, 5);
    std::vector<SubsetMask> ms;
    std::vector<std::size_t> choice;
    for (std::size_t i = 0; i < k; ++i) {
      ms.push_back(testing::random_subset(rng, x.full()));
      const auto el = ms.back().elements();
      choice.push_back(el[rng() % el.size()]);
    }
    const MenuCollection m(x, ms);
    const DecisionRule d("d", m, choice);
    const GroundSet mg = m.as_ground_set();
    const Cap psi = testing::random_convex_capacity(rng, mg, mg.full());
    const Cap nu = pushforward(psi, d, m);
    EXPECT_TRUE(is_convex(nu));
    EXPECT_EQ(nu.carrier(), choice_range(d, m));
    // core(ν) is the image of core(ψ): the pushed vertices recover ν as a lower envelope.
    std::vector<Measure<Rational>> images;
    for (const auto& pi : core_vertices(psi)) images.push_back(induce_choice_distribution(pi, d, x.size()));
    EXPECT_EQ(lower_probability<Rational>(images, x), nu);
  }
}

TEST(CapacityProperty, PairwiseAndLocalConvexityAgree) {
  testing::Rng rng(106);
  int convex = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const GroundSet g = testing::letters(testing::pick(rng, 2, 6));
    const Cap nu = trial % 2 == 0 ? random_monotone(rng, g) : testing::random_convex_capacity(rng, g, g.full());
    EXPECT_EQ(is_convex(nu), locally_convex(nu));
    convex += is_convex(nu);
  }
  EXPECT_GT(convex, 100);
  EXPECT_LT(convex, 200);
}

TEST(CapacityProperty, LargeGroundSetUsesLocalTest) {
  testing::Rng rng(107);
  const GroundSet g = testing::letters(13);
  EXPECT_TRUE(is_convex(testing::random_convex_capacity(rng, g, g.full())));
  std::vector<Rational> v(g.num_subsets());
  for (std::uint32_t k = 0; k < v.size(); ++k) v[k] = (k & 0b11u) ? r("1/2") : r("0");
  v.back() = 1;
  EXPECT_FALSE(is_convex(Cap(g, std::move(v))));
}

TEST(CapacityProperty, FloatModeMatchesExact) {
  testing::Rng rng(108);
  for (int trial = 0; trial < 30; ++trial) {
    const GroundSet g = testing::letters(testing::pick(rng, 2, 5));
    const Cap nu = testing::random_convex_capacity(rng, g, g.full());
    const auto fnu = testing::to_float(nu);
    EXPECT_TRUE(is_convex(fnu));
    EXPECT_EQ(core_vertices(fnu).size(), core_vertices(nu).size());
    EXPECT_EQ(is_belief_function(fnu), is_belief_function(nu));
  }
}

}  // namespace
}  // namespace capid
