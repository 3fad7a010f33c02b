// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "capid/error.hpp"
#include "capid/identification.hpp"
#include "capid/info_spec.hpp"
#include "test_support.hpp"

namespace capid {
namespace {

using testing::r;
using testing::rm;
using Spec = InfoSpec<Rational>;

const GroundSet kAb({"a", "b"});
const GroundSet kAbc({"a", "b", "c"});

std::vector<Measure<Rational>> carrier_grid(std::size_t n, SubsetMask carrier, std::size_t den) {
  const auto elems = carrier.elements();
  std::vector<Measure<Rational>> out;
  for (const auto& g : simplex_grid<Rational>(elems.size(), den)) {
    std::vector<Rational> w(n, Rational(0));
    for (std::size_t i = 0; i < elems.size(); ++i) w[elems[i]] = g[i];
    out.emplace_back(std::move(w));
  }
  return out;
}

TEST(BuildCapacity, IgnoranceExample) {
  const auto nu = build_capacity(Spec::ignorance(kAbc, SubsetMask(0b011)));
  EXPECT_EQ(nu(SubsetMask(0b001)), 0);
  EXPECT_EQ(nu(SubsetMask(0b011)), 1);
  EXPECT_EQ(nu(SubsetMask(0b101)), 0);
  EXPECT_EQ(nu.carrier(), SubsetMask(0b011));
}

TEST(BuildCapacity, ContaminationExample) {
  const auto nu = build_capacity(Spec::contamination(kAb, kAb.full(), Measure<Rational>::uniform(2), r("1/2")));
  EXPECT_EQ(nu(SubsetMask(0b01)), r("1/4"));
  EXPECT_EQ(nu(SubsetMask(0b11)), 1);
}

TEST(BuildCapacity, VariationExample) {
  const auto nu = build_capacity(Spec::variation(kAbc, kAbc.full(), rm({"0.8", "0.1", "0.1"}), r("0.15")));
  EXPECT_EQ(nu(SubsetMask(0b001)), r("0.65"));
  EXPECT_EQ(nu(SubsetMask(0b010)), 0);
  EXPECT_EQ(nu(SubsetMask(0b011)), r("0.75"));
  EXPECT_EQ(nu(SubsetMask(0b111)), 1);

  const auto fnu = build_capacity(InfoSpec<double>::variation(kAbc, kAbc.full(), testing::fm({0.8, 0.1, 0.1}), 0.15));
  EXPECT_NEAR(fnu(SubsetMask(0b001)), 0.65, 1e-12);
}

TEST(BuildCapacity, IntervalMatchesFormula) {
  const auto spec = Spec::interval(kAbc, SubsetMask(0b011), {r("1/10"), r("1/10"), r("0")},
                                   {r("3/4"), r("3/4"), r("0")});
  const auto nu = build_capacity(spec);
  // β = 1/2, so ν({a}) = max{1/10, 3/4 − 1/2}.
  EXPECT_EQ(nu(SubsetMask(0b001)), r("1/4"));
  EXPECT_EQ(nu(SubsetMask(0b101)), r("1/4"));
  EXPECT_EQ(nu(SubsetMask(0b011)), 1);
  EXPECT_TRUE(is_convex(nu));
}

TEST(BuildCapacity, ExplicitAndPoint) {
  const Capacity<Rational> card(kAbc, {r("0"), r("0"), r("0"), r("1/2"), r("0"), r("1/2"), r("1/2"), r("1")});
  EXPECT_EQ(build_capacity(Spec::explicit_capacity(kAbc.full(), card)), card);
  const Capacity<Rational> bad(kAb, {r("0"), r("3/5"), r("3/5"), r("1")});
  EXPECT_THROW(Spec::explicit_capacity(kAb.full(), bad), ValidationError);
  EXPECT_THROW(Spec::explicit_capacity(SubsetMask(0b01), Capacity<Rational>::ignorance(kAb, kAb.full())),
               ValidationError);

  const auto p = rm({"1/4", "3/4", "0"});
  EXPECT_EQ(build_capacity(Spec::point(kAbc, SubsetMask(0b011), p)), Capacity<Rational>::from_measure(kAbc, p));
  EXPECT_TRUE(spec_contains(Spec::point(kAbc, SubsetMask(0b011), p), p));
  EXPECT_FALSE(spec_contains(Spec::point(kAbc, SubsetMask(0b011), p), rm({"1/2", "1/2", "0"})));
}

TEST(InfoSpec, Tags) {
  EXPECT_EQ(Spec::ignorance(kAb, kAb.full()).tag(), "ignorance");
  EXPECT_EQ(Spec::contamination(kAb, kAb.full(), rm({"1", "0"}), r("1/2")).tag(), "contamination");
  EXPECT_EQ(Spec::variation(kAb, kAb.full(), rm({"1", "0"}), r("1/2")).tag(), "variation");
  EXPECT_EQ(Spec::point(kAb, kAb.full(), rm({"1", "0"})).tag(), "point");
}

TEST(InfoSpec, FactoriesValidate) {
  EXPECT_THROW(Spec::ignorance(kAb, SubsetMask()), ValidationError);
  EXPECT_THROW(Spec::ignorance(kAb, SubsetMask(0b100)), ValidationError);
  EXPECT_THROW(Spec::contamination(kAbc, SubsetMask(0b011), rm({"0", "0", "1"}), r("1/2")), ValidationError);
  EXPECT_THROW(Spec::contamination(kAb, kAb.full(), rm({"1", "0"}), r("3/2")), ValidationError);
  EXPECT_THROW(Spec::contamination(kAb, kAb.full(), rm({"1", "0"}), r("-1/2")), ValidationError);
  EXPECT_THROW(Spec::variation(kAb, kAb.full(), rm({"1", "0"}), r("0")), ValidationError);
  EXPECT_THROW(Spec::variation(kAbc, SubsetMask(0b001), rm({"0", "1", "0"}), r("1/2")), ValidationError);
  // lower(C) must lie strictly below 1 and upper(C) strictly above.
  EXPECT_THROW(Spec::interval(kAb, kAb.full(), {r("1/2"), r("1/2")}, {r("1"), r("1")}), ValidationError);
  EXPECT_THROW(Spec::interval(kAb, kAb.full(), {r("0"), r("0")}, {r("1/2"), r("1/2")}), ValidationError);
  EXPECT_THROW(Spec::interval(kAb, kAb.full(), {r("0"), r("0")}, {r("1"), r("1")}), ValidationError);
  EXPECT_THROW(Spec::interval(kAb, kAb.full(), {r("1/2"), r("0")}, {r("1/4"), r("1")}), ValidationError);
  EXPECT_THROW(Spec::interval(kAbc, SubsetMask(0b011), {r("1/4"), r("0"), r("1/4")}, {r("1"), r("1"), r("1")}),
               ValidationError);
  EXPECT_THROW(Spec::point(kAbc, SubsetMask(0b011), rm({"0", "0", "1"})), ValidationError);
}

TEST(SpecContains, Examples) {
  const Spec ign = Spec::ignorance(kAbc, SubsetMask(0b011));
  EXPECT_TRUE(spec_contains(ign, rm({"1/2", "1/2", "0"})));
  EXPECT_FALSE(spec_contains(ign, rm({"1/2", "0", "1/2"})));

  const Spec cont = Spec::contamination(kAb, kAb.full(), Measure<Rational>::uniform(2), r("1/2"));
  EXPECT_FALSE(spec_contains(cont, rm({"0.2", "0.8"})));
  EXPECT_TRUE(spec_contains(cont, rm({"1/4", "3/4"})));

  const Spec interval = Spec::interval(kAb, kAb.full(), {r("0.1"), r("0.1")}, {r("0.75"), r("0.75")});
  EXPECT_TRUE(spec_contains(interval, rm({"0.3", "0.7"})));
  EXPECT_FALSE(spec_contains(interval, rm({"0.2", "0.8"})));
  EXPECT_FALSE(spec_contains(interval, rm({"0.05", "0.95"})));
}

TEST(SpecContains, VariationBallIsClosed) {
  const Spec ball = Spec::variation(kAbc, kAbc.full(), rm({"0.8", "0.1", "0.1"}), r("0.15"));
  EXPECT_TRUE(spec_contains(ball, rm({"0.65", "0.25", "0.1"})));
  EXPECT_FALSE(spec_contains(ball, rm({"0.64", "0.26", "0.1"})));
  EXPECT_TRUE(core_contains(build_capacity(ball), rm({"0.65", "0.25", "0.1"})));
}

TEST(InfoSpecProperty, ContaminationExtremes) {
  testing::Rng rng(201);
  for (int trial = 0; trial < 20; ++trial) {
    const GroundSet g = testing::letters(testing::pick(rng, 1, 5));
    const SubsetMask c = testing::random_subset(rng, g.full());
    const auto focal = testing::random_measure(rng, g.size(), c);
    EXPECT_EQ(build_capacity(Spec::contamination(g, c, focal, r("0"))), Capacity<Rational>::from_measure(g, focal));
    EXPECT_EQ(build_capacity(Spec::contamination(g, c, focal, r("1"))), Capacity<Rational>::ignorance(g, c));
  }
}

TEST(InfoSpecProperty, RandomSpecsAreConvexAndBeliefWhereExpected) {
  testing::Rng rng(202);
  for (testing::Family f : testing::kFamilies) {
    for (int trial = 0; trial < 40; ++trial) {
      const GroundSet g = testing::letters(testing::pick(rng, 1, 6));
      const Spec spec = testing::random_spec(rng, g, testing::random_subset(rng, g.full()), f);
      const auto nu = build_capacity(spec);
      EXPECT_TRUE(is_convex(nu)) << testing::family_name(f);
      EXPECT_EQ(nu.carrier(), spec.carrier());
      if (f == testing::Family::Ignorance || f == testing::Family::Contamination) {
        EXPECT_TRUE(is_belief_function(nu)) << testing::family_name(f);
      }
    }
  }
}

TEST(InfoSpecProperty, SpecContainsMatchesCoreOnGrid) {
  testing::Rng rng(203);
  for (testing::Family f : testing::kFamilies) {
    for (int trial = 0; trial < 12; ++trial) {
      const GroundSet g = testing::letters(testing::pick(rng, 1, 5));
      SubsetMask c = testing::random_subset(rng, g.full());
      while (c.size() > 4) c = c.without(c.elements().back());
      const Spec spec = testing::random_spec(rng, g, c, f);
      const auto nu = build_capacity(spec);
      for (const auto& rho : carrier_grid(g.size(), c, 20)) {
        ASSERT_EQ(spec_contains(spec, rho), core_contains(nu, rho)) << testing::family_name(f);
      }
      // Off-carrier measures are never admissible.
      if (c != g.full()) {
        const auto outside = Measure<Rational>::point_mass(g.size(), (g.full() - c).elements().front());
        EXPECT_FALSE(spec_contains(spec, outside));
        EXPECT_FALSE(core_contains(nu, outside));
      }
    }
  }
}

TEST(InfoSpecProperty, FloatModeAgreesOnGrid) {
  testing::Rng rng(204);
  for (testing::Family f : testing::kFamilies) {
    for (int trial = 0; trial < 10; ++trial) {
      const GroundSet g = testing::letters(testing::pick(rng, 2, 4));
      const Spec spec = testing::random_spec(rng, g, g.full(), f);
      const auto fspec = testing::to_float(spec);
      const auto nu = build_capacity(spec);
      const auto fnu = build_capacity(fspec);
      for (std::uint32_t k = 0; k < nu.values().size(); ++k) {
        EXPECT_NEAR(fnu.values()[k], to_double(nu.values()[k]), 1e-12);
      }
      for (const auto& rho : carrier_grid(g.size(), g.full(), 20)) {
        EXPECT_EQ(spec_contains(fspec, testing::to_float(rho)), spec_contains(spec, rho));
      }
    }
  }
}

}  // namespace
}  // namespace capid
