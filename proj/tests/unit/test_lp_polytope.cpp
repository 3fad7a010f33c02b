// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "capid/lp.hpp"
#include "capid/polytope.hpp"
#include "test_support.hpp"

namespace capid {
namespace {

using testing::r;
using lp::Sense;
using lp::Status;
using Vec = std::vector<Rational>;
using Row = polytope::HalfSpace<Rational>;

TEST(Simplex, TwoVariableMaximum) {
  lp::Program<Rational> p(2);
  p.add({r("1"), r("2")}, Sense::LessEqual, r("4"));
  p.add({r("3"), r("1")}, Sense::LessEqual, r("6"));
  p.maximize({r("1"), r("1")});
  const auto s = lp::solve(p);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_EQ(s.objective, r("14/5"));
  EXPECT_EQ(s.x, (Vec{r("8/5"), r("6/5")}));
}

TEST(Simplex, InfeasibleAndUnbounded) {
  lp::Program<Rational> infeasible(2);
  infeasible.add({r("1"), r("1")}, Sense::LessEqual, r("1"));
  infeasible.add({r("1"), r("1")}, Sense::GreaterEqual, r("2"));
  EXPECT_EQ(lp::solve(infeasible).status, Status::Infeasible);

  lp::Program<Rational> unbounded(2);
  unbounded.add({r("1"), r("-1")}, Sense::LessEqual, r("1"));
  unbounded.maximize({r("1"), r("0")});
  EXPECT_EQ(lp::solve(unbounded).status, Status::Unbounded);
}

TEST(Simplex, EqualityAndNegativeRightHandSides) {
  lp::Program<Rational> p(2);
  p.add({r("1"), r("1")}, Sense::Equal, r("3"));
  p.add({r("1"), r("0")}, Sense::GreaterEqual, r("1"));
  p.minimize({r("2"), r("1")});
  const auto s = lp::solve(p);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_EQ(s.objective, r("4"));

  lp::Program<Rational> q(2);
  q.add({r("1"), r("-1")}, Sense::LessEqual, r("-1"));
  q.minimize({r("0"), r("1")});
  const auto t = lp::solve(q);
  ASSERT_EQ(t.status, Status::Optimal);
  EXPECT_EQ(t.objective, r("1"));
}

TEST(Simplex, CyclingExampleTerminates) {
  // Classic degenerate program on which Dantzig pricing without a fallback cycles.
  lp::Program<Rational> p(4);
  p.add({r("1/4"), r("-8"), r("-1"), r("9")}, Sense::LessEqual, r("0"));
  p.add({r("1/2"), r("-12"), r("-1/2"), r("3")}, Sense::LessEqual, r("0"));
  p.add({r("0"), r("0"), r("1"), r("0")}, Sense::LessEqual, r("1"));
  p.minimize({r("-3/4"), r("20"), r("-1/2"), r("6")});
  const auto s = lp::solve(p);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_EQ(s.objective, r("-5/4"));
}

TEST(Simplex, RejectsMismatchedRows) {
  lp::Program<Rational> p(2);
  EXPECT_THROW(p.add({r("1")}, Sense::LessEqual, r("1")), std::invalid_argument);
}

TEST(Simplex, FloatModeMatches) {
  lp::Program<double> p(2);
  p.add({1, 2}, Sense::LessEqual, 4);
  p.add({3, 1}, Sense::LessEqual, 6);
  p.maximize({1, 1});
  const auto s = lp::solve(p);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_NEAR(s.objective, 2.8, 1e-12);
}

TEST(RowGeneration, AddsRowsUntilNoneViolated) {
  lp::Program<Rational> p(2);
  p.maximize({r("1"), r("1")});
  p.add({r("1"), r("1")}, Sense::LessEqual, r("10"));
  int calls = 0;
  const lp::Separator<Rational> sep = [&](std::span<const Rational> x) {
    ++calls;
    std::vector<lp::Constraint<Rational>> out;
    if (x[0] > 1) out.push_back({{r("1"), r("0")}, Sense::LessEqual, r("1")});
    if (x[1] > 2) out.push_back({{r("0"), r("1")}, Sense::LessEqual, r("2")});
    return out;
  };
  const auto s = lp::solve_with_cuts(p, sep);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_EQ(s.objective, r("3"));
  EXPECT_GE(calls, 2);
}

// Brute-force vertex oracle: solve every choice of m−1 tight rows plus Σx = 1.
std::vector<Vec> brute_vertices(std::size_t m, const std::vector<Row>& rows) {
  std::vector<Row> all = rows;
  for (std::size_t i = 0; i < m; ++i) {
    Vec e(m, Rational(0));
    e[i] = -1;
    all.push_back({e, Rational(0)});
  }
  std::set<Vec> found;
  std::vector<bool> chosen(all.size(), false);
  std::fill(chosen.end() - static_cast<long>(m - 1), chosen.end(), true);
  do {
    std::vector<Vec> a;
    Vec b;
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (!chosen[i]) continue;
      a.push_back(all[i].normal);
      b.push_back(all[i].bound);
    }
    a.push_back(Vec(m, Rational(1)));
    b.push_back(Rational(1));
    // Gauss-Jordan.
    bool singular = false;
    for (std::size_t c = 0; c < m && !singular; ++c) {
      std::size_t piv = c;
      while (piv < m && a[piv][c] == 0) ++piv;
      if (piv == m) {
        singular = true;
        break;
      }
      std::swap(a[piv], a[c]);
      std::swap(b[piv], b[c]);
      for (std::size_t rr = 0; rr < m; ++rr) {
        if (rr == c || a[rr][c] == 0) continue;
        const Rational f = a[rr][c] / a[c][c];
        for (std::size_t k = 0; k < m; ++k) a[rr][k] -= f * a[c][k];
        b[rr] -= f * b[c];
      }
    }
    if (singular) continue;
    Vec x(m);
    for (std::size_t i = 0; i < m; ++i) x[i] = b[i] / a[i][i];
    bool ok = true;
    for (const Row& row : all) {
      Rational lhs = 0;
      for (std::size_t i = 0; i < m; ++i) lhs += row.normal[i] * x[i];
      ok = ok && lhs <= row.bound;
    }
    if (ok) found.insert(x);
  } while (std::next_permutation(chosen.begin(), chosen.end()));
  return {found.begin(), found.end()};
}

TEST(SliceVertices, SimplexAndSimpleCut) {
  const std::vector<Row> none;
  EXPECT_EQ(polytope::slice_vertices<Rational>(3, std::span<const Row>(none)),
            (std::vector<Vec>{{r("0"), r("0"), r("1")}, {r("0"), r("1"), r("0")}, {r("1"), r("0"), r("0")}}));
  const std::vector<Row> half{{{r("1"), r("0")}, r("1/2")}};
  EXPECT_EQ(polytope::slice_vertices<Rational>(2, std::span<const Row>(half)),
            (std::vector<Vec>{{r("0"), r("1")}, {r("1/2"), r("1/2")}}));
  const std::vector<Row> empty{{{r("1"), r("1")}, r("-1")}};
  EXPECT_TRUE(polytope::slice_vertices<Rational>(2, std::span<const Row>(empty)).empty());
}

TEST(SliceVertices, MatchesBruteForceOnRandomSystems) {
  testing::Rng rng(301);
  int nonempty = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t m = testing::pick(rng, 2, 4);
    std::vector<Row> rows;
    const std::size_t k = testing::pick(rng, 1, 5);
    for (std::size_t j = 0; j < k; ++j) {
      Vec normal(m);
      for (auto& x : normal) x = Rational(static_cast<long>(rng() % 5) - 1);
      rows.push_back({normal, Rational(static_cast<long>(rng() % 8), 8)});
    }
    const auto got = polytope::slice_vertices<Rational>(m, std::span<const Row>(rows));
    EXPECT_EQ(got, brute_vertices(m, rows)) << "trial " << trial;
    nonempty += !got.empty();
    // The oracle form visits the same slice.
    EXPECT_EQ(polytope::slice_vertices<Rational>(m, polytope::list_oracle(rows)), got);
  }
  EXPECT_GT(nonempty, 20);
}

TEST(SliceVertices, OptimizeOverSlice) {
  const std::vector<Row> rows{{{r("1"), r("0"), r("0")}, r("1/3")}, {{r("0"), r("1"), r("0")}, r("1/2")}};
  const Vec c{r("1"), r("1"), r("0")};
  const auto best = polytope::optimize_over_slice<Rational>(3, c, true, polytope::list_oracle(rows));
  ASSERT_TRUE(best);
  EXPECT_EQ((*best)[0] + (*best)[1], r("5/6"));
  const auto worst = polytope::optimize_over_slice<Rational>(3, c, false, polytope::list_oracle(rows));
  ASSERT_TRUE(worst);
  EXPECT_EQ((*worst)[0] + (*worst)[1], 0);
  const std::vector<Row> infeasible{{{r("1"), r("1"), r("1")}, r("1/2")}};
  EXPECT_FALSE(polytope::optimize_over_slice<Rational>(3, c, true, polytope::list_oracle(infeasible)));
}

TEST(Irredundant, DropsImpliedRows) {
  const std::vector<Row> rows{
      {{r("0"), r("0")}, r("0")},       // trivial
      {{r("1"), r("0")}, r("1/2")},     // kept
      {{r("1"), r("0")}, r("3/4")},     // implied by the previous row
      {{r("1"), r("1")}, r("2")},       // implied by the simplex
      {{r("0"), r("1")}, r("2/3")},     // kept
  };
  EXPECT_EQ(polytope::irredundant_rows<Rational>(2, rows), (std::vector<std::size_t>{1, 4}));
}

TEST(Irredundant, KeptRowsCutTheSameSlice) {
  testing::Rng rng(302);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t m = testing::pick(rng, 2, 4);
    std::vector<Row> rows;
    for (std::size_t j = 0; j < 6; ++j) {
      Vec normal(m);
      for (auto& x : normal) x = Rational(static_cast<long>(rng() % 3));
      rows.push_back({normal, Rational(static_cast<long>(rng() % 8) + 1, 8)});
    }
    std::vector<Row> kept;
    for (std::size_t i : polytope::irredundant_rows<Rational>(m, rows)) kept.push_back(rows[i]);
    EXPECT_EQ(polytope::slice_vertices<Rational>(m, std::span<const Row>(kept)),
              polytope::slice_vertices<Rational>(m, std::span<const Row>(rows)));
  }
}

TEST(ConvexHull, Membership) {
  const std::vector<Vec> pts{{r("1"), r("0")}, {r("0"), r("1")}};
  const Vec mid{r("1/3"), r("2/3")};
  const Vec off{r("1"), r("1")};
  EXPECT_TRUE(polytope::in_convex_hull<Rational>(mid, pts));
  EXPECT_FALSE(polytope::in_convex_hull<Rational>(off, pts));
}

}  // namespace
}  // namespace capid
