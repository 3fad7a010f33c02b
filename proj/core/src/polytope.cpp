// SPDX-License-Identifier: Apache-2.0
#include "capid/polytope.hpp"

#include <algorithm>
#include <numeric>

#include <boost/dynamic_bitset.hpp>

#include "capid/lp.hpp"

namespace capid::polytope {

namespace {

template <Scalar T>
T dot(std::span<const T> a, std::span<const T> b) {
  T s(0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
  }
  return s;
}

template <Scalar T>
T excess(const HalfSpace<T>& h, std::span<const T> x) {
  return dot(std::span<const T>(h.normal), x) - h.bound;
}

template <Scalar T>
struct Vertex {
  std::vector<T> x;
  boost::dynamic_bitset<> tight;  // indices of active constraints
};

// Incremental double description restricted to the probability simplex.
// Constraint i < m is x_i ≥ 0; constraint m + r is the r-th added halfspace.
template <Scalar T>
class DoubleDescription {
 public:
  explicit DoubleDescription(std::size_t m) : m_(m), num_constraints_(m) {
    for (std::size_t j = 0; j < m; ++j) {
      Vertex<T> v;
      v.x.assign(m, T(0));
      v.x[j] = T(1);
      v.tight.resize(m, true);
      v.tight.reset(j);
      vertices_.push_back(std::move(v));
    }
  }

  const std::vector<Vertex<T>>& vertices() const { return vertices_; }

  void cut(const HalfSpace<T>& h) {
    const std::size_t index = num_constraints_++;
    for (auto& v : vertices_) v.tight.resize(num_constraints_, false);

    std::vector<T> slack(vertices_.size());
    std::vector<std::size_t> violating, satisfying;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      slack[i] = excess(h, std::span<const T>(vertices_[i].x));
      if (definitely_gt(slack[i], T(0))) {
        violating.push_back(i);
      } else if (definitely_gt(T(0), slack[i])) {
        satisfying.push_back(i);
      } else {
        vertices_[i].tight.set(index);
      }
    }
    if (violating.empty()) return;

    std::vector<Vertex<T>> created;
    const std::size_t min_common = m_ >= 2 ? m_ - 2 : 0;
    for (std::size_t p : violating) {
      for (std::size_t q : satisfying) {
        boost::dynamic_bitset<> common = vertices_[p].tight & vertices_[q].tight;
        if (common.count() < min_common || !adjacent(p, q, common)) continue;
        // Point where the edge p–q crosses the hyperplane.
        const T t = slack[p] / (slack[p] - slack[q]);
        Vertex<T> v;
        v.x.resize(m_);
        for (std::size_t j = 0; j < m_; ++j) v.x[j] = vertices_[p].x[j] + t * (vertices_[q].x[j] - vertices_[p].x[j]);
        v.tight = std::move(common);
        v.tight.set(index);
        created.push_back(std::move(v));
      }
    }

    std::vector<Vertex<T>> next;
    next.reserve(vertices_.size() - violating.size() + created.size());
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      if (!definitely_gt(slack[i], T(0))) next.push_back(std::move(vertices_[i]));
    }
    for (auto& v : created) next.push_back(std::move(v));
    vertices_ = std::move(next);
  }

 private:
  // p and q span an edge iff no third vertex is tight on all their common constraints.
  bool adjacent(std::size_t p, std::size_t q, const boost::dynamic_bitset<>& common) const {
    for (std::size_t w = 0; w < vertices_.size(); ++w) {
      if (w == p || w == q) continue;
      if (common.is_subset_of(vertices_[w].tight)) return false;
    }
    return true;
  }

  std::size_t m_;
  std::size_t num_constraints_;
  std::vector<Vertex<T>> vertices_;
};

template <Scalar T>
lp::Separator<T> as_separator(const HalfSpaceOracle<T>& oracle) {
  return [&oracle](std::span<const T> x) {
    std::vector<lp::Constraint<T>> cuts;
    for (auto& h : oracle(x)) {
      cuts.push_back({std::move(h.normal), lp::Sense::LessEqual, std::move(h.bound)});
    }
    return cuts;
  };
}

template <Scalar T>
lp::Program<T> simplex_program(std::size_t m) {
  lp::Program<T> program(m);
  program.add(std::vector<T>(m, T(1)), lp::Sense::Equal, T(1));
  return program;
}

}  // namespace

template <Scalar T>
std::vector<std::vector<T>> slice_vertices(std::size_t m, const HalfSpaceOracle<T>& oracle) {
  DoubleDescription<T> dd(m);
  while (!dd.vertices().empty()) {
    std::optional<HalfSpace<T>> worst;
    T worst_excess(0);
    for (const auto& v : dd.vertices()) {
      auto rows = oracle(std::span<const T>(v.x));
      for (auto& h : rows) {
        T e = excess(h, std::span<const T>(v.x));
        if (!worst || e > worst_excess) {
          worst_excess = e;
          worst = std::move(h);
        }
        break;  // oracle lists the most violated row first
      }
    }
    if (!worst) break;
    dd.cut(*worst);
  }
  std::vector<std::vector<T>> out;
  out.reserve(dd.vertices().size());
  for (const auto& v : dd.vertices()) out.push_back(v.x);
  std::sort(out.begin(), out.end());
  return out;
}

template <Scalar T>
std::vector<std::vector<T>> slice_vertices(std::size_t m, std::span<const HalfSpace<T>> rows) {
  return slice_vertices<T>(m, list_oracle<T>(std::vector<HalfSpace<T>>(rows.begin(), rows.end())));
}

template <Scalar T>
std::optional<std::vector<T>> optimize_over_slice(std::size_t m, std::span<const T> objective,
                                                  bool maximize, const HalfSpaceOracle<T>& oracle) {
  lp::Program<T> program = simplex_program<T>(m);
  std::vector<T> c(objective.begin(), objective.end());
  if (maximize) {
    program.maximize(std::move(c));
  } else {
    program.minimize(std::move(c));
  }
  lp::Solution<T> sol = lp::solve_with_cuts(std::move(program), as_separator(oracle));
  if (sol.status != lp::Status::Optimal) return std::nullopt;
  return std::move(sol.x);
}

template <Scalar T>
HalfSpaceOracle<T> list_oracle(std::vector<HalfSpace<T>> rows) {
  return [rows = std::move(rows)](std::span<const T> x) {
    std::vector<std::pair<T, std::size_t>> hits;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      T e = excess(rows[r], x);
      if (definitely_gt(e, T(0))) hits.emplace_back(std::move(e), r);
    }
    std::stable_sort(hits.begin(), hits.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<HalfSpace<T>> out;
    out.reserve(hits.size());
    for (const auto& [e, r] : hits) out.push_back(rows[r]);
    return out;
  };
}

template <Scalar T>
std::vector<std::size_t> irredundant_rows(std::size_t m, std::span<const HalfSpace<T>> rows) {
  std::vector<bool> kept(rows.size(), true);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const bool zero_normal =
        std::all_of(rows[r].normal.begin(), rows[r].normal.end(), [](const T& v) { return is_zero(v); });
    if (zero_normal && approx_ge(rows[r].bound, T(0))) kept[r] = false;
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!kept[r]) continue;
    std::vector<HalfSpace<T>> others;
    for (std::size_t s = 0; s < rows.size(); ++s) {
      if (s != r && kept[s]) others.push_back(rows[s]);
    }
    auto best = optimize_over_slice<T>(m, std::span<const T>(rows[r].normal), true,
                                       list_oracle<T>(std::move(others)));
    if (!best) continue;  // empty slice: nothing meaningful to drop
    if (approx_le(dot(std::span<const T>(rows[r].normal), std::span<const T>(*best)), rows[r].bound)) {
      kept[r] = false;
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (kept[r]) out.push_back(r);
  }
  return out;
}

template <Scalar T>
bool in_convex_hull(std::span<const T> x, std::span<const std::vector<T>> points) {
  if (points.empty()) return false;
  const std::size_t k = points.size();
  lp::Program<T> program(k);
  program.add(std::vector<T>(k, T(1)), lp::Sense::Equal, T(1));
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::vector<T> row(k);
    for (std::size_t j = 0; j < k; ++j) row[j] = points[j][i];
    program.add(std::move(row), lp::Sense::Equal, x[i]);
  }
  return lp::solve(program).status == lp::Status::Optimal;
}

#define CAPID_INSTANTIATE(T)                                                                       \
  template std::vector<std::vector<T>> slice_vertices(std::size_t, const HalfSpaceOracle<T>&);     \
  template std::vector<std::vector<T>> slice_vertices(std::size_t, std::span<const HalfSpace<T>>); \
  template std::optional<std::vector<T>> optimize_over_slice(std::size_t, std::span<const T>,      \
                                                             bool, const HalfSpaceOracle<T>&);     \
  template HalfSpaceOracle<T> list_oracle(std::vector<HalfSpace<T>>);                              \
  template std::vector<std::size_t> irredundant_rows(std::size_t, std::span<const HalfSpace<T>>);  \
  template bool in_convex_hull(std::span<const T>, std::span<const std::vector<T>>);

CAPID_INSTANTIATE(Rational)
CAPID_INSTANTIATE(double)

#undef CAPID_INSTANTIATE

}  // namespace capid::polytope
