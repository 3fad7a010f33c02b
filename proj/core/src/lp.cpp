// SPDX-License-Identifier: Apache-2.0
#include "capid/lp.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <utility>

namespace capid::lp {

template <Scalar T>
void Program<T>::add(std::vector<T> coefficients, Sense sense, T rhs) {
  if (coefficients.size() != num_variables_) {
    throw std::invalid_argument("constraint width does not match the variable count");
  }
  constraints_.push_back({std::move(coefficients), sense, std::move(rhs)});
}

template <Scalar T>
void Program<T>::minimize(std::vector<T> objective) {
  if (objective.size() != num_variables_) {
    throw std::invalid_argument("objective width does not match the variable count");
  }
  objective_ = std::move(objective);
  maximize_ = false;
}

template <Scalar T>
void Program<T>::maximize(std::vector<T> objective) {
  minimize(std::move(objective));
  maximize_ = true;
}

namespace {

constexpr std::size_t kNoColumn = std::numeric_limits<std::size_t>::max();
constexpr int kDegenerateRunBeforeBland = 25;
constexpr std::size_t kMaxCutRounds = 100000;

template <Scalar T>
bool negative(const T& v) {
  return definitely_gt(T(0), v);
}

template <Scalar T>
bool positive(const T& v) {
  return definitely_gt(v, T(0));
}

template <Scalar T>
void scrub(T& v) {
  if constexpr (!ScalarTraits<T>::exact) {
    if (v < 1e-13 && v > -1e-13) v = 0.0;
  }
}

// Rows hold [coefficients..., rhs]. The cost row holds reduced costs and
// -objective in its last slot.
template <Scalar T>
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : cols_(cols), rows_(rows, std::vector<T>(cols + 1, T(0))), cost_(cols + 1, T(0)),
        basis_(rows, kNoColumn), enterable_(cols, true) {}

  std::size_t num_rows() const { return rows_.size(); }
  std::size_t num_cols() const { return cols_; }
  T& at(std::size_t r, std::size_t c) { return rows_[r][c]; }
  T& rhs(std::size_t r) { return rows_[r][cols_]; }
  std::vector<T>& cost() { return cost_; }
  std::size_t& basis(std::size_t r) { return basis_[r]; }
  std::size_t basis(std::size_t r) const { return basis_[r]; }
  void forbid(std::size_t c) { enterable_[c] = false; }
  std::size_t pivots() const { return pivots_; }

  void pivot(std::size_t r, std::size_t c) {
    ++pivots_;
    std::vector<T>& prow = rows_[r];
    const T inv = T(1) / prow[c];
    nonzero_.clear();
    for (std::size_t j = 0; j <= cols_; ++j) {
      if (prow[j] != 0) {
        prow[j] *= inv;
        scrub(prow[j]);
        if (prow[j] != 0) nonzero_.push_back(j);
      }
    }
    prow[c] = T(1);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i != r) eliminate(rows_[i], prow, c);
    }
    eliminate(cost_, prow, c);
    basis_[r] = c;
  }

  void drop_row(std::size_t r) {
    rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

  /// Minimises the current cost row. Returns false when unbounded.
  bool optimize() {
    int degenerate_run = 0;
    while (true) {
      const bool bland = degenerate_run >= kDegenerateRunBeforeBland;
      std::size_t enter = kNoColumn;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (!enterable_[j] || !negative(cost_[j])) continue;
        if (enter == kNoColumn) {
          enter = j;
          if (bland) break;
        } else if (cost_[j] < cost_[enter]) {
          enter = j;
        }
      }
      if (enter == kNoColumn) return true;

      std::size_t leave = kNoColumn;
      T best_ratio{};
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        const T& a = rows_[i][enter];
        if (!positive(a)) continue;
        T ratio = rows_[i][cols_] / a;
        if (leave == kNoColumn || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = std::move(ratio);
        }
      }
      if (leave == kNoColumn) return false;
      degenerate_run = is_zero(best_ratio) ? degenerate_run + 1 : 0;
      pivot(leave, enter);
    }
  }

 private:
  void eliminate(std::vector<T>& row, const std::vector<T>& prow, std::size_t c) {
    if (row[c] == 0) return;
    const T factor = row[c];
    for (std::size_t j : nonzero_) {
      row[j] -= factor * prow[j];
      scrub(row[j]);
    }
    row[c] = T(0);
  }

  std::size_t cols_;
  std::vector<std::vector<T>> rows_;
  std::vector<T> cost_;
  std::vector<std::size_t> basis_;
  std::vector<bool> enterable_;
  std::vector<std::size_t> nonzero_;
  std::size_t pivots_ = 0;
};

}  // namespace

template <Scalar T>
Solution<T> solve(const Program<T>& program) {
  const std::size_t n = program.num_variables();
  const auto& constraints = program.constraints();
  const std::size_t m = constraints.size();

  // Normalise to nonnegative right-hand sides.
  std::vector<Sense> senses(m);
  std::vector<bool> flipped(m, false);
  std::size_t num_slack = 0;
  std::size_t num_artificial = 0;
  for (std::size_t i = 0; i < m; ++i) {
    Sense s = constraints[i].sense;
    if (constraints[i].rhs < 0) {
      flipped[i] = true;
      if (s == Sense::LessEqual) {
        s = Sense::GreaterEqual;
      } else if (s == Sense::GreaterEqual) {
        s = Sense::LessEqual;
      }
    }
    senses[i] = s;
    if (s != Sense::Equal) ++num_slack;
    if (s != Sense::LessEqual) ++num_artificial;
  }

  const std::size_t first_artificial = n + num_slack;
  Tableau<T> tab(m, n + num_slack + num_artificial);
  std::size_t next_slack = n;
  std::size_t next_artificial = first_artificial;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = constraints[i];
    for (std::size_t j = 0; j < n; ++j) {
      tab.at(i, j) = flipped[i] ? T(-row.coefficients[j]) : row.coefficients[j];
    }
    tab.rhs(i) = flipped[i] ? T(-row.rhs) : row.rhs;
    switch (senses[i]) {
      case Sense::LessEqual:
        tab.at(i, next_slack) = T(1);
        tab.basis(i) = next_slack++;
        break;
      case Sense::GreaterEqual:
        tab.at(i, next_slack++) = T(-1);
        tab.at(i, next_artificial) = T(1);
        tab.basis(i) = next_artificial++;
        break;
      case Sense::Equal:
        tab.at(i, next_artificial) = T(1);
        tab.basis(i) = next_artificial++;
        break;
    }
  }

  Solution<T> out;
  if (num_artificial > 0) {
    auto& cost = tab.cost();
    for (std::size_t i = 0; i < m; ++i) {
      if (tab.basis(i) < first_artificial) continue;
      for (std::size_t j = 0; j < first_artificial; ++j) cost[j] -= tab.at(i, j);
      cost[tab.num_cols()] -= tab.rhs(i);
    }
    tab.optimize();
    if (definitely_gt(T(-tab.cost()[tab.num_cols()]), T(0))) {
      out.status = Status::Infeasible;
      out.pivots = tab.pivots();
      return out;
    }
    // Drive remaining artificials out of the basis; rows where that is
    // impossible are linearly dependent and can be dropped.
    for (std::size_t r = tab.num_rows(); r-- > 0;) {
      if (tab.basis(r) < first_artificial) continue;
      std::size_t replacement = kNoColumn;
      for (std::size_t j = 0; j < first_artificial; ++j) {
        if (!is_zero(tab.at(r, j))) {
          replacement = j;
          break;
        }
      }
      if (replacement == kNoColumn) {
        tab.drop_row(r);
      } else {
        tab.pivot(r, replacement);
      }
    }
    for (std::size_t j = first_artificial; j < tab.num_cols(); ++j) tab.forbid(j);
  }

  // Phase 2: reduced costs of the (minimisation) objective for the current basis.
  auto& cost = tab.cost();
  std::fill(cost.begin(), cost.end(), T(0));
  const auto& objective = program.objective();
  if (!objective.empty()) {
    for (std::size_t j = 0; j < n; ++j) {
      cost[j] = program.maximize() ? T(-objective[j]) : objective[j];
    }
    for (std::size_t r = 0; r < tab.num_rows(); ++r) {
      const std::size_t b = tab.basis(r);
      if (b >= n || cost[b] == 0) continue;
      const T cb = cost[b];
      for (std::size_t j = 0; j <= tab.num_cols(); ++j) {
        if (tab.at(r, j) != 0) cost[j] -= cb * tab.at(r, j);
      }
    }
  }
  const bool bounded = tab.optimize();
  out.pivots = tab.pivots();
  if (!bounded) {
    out.status = Status::Unbounded;
    return out;
  }

  out.status = Status::Optimal;
  out.x.assign(n, T(0));
  for (std::size_t r = 0; r < tab.num_rows(); ++r) {
    if (tab.basis(r) < n) out.x[tab.basis(r)] = tab.rhs(r);
  }
  out.objective = T(0);
  if (!objective.empty()) {
    for (std::size_t j = 0; j < n; ++j) out.objective += objective[j] * out.x[j];
  }
  return out;
}

template <Scalar T>
Solution<T> solve_with_cuts(Program<T> program, const Separator<T>& separate) {
  std::size_t pivots = 0;
  for (std::size_t round = 0;; ++round) {
    if (round == kMaxCutRounds) throw std::runtime_error("row generation did not converge");
    Solution<T> sol = solve(program);
    pivots += sol.pivots;
    if (sol.status != Status::Optimal) {
      sol.pivots = pivots;
      return sol;
    }
    std::vector<Constraint<T>> cuts = separate(std::span<const T>(sol.x));
    if (cuts.empty()) {
      sol.pivots = pivots;
      return sol;
    }
    for (auto& c : cuts) program.add(std::move(c.coefficients), c.sense, std::move(c.rhs));
  }
}

template class Program<Rational>;
template class Program<double>;
template Solution<Rational> solve(const Program<Rational>&);
template Solution<double> solve(const Program<double>&);
template Solution<Rational> solve_with_cuts(Program<Rational>, const Separator<Rational>&);
template Solution<double> solve_with_cuts(Program<double>, const Separator<double>&);

}  // namespace capid::lp
