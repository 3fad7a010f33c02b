// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "capid/scalar.hpp"

namespace capid::lp {

enum class Sense { LessEqual, GreaterEqual, Equal };

enum class Status { Optimal, Infeasible, Unbounded };

template <Scalar T>
struct Constraint {
  std::vector<T> coefficients;
  Sense sense;
  T rhs;
};

/// min or max c·x subject to linear rows and x ≥ 0.
template <Scalar T>
class Program {
 public:
  explicit Program(std::size_t num_variables) : num_variables_(num_variables) {}

  std::size_t num_variables() const { return num_variables_; }
  const std::vector<Constraint<T>>& constraints() const { return constraints_; }
  const std::vector<T>& objective() const { return objective_; }
  bool maximize() const { return maximize_; }

  /// Throws std::invalid_argument if coefficients.size() != num_variables().
  void add(std::vector<T> coefficients, Sense sense, T rhs);
  /// Feasibility problems may leave the objective unset (all zeros).
  void minimize(std::vector<T> objective);
  void maximize(std::vector<T> objective);

 private:
  std::size_t num_variables_;
  std::vector<Constraint<T>> constraints_;
  std::vector<T> objective_;
  bool maximize_ = false;
};

template <Scalar T>
struct Solution {
  Status status = Status::Infeasible;
  std::vector<T> x;
  T objective{};
  std::size_t pivots = 0;
};

/**
 * Two-phase dense tableau simplex. Uses Dantzig pricing and falls back to
 * Bland's rule after a run of degenerate pivots, so it terminates in exact
 * mode. In float mode every sign test uses the 1e-9 tolerance.
 */
template <Scalar T>
Solution<T> solve(const Program<T>& program);

/// Returns rows violated by x (empty when x satisfies the full system).
template <Scalar T>
using Separator = std::function<std::vector<Constraint<T>>(std::span<const T> x)>;

/**
 * Row generation: solves the program, asks the separator for violated rows,
 * appends them and re-solves until none remain. Used where the full system
 * has one row per subset of X and only a few of them bind.
 */
template <Scalar T>
Solution<T> solve_with_cuts(Program<T> program, const Separator<T>& separate);

}  // namespace capid::lp
