// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "capid/scalar.hpp"
#include "capid/subset.hpp"

namespace capid {

/// A probability vector over an indexed finite set (alternatives, rules,
/// menus, or points of an odds grid).
template <Scalar T>
class Measure {
 public:
  Measure() = default;
  /// Throws ValidationError unless weights are nonnegative and sum to 1
  /// (exactly, or within 1e-9 in float mode).
  explicit Measure(std::vector<T> weights);

  static Measure point_mass(std::size_t size, std::size_t at);
  static Measure uniform(std::size_t size);
  static Measure uniform_on(std::size_t size, SubsetMask support);

  std::size_t size() const { return weights_.size(); }
  const T& operator[](std::size_t i) const { return weights_[i]; }
  std::span<const T> weights() const { return weights_; }

  /// p(K) = Σ_{i∈K} p(i).
  T mass(SubsetMask subset) const;
  /// Elements with weight above tolerance.
  SubsetMask support() const;
  bool supported_on(SubsetMask carrier) const;

  friend bool operator==(const Measure&, const Measure&) = default;

 private:
  std::vector<T> weights_;
};

/// Componentwise comparison honouring the float tolerance.
template <Scalar T>
bool approx_equal(const Measure<T>& a, const Measure<T>& b);

/// Σ_i coefficients[i]·measures[i].
template <Scalar T>
Measure<T> combine(std::span<const Measure<T>> measures, std::span<const T> coefficients);

}  // namespace capid
