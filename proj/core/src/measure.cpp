// SPDX-License-Identifier: Apache-2.0
#include "capid/measure.hpp"

#include <string>

#include "capid/error.hpp"

namespace capid {

template <Scalar T>
Measure<T>::Measure(std::vector<T> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw ValidationError("measure must have at least one weight");
  T total(0);
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (definitely_gt(T(0), weights_[i])) {
      throw ValidationError("measure weight " + std::to_string(i) + " is negative (" +
                            format_scalar(weights_[i]) + ")");
    }
    total += weights_[i];
  }
  if (!approx_eq(total, T(1))) {
    throw ValidationError("measure weights sum to " + format_scalar(total) + ", not 1");
  }
}

template <Scalar T>
Measure<T> Measure<T>::point_mass(std::size_t size, std::size_t at) {
  std::vector<T> w(size, T(0));
  w.at(at) = T(1);
  return Measure(std::move(w));
}

template <Scalar T>
Measure<T> Measure<T>::uniform(std::size_t size) {
  return uniform_on(size, SubsetMask::full(size));
}

template <Scalar T>
Measure<T> Measure<T>::uniform_on(std::size_t size, SubsetMask support) {
  if (support.empty() || !support.subset_of(SubsetMask::full(size))) {
    throw ValidationError("uniform support must be a nonempty subset");
  }
  std::vector<T> w(size, T(0));
  const T share = T(1) / T(support.size());
  for (std::size_t i : support.elements()) w[i] = share;
  return Measure(std::move(w));
}

template <Scalar T>
T Measure<T>::mass(SubsetMask subset) const {
  T total(0);
  for (std::size_t i : subset.elements()) {
    if (i < weights_.size()) total += weights_[i];
  }
  return total;
}

template <Scalar T>
SubsetMask Measure<T>::support() const {
  SubsetMask s;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!is_zero(weights_[i])) s = s.with(i);
  }
  return s;
}

template <Scalar T>
bool Measure<T>::supported_on(SubsetMask carrier) const {
  return support().subset_of(carrier);
}

template <Scalar T>
bool approx_equal(const Measure<T>& a, const Measure<T>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!approx_eq(a[i], b[i])) return false;
  }
  return true;
}

template <Scalar T>
Measure<T> combine(std::span<const Measure<T>> measures, std::span<const T> coefficients) {
  if (measures.empty() || measures.size() != coefficients.size()) {
    throw ValidationError("combine needs one coefficient per measure");
  }
  std::vector<T> w(measures.front().size(), T(0));
  for (std::size_t k = 0; k < measures.size(); ++k) {
    if (measures[k].size() != w.size()) throw ValidationError("measures differ in size");
    if (coefficients[k] == 0) continue;
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += coefficients[k] * measures[k][i];
  }
  return Measure<T>(std::move(w));
}

template class Measure<Rational>;
template class Measure<double>;
template bool approx_equal(const Measure<Rational>&, const Measure<Rational>&);
template bool approx_equal(const Measure<double>&, const Measure<double>&);
template Measure<Rational> combine(std::span<const Measure<Rational>>, std::span<const Rational>);
template Measure<double> combine(std::span<const Measure<double>>, std::span<const double>);

}  // namespace capid
