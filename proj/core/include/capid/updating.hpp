// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "capid/capacity.hpp"
#include "capid/identification.hpp"
#include "capid/measure.hpp"

namespace capid {

/**
 * A finite grid of posterior log-odds values with the prior log-odds x⁰
 * among them. Point i of the shifted grid is points[i] − x⁰, so a measure on
 * the shifted grid and one on the grid share indices and the shifted point
 * 0 sits at prior_index().
 */
template <Scalar T>
class OddsGrid {
 public:
  /// Throws ValidationError on repeated points or a prior that is not a grid point.
  OddsGrid(std::vector<T> points, T prior);

  std::size_t size() const { return points_.size(); }
  const std::vector<T>& points() const { return points_; }
  const T& prior() const { return prior_; }
  std::size_t prior_index() const { return prior_index_; }
  /// Labels are the formatted point values.
  const GroundSet& ground() const { return ground_; }
  const GroundSet& shifted_ground() const { return shifted_ground_; }

 private:
  std::vector<T> points_;
  T prior_;
  std::size_t prior_index_ = 0;
  GroundSet ground_;
  GroundSet shifted_ground_;
};

/**
 * The set of experiments, core(ν) for a convex capacity ν on the shifted
 * grid. Every experiment must put probability below 1 on the zero shift;
 * that is checked on the core vertices, which also give the least admissible
 * bias parameter max_E −E(0)/(1 − E(0)).
 */
template <Scalar T>
class ExperimentModel {
 public:
  /// Throws ValidationError if ν is not on the shifted grid, not convex, or
  /// some core vertex has E(0) = 1.
  ExperimentModel(OddsGrid<T> grid, Capacity<T> nu);

  const OddsGrid<T>& grid() const { return grid_; }
  const Capacity<T>& nu() const { return nu_; }
  const std::vector<Measure<T>>& vertices() const { return vertices_; }
  const T& kappa_floor() const { return kappa_floor_; }

 private:
  OddsGrid<T> grid_;
  Capacity<T> nu_;
  std::vector<Measure<T>> vertices_;
  T kappa_floor_;
};

template <Scalar T>
struct KappaRange {
  T min;
  T max;
};

/// [κ̲, 1] for the model.
template <Scalar T>
KappaRange<T> full_kappa_range(const ExperimentModel<T>& model);

/// The requested range intersected with [κ̲, 1]. Throws ValidationError if
/// min > max or the intersection is empty.
template <Scalar T>
KappaRange<T> clamp_kappa_range(const ExperimentModel<T>& model, KappaRange<T> requested);

/// Posterior distribution over grid x under Bayes' rule: E(x − x⁰).
template <Scalar T>
Measure<T> bayes_posterior(const Measure<T>& experiment, const OddsGrid<T>& grid);

/// (1 − κ)·bayes_posterior(E) + κ·δ_{x⁰}. Throws ValidationError for κ > 1
/// or κ so negative that the result has a negative weight.
template <Scalar T>
Measure<T> apply_update_rule(const T& kappa, const Measure<T>& experiment, const OddsGrid<T>& grid);

/// ν^κ(K) = (1 − κ)·ν(K − x⁰) + κ·1[x⁰ ∈ K] on the grid. Throws
/// ValidationError for κ outside [κ̲, 1].
template <Scalar T>
Capacity<T> biased_capacity(const T& kappa, const ExperimentModel<T>& model);

/// Does the single bias κ_av rationalize λ, i.e. λ ∈ core(ν^κ_av)?
template <Scalar T>
Verdict<T> check_average_bias(const Measure<T>& lambda, const ExperimentModel<T>& model, const T& kappa_av);

enum class BiasDiagnosis { BayesianFeasible, Underreaction, Overreaction, Impossible };

std::string_view diagnosis_name(BiasDiagnosis d);

template <Scalar T>
struct KappaInterval {
  /// [lo, hi] of rationalizing average biases within the range, or nullopt.
  std::optional<std::pair<T, T>> interval;
  BiasDiagnosis diagnosis = BiasDiagnosis::Impossible;
  /// Subsets with λ(K) < ν(K − x⁰), split by whether they contain x⁰.
  std::vector<SubsetMask> underreaction_witnesses;
  std::vector<SubsetMask> overreaction_witnesses;
};

/**
 * Intersects the per-subset linear conditions on κ_av with the range.
 * Diagnosis: bayesian-feasible when 0 is in the interval, underreaction when
 * the interval lies above 0, overreaction when it lies below, impossible when
 * it is empty.
 */
template <Scalar T>
KappaInterval<T> rationalizing_kappa_interval(const Measure<T>& lambda, const ExperimentModel<T>& model,
                                              const KappaRange<T>& range);

/// Σ Q(κ)·κ for a distribution Q over finitely many bias values.
template <Scalar T>
T average_bias(const Measure<T>& q, std::span<const T> kappas);

/// The identification problem with one rule per bias value, rule κ having
/// capacity ν^κ; ids are the formatted κ values.
template <Scalar T>
IdentificationProblem<T> bias_identification_problem(const Measure<T>& lambda, const ExperimentModel<T>& model,
                                                     std::span<const T> kappas);

}  // namespace capid
