// SPDX-License-Identifier: Apache-2.0
#include "capid/updating.hpp"

#include <algorithm>
#include <string>

#include "capid/error.hpp"

namespace capid {

namespace {

template <Scalar T>
GroundSet labelled(std::span<const T> values) {
  std::vector<std::string> labels;
  labels.reserve(values.size());
  for (const T& v : values) labels.push_back(format_scalar(v));
  return GroundSet(std::move(labels));
}

template <Scalar T>
void require_kappa(const T& kappa, const ExperimentModel<T>& model) {
  if (definitely_gt(kappa, T(1)) || definitely_gt(model.kappa_floor(), kappa)) {
    throw ValidationError("kappa " + format_scalar(kappa) + " is outside [" + format_scalar(model.kappa_floor()) +
                          ", 1]");
  }
}

template <Scalar T>
std::vector<T> subset_masses(const Measure<T>& p) {
  std::vector<T> out(std::size_t{1} << p.size(), T(0));
  for (std::uint32_t k = 1; k < out.size(); ++k) {
    const std::uint32_t low = k & (~k + 1);
    out[k] = out[k ^ low] + p[static_cast<std::size_t>(std::countr_zero(low))];
  }
  return out;
}

}  // namespace

template <Scalar T>
OddsGrid<T>::OddsGrid(std::vector<T> points, T prior) : points_(std::move(points)), prior_(std::move(prior)) {
  if (points_.empty()) throw ValidationError("odds grid must be nonempty");
  bool found = false;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (approx_eq(points_[i], points_[j])) throw ValidationError("odds grid has a repeated point");
    }
    if (approx_eq(points_[i], prior_)) {
      prior_index_ = i;
      found = true;
    }
  }
  if (!found) throw ValidationError("prior " + format_scalar(prior_) + " is not a grid point");
  std::vector<T> shifted(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) shifted[i] = points_[i] - prior_;
  shifted[prior_index_] = T(0);
  ground_ = labelled(std::span<const T>(points_));
  shifted_ground_ = labelled(std::span<const T>(shifted));
}

template <Scalar T>
ExperimentModel<T>::ExperimentModel(OddsGrid<T> grid, Capacity<T> nu)
    : grid_(std::move(grid)), nu_(std::move(nu)), kappa_floor_(0) {
  if (nu_.ground_size() != grid_.size()) throw ValidationError("experiment capacity is not on the shifted grid");
  if (!is_convex(nu_)) throw ValidationError("experiment capacity is not convex");
  vertices_ = core_vertices(nu_);
  const std::size_t zero = grid_.prior_index();
  bool first = true;
  for (const auto& e : vertices_) {
    if (approx_eq(e[zero], T(1))) {
      throw ValidationError("the experiment set contains the uninformative experiment (E(0) = 1)");
    }
    T floor = T(-e[zero]) / T(1 - e[zero]);
    if (first || floor > kappa_floor_) kappa_floor_ = std::move(floor);
    first = false;
  }
}

template <Scalar T>
KappaRange<T> full_kappa_range(const ExperimentModel<T>& model) {
  return {model.kappa_floor(), T(1)};
}

template <Scalar T>
KappaRange<T> clamp_kappa_range(const ExperimentModel<T>& model, KappaRange<T> requested) {
  if (definitely_gt(requested.min, requested.max)) throw ValidationError("kappa range has min > max");
  if (requested.min < model.kappa_floor()) requested.min = model.kappa_floor();
  if (requested.max > T(1)) requested.max = T(1);
  if (definitely_gt(requested.min, requested.max)) {
    throw ValidationError("kappa range does not meet [" + format_scalar(model.kappa_floor()) + ", 1]");
  }
  return requested;
}

template <Scalar T>
Measure<T> bayes_posterior(const Measure<T>& experiment, const OddsGrid<T>& grid) {
  if (experiment.size() != grid.size()) throw ValidationError("experiment is not on the shifted grid");
  // Shared indexing makes the shift x ↦ x − x⁰ the identity on weights.
  return experiment;
}

template <Scalar T>
Measure<T> apply_update_rule(const T& kappa, const Measure<T>& experiment, const OddsGrid<T>& grid) {
  if (definitely_gt(kappa, T(1))) throw ValidationError("kappa must not exceed 1");
  const Measure<T> posterior = bayes_posterior(experiment, grid);
  std::vector<T> w(posterior.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = (1 - kappa) * posterior[i];
  w[grid.prior_index()] += kappa;
  for (const T& v : w) {
    if (definitely_gt(T(0), v)) {
      throw ValidationError("kappa " + format_scalar(kappa) + " is below the admissible floor for this experiment");
    }
  }
  if constexpr (!ScalarTraits<T>::exact) {
    for (T& v : w) v = std::max(v, 0.0);
  }
  return Measure<T>(std::move(w));
}

template <Scalar T>
Capacity<T> biased_capacity(const T& kappa, const ExperimentModel<T>& model) {
  require_kappa(kappa, model);
  const auto nu = model.nu().values();
  const std::size_t zero = model.grid().prior_index();
  std::vector<T> values(nu.size());
  for (std::uint32_t k = 0; k < values.size(); ++k) {
    values[k] = (1 - kappa) * nu[k];
    if ((k >> zero) & 1u) values[k] += kappa;
  }
  values.front() = T(0);
  values.back() = T(1);
  return Capacity<T>(model.grid().ground(), std::move(values));
}

template <Scalar T>
Verdict<T> check_average_bias(const Measure<T>& lambda, const ExperimentModel<T>& model, const T& kappa_av) {
  if (lambda.size() != model.grid().size()) throw ValidationError("lambda is not on the odds grid");
  const Capacity<T> nu = biased_capacity(kappa_av, model);
  const std::vector<T> lam = subset_masses(lambda);
  Verdict<T> out;
  for (std::uint32_t k = 0; k < lam.size(); ++k) {
    T gap = nu.values()[k] - lam[k];
    if (!definitely_gt(gap, T(0))) continue;
    ++out.total_violations;
    if (out.violated.size() < kMaxListedViolations) out.violated.push_back({SubsetMask(k), std::move(gap)});
  }
  out.rationalizes = out.total_violations == 0;
  return out;
}

std::string_view diagnosis_name(BiasDiagnosis d) {
  switch (d) {
    case BiasDiagnosis::BayesianFeasible:
      return "bayesian-feasible";
    case BiasDiagnosis::Underreaction:
      return "underreaction";
    case BiasDiagnosis::Overreaction:
      return "overreaction";
    case BiasDiagnosis::Impossible:
      break;
  }
  return "impossible";
}

template <Scalar T>
KappaInterval<T> rationalizing_kappa_interval(const Measure<T>& lambda, const ExperimentModel<T>& model,
                                              const KappaRange<T>& range) {
  if (lambda.size() != model.grid().size()) throw ValidationError("lambda is not on the odds grid");
  const KappaRange<T> r = clamp_kappa_range(model, range);
  const auto nu = model.nu().values();
  const std::vector<T> lam = subset_masses(lambda);
  const std::size_t zero = model.grid().prior_index();

  KappaInterval<T> out;
  T lo = r.min;
  T hi = r.max;
  bool feasible = true;
  for (std::uint32_t k = 1; k < lam.size(); ++k) {
    const bool has_prior = (k >> zero) & 1u;
    if (definitely_gt(nu[k], lam[k])) {
      (has_prior ? out.overreaction_witnesses : out.underreaction_witnesses).push_back(SubsetMask(k));
    }
    if (!has_prior) {
      // (1 − κ)ν(K) ≤ λ(K)
      if (is_zero(nu[k])) continue;
      T bound = 1 - lam[k] / nu[k];
      if (bound > lo) lo = std::move(bound);
    } else if (approx_eq(nu[k], T(1))) {
      // ν(K) + κ(1 − ν(K)) = 1 whatever κ is.
      if (!approx_eq(lam[k], T(1))) feasible = false;
    } else {
      // ν(K) + κ(1 − ν(K)) ≤ λ(K)
      T bound = (lam[k] - nu[k]) / (1 - nu[k]);
      if (bound < hi) hi = std::move(bound);
    }
  }
  if (!feasible || definitely_gt(lo, hi)) {
    out.diagnosis = BiasDiagnosis::Impossible;
    return out;
  }
  if (hi < lo) hi = lo;  // float noise inside the tolerance
  if (approx_le(lo, T(0)) && approx_ge(hi, T(0))) {
    out.diagnosis = BiasDiagnosis::BayesianFeasible;
  } else if (lo > 0) {
    out.diagnosis = BiasDiagnosis::Underreaction;
  } else {
    out.diagnosis = BiasDiagnosis::Overreaction;
  }
  out.interval = std::make_pair(std::move(lo), std::move(hi));
  return out;
}

template <Scalar T>
T average_bias(const Measure<T>& q, std::span<const T> kappas) {
  if (q.size() != kappas.size()) throw ValidationError("Q must have one weight per bias value");
  T total(0);
  for (std::size_t i = 0; i < kappas.size(); ++i) total += q[i] * kappas[i];
  return total;
}

template <Scalar T>
IdentificationProblem<T> bias_identification_problem(const Measure<T>& lambda, const ExperimentModel<T>& model,
                                                     std::span<const T> kappas) {
  std::vector<RuleSpec<T>> rules;
  for (const T& kappa : kappas) {
    rules.push_back({format_scalar(kappa), model.grid().ground().full(), biased_capacity(kappa, model)});
  }
  return IdentificationProblem<T>(model.grid().ground(), std::move(rules), lambda);
}

#define CAPID_INSTANTIATE(T)                                                                               \
  template class OddsGrid<T>;                                                                              \
  template class ExperimentModel<T>;                                                                       \
  template KappaRange<T> full_kappa_range(const ExperimentModel<T>&);                                      \
  template KappaRange<T> clamp_kappa_range(const ExperimentModel<T>&, KappaRange<T>);                      \
  template Measure<T> bayes_posterior(const Measure<T>&, const OddsGrid<T>&);                              \
  template Measure<T> apply_update_rule(const T&, const Measure<T>&, const OddsGrid<T>&);                  \
  template Capacity<T> biased_capacity(const T&, const ExperimentModel<T>&);                               \
  template Verdict<T> check_average_bias(const Measure<T>&, const ExperimentModel<T>&, const T&);          \
  template KappaInterval<T> rationalizing_kappa_interval(const Measure<T>&, const ExperimentModel<T>&,     \
                                                         const KappaRange<T>&);                            \
  template T average_bias(const Measure<T>&, std::span<const T>);                                          \
  template IdentificationProblem<T> bias_identification_problem(const Measure<T>&, const ExperimentModel<T>&, \
                                                                std::span<const T>);

CAPID_INSTANTIATE(Rational)
CAPID_INSTANTIATE(double)

#undef CAPID_INSTANTIATE

}  // namespace capid
