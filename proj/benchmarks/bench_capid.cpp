// SPDX-License-Identifier: Apache-2.0
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "capid/capacity.hpp"
#include "capid/identification.hpp"
#include "capid/info_spec.hpp"
#include "capid/simulate.hpp"

namespace {

using capid::Rational;

capid::GroundSet letters(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::string(1, static_cast<char>('a' + i)));
  return capid::GroundSet(std::move(labels));
}

// Contamination of a uniform focal measure on the full ground set.
capid::Capacity<Rational> contamination(const capid::GroundSet& g) {
  const auto spec = capid::InfoSpec<Rational>::contamination(g, g.full(), capid::Measure<Rational>::uniform(g.size()),
                                                             Rational(1, 4));
  return capid::build_capacity(spec);
}

// Rules with nested carriers {a}, {a,b}, ... and data uniform on X.
capid::IdentificationProblem<Rational> nested_problem(std::size_t n) {
  const auto g = letters(n);
  std::vector<capid::RuleSpec<Rational>> rules;
  for (std::size_t k = 1; k <= n; ++k) {
    const auto c = capid::SubsetMask::full(k);
    rules.push_back({"d" + std::to_string(k), c, capid::Capacity<Rational>::ignorance(g, c)});
  }
  return capid::IdentificationProblem<Rational>(g, std::move(rules), capid::Measure<Rational>::uniform(n));
}

void BM_IsConvex(benchmark::State& state) {
  const auto nu = contamination(letters(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(capid::is_convex(nu));
}
BENCHMARK(BM_IsConvex)->Arg(4)->Arg(8)->Arg(10)->Arg(12);

void BM_Mobius(benchmark::State& state) {
  const auto nu = contamination(letters(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(capid::mobius(nu));
}
BENCHMARK(BM_Mobius)->Arg(4)->Arg(8)->Arg(12);

void BM_CoreVertices(benchmark::State& state) {
  const auto nu = contamination(letters(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(capid::core_vertices(nu));
}
BENCHMARK(BM_CoreVertices)->Arg(3)->Arg(5)->Arg(6);

void BM_CheckRationalizes(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = nested_problem(n);
  const auto q = capid::Measure<Rational>::uniform(n);
  for (auto _ : state) benchmark::DoNotOptimize(capid::check_rationalizes(p, q));
}
BENCHMARK(BM_CheckRationalizes)->Arg(4)->Arg(8)->Arg(12);

void BM_ExistsRationalizing(benchmark::State& state) {
  const auto p = nested_problem(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(capid::exists_rationalizing(p));
}
BENCHMARK(BM_ExistsRationalizing)->Arg(4)->Arg(6)->Arg(8);

void BM_ProbabilityBounds(benchmark::State& state) {
  const auto p = nested_problem(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(capid::probability_bounds(p));
}
BENCHMARK(BM_ProbabilityBounds)->Arg(4)->Arg(6);

void BM_SynthPopulation(benchmark::State& state) {
  const auto g = letters(5);
  std::vector<capid::InfoSpec<Rational>> specs;
  for (std::size_t k = 1; k <= 4; ++k) specs.push_back(capid::InfoSpec<Rational>::ignorance(g, capid::SubsetMask::full(k + 1)));
  const auto q = capid::Measure<Rational>::uniform(specs.size());
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(capid::synth_population<Rational>(specs, q, ++seed));
}
BENCHMARK(BM_SynthPopulation);

}  // namespace

BENCHMARK_MAIN();
