// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "capid/scalar.hpp"

namespace capid::polytope {

/// normal·x ≤ bound.
template <Scalar T>
struct HalfSpace {
  std::vector<T> normal;
  T bound;
};

/// Halfspaces of the full system violated at x, most violated first.
template <Scalar T>
using HalfSpaceOracle = std::function<std::vector<HalfSpace<T>>(std::span<const T> x)>;

/**
 * Vertices of the slice {x ∈ ℝ^m : x ≥ 0, Σx = 1, oracle rows} of the
 * probability simplex.
 *
 * Starts from the simplex and repeatedly cuts it with the most violated row
 * at any current vertex (incremental double description with the
 * combinatorial adjacency test), stopping once every vertex satisfies the
 * full system. The result is sorted lexicographically; empty when the slice
 * is empty.
 */
template <Scalar T>
std::vector<std::vector<T>> slice_vertices(std::size_t m, const HalfSpaceOracle<T>& oracle);

/// Same, for an explicitly listed system.
template <Scalar T>
std::vector<std::vector<T>> slice_vertices(std::size_t m, std::span<const HalfSpace<T>> rows);

/// argmax (or argmin) of objective·x over the slice, or nullopt if it is empty.
template <Scalar T>
std::optional<std::vector<T>> optimize_over_slice(std::size_t m, std::span<const T> objective,
                                                  bool maximize, const HalfSpaceOracle<T>& oracle);

/// Oracle over an explicit list; reports every violated row.
template <Scalar T>
HalfSpaceOracle<T> list_oracle(std::vector<HalfSpace<T>> rows);

/**
 * Indices of an irredundant subsystem: rows are tested in order and a row is
 * dropped when the simplex together with the rows still kept implies it.
 * Rows with zero normal and nonnegative bound are always dropped.
 */
template <Scalar T>
std::vector<std::size_t> irredundant_rows(std::size_t m, std::span<const HalfSpace<T>> rows);

/// True when x is a convex combination of the other points (LP test).
template <Scalar T>
bool in_convex_hull(std::span<const T> x, std::span<const std::vector<T>> points);

}  // namespace capid::polytope
