// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace capid {

/// Input that violates a type invariant (bad measure, non-monotone capacity, ...).
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// The identified set is empty, so a query on it has no answer.
class InfeasibleSet : public std::runtime_error {
 public:
  explicit InfeasibleSet(const std::string& what = "identified set is empty")
      : std::runtime_error(what) {}
};

/// A configured size cap (ground set size, rule count) was exceeded.
class SizeLimit : public std::length_error {
 public:
  explicit SizeLimit(const std::string& what) : std::length_error(what) {}
};

}  // namespace capid
