// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace capid {

/// Default cap on ground-set size; every capacity stores 2^n values.
inline constexpr std::size_t kDefaultMaxGroundSize = 20;

/// Hard limit imposed by the 32-bit mask representation.
inline constexpr std::size_t kMaskBits = 31;

/// Current cap, honouring the CAPID_MAX_N environment override.
std::size_t max_ground_size();

/// An n-bit subset of a finite ground set: bit i set iff element i belongs.
class SubsetMask {
 public:
  constexpr SubsetMask() = default;
  constexpr explicit SubsetMask(std::uint32_t bits) : bits_(bits) {}

  static constexpr SubsetMask full(std::size_t n) {
    return SubsetMask(n == 0 ? 0u : static_cast<std::uint32_t>((std::uint64_t{1} << n) - 1));
  }
  static constexpr SubsetMask singleton(std::size_t i) {
    return SubsetMask(std::uint32_t{1} << i);
  }

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool contains(std::size_t i) const { return (bits_ >> i) & 1u; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool subset_of(SubsetMask other) const { return (bits_ & ~other.bits_) == 0; }

  constexpr SubsetMask operator|(SubsetMask o) const { return SubsetMask(bits_ | o.bits_); }
  constexpr SubsetMask operator&(SubsetMask o) const { return SubsetMask(bits_ & o.bits_); }
  /// Set difference.
  constexpr SubsetMask operator-(SubsetMask o) const { return SubsetMask(bits_ & ~o.bits_); }
  constexpr SubsetMask with(std::size_t i) const { return SubsetMask(bits_ | (1u << i)); }
  constexpr SubsetMask without(std::size_t i) const { return SubsetMask(bits_ & ~(1u << i)); }

  constexpr auto operator<=>(const SubsetMask&) const = default;

  /// Element indices in increasing order.
  std::vector<std::size_t> elements() const;

 private:
  std::uint32_t bits_ = 0;
};

/// Calls fn(J) for every J ⊆ mask, including ∅ and mask itself.
template <class Fn>
void for_each_subset(SubsetMask mask, Fn&& fn) {
  std::uint32_t sub = mask.bits();
  while (true) {
    fn(SubsetMask(sub));
    if (sub == 0) break;
    sub = (sub - 1) & mask.bits();
  }
}

/// Ordered list of distinct alternative labels.
class GroundSet {
 public:
  GroundSet() = default;
  /// Throws ValidationError on duplicate labels, an empty list, or n above the cap.
  explicit GroundSet(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  std::size_t num_subsets() const { return std::size_t{1} << labels_.size(); }
  SubsetMask full() const { return SubsetMask::full(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }

  std::optional<std::size_t> index_of(std::string_view label) const;
  /// Throws ValidationError for an unknown label.
  std::size_t require_index(std::string_view label) const;
  /// Throws ValidationError for unknown or repeated labels.
  SubsetMask subset_of_labels(const std::vector<std::string>& labels) const;

  std::vector<std::string> labels_of(SubsetMask mask) const;
  /// "a,b" in ground-set order; "" for the empty set.
  std::string key_of(SubsetMask mask) const;
  /// Inverse of key_of.
  SubsetMask mask_of_key(std::string_view key) const;
  /// "{a,b}" for reports.
  std::string describe(SubsetMask mask) const;

  friend bool operator==(const GroundSet&, const GroundSet&) = default;

 private:
  std::vector<std::string> labels_;
};

}  // namespace capid
