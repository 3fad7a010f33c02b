// SPDX-License-Identifier: Apache-2.0
#include "capid/subset.hpp"

#include <cstdlib>
#include <string>
#include <unordered_set>

#include "capid/error.hpp"

namespace capid {

std::size_t max_ground_size() {
  if (const char* env = std::getenv("CAPID_MAX_N"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != nullptr && *end == '\0' && v > 0) {
      return v > kMaskBits ? kMaskBits : static_cast<std::size_t>(v);
    }
  }
  return kDefaultMaxGroundSize;
}

std::vector<std::size_t> SubsetMask::elements() const {
  std::vector<std::size_t> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (std::uint32_t b = bits_; b != 0; b &= b - 1) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
  }
  return out;
}

GroundSet::GroundSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw ValidationError("ground set must be nonempty");
  if (labels_.size() > max_ground_size()) {
    throw SizeLimit("ground set of size " + std::to_string(labels_.size()) + " exceeds the cap of " +
                    std::to_string(max_ground_size()));
  }
  std::unordered_set<std::string> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) throw ValidationError("duplicate label '" + l + "'");
    if (l.find(',') != std::string::npos) {
      throw ValidationError("label '" + l + "' contains a comma");
    }
  }
}

std::optional<std::size_t> GroundSet::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  return std::nullopt;
}

std::size_t GroundSet::require_index(std::string_view label) const {
  if (auto i = index_of(label)) return *i;
  throw ValidationError("unknown label '" + std::string(label) + "'");
}

SubsetMask GroundSet::subset_of_labels(const std::vector<std::string>& labels) const {
  SubsetMask m;
  for (const auto& l : labels) {
    const std::size_t i = require_index(l);
    if (m.contains(i)) throw ValidationError("label '" + l + "' repeated in subset");
    m = m.with(i);
  }
  return m;
}

std::vector<std::string> GroundSet::labels_of(SubsetMask mask) const {
  std::vector<std::string> out;
  for (std::size_t i : mask.elements()) out.push_back(labels_.at(i));
  return out;
}

std::string GroundSet::key_of(SubsetMask mask) const {
  std::string out;
  for (std::size_t i : mask.elements()) {
    if (!out.empty()) out += ',';
    out += labels_.at(i);
  }
  return out;
}

SubsetMask GroundSet::mask_of_key(std::string_view key) const {
  std::vector<std::string> parts;
  if (!key.empty()) {
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = key.find(',', start);
      parts.emplace_back(key.substr(start, comma == std::string_view::npos ? key.npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  }
  return subset_of_labels(parts);
}

std::string GroundSet::describe(SubsetMask mask) const {
  return "{" + key_of(mask) + "}";
}

}  // namespace capid
