#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "icnsim/name.hpp"

namespace icnsim {

using FaceId = std::uint32_t;

struct NextHop {
  FaceId face = 0;
  std::uint32_t cost = 0;

  auto operator<=>(const NextHop&) const = default;
};

struct FibEntry {
  Name prefix;
  std::vector<NextHop> nexthops;  // non-empty, no duplicate faces
};

/// Exact-prefix routing table: at most one entry per prefix, so longest
/// prefix match never ties.
class Fib {
 public:
  /// Installs or replaces the entry for prefix.
  void install(const Name& prefix, std::vector<NextHop> nexthops);
  /// Removes the entry. Returns false when the prefix is absent.
  bool remove(const Name& prefix);

  /// Longest-prefix match; nullptr when nothing matches.
  const FibEntry* lookup(const Name& name) const;
  const FibEntry* exact(const Name& prefix) const;

  /// Drops face from all nexthop lists, erasing entries left empty.
  /// Returns the prefixes that were erased.
  std::vector<Name> remove_face(FaceId face);

  std::size_t size() const { return entries_.size(); }
  const std::map<Name, FibEntry>& entries() const { return entries_; }

 private:
  std::map<Name, FibEntry> entries_;
};

}  // namespace icnsim
