#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "icnsim/fib.hpp"
#include "icnsim/name.hpp"
#include "icnsim/time.hpp"

namespace icnsim {

struct InRecord {
  FaceId face = 0;
  std::uint32_t nonce = 0;

  auto operator<=>(const InRecord&) const = default;
};

struct PitEntry {
  Name name;
  std::vector<InRecord> in_records;  // non-empty while the entry exists
  std::set<FaceId> out_faces;
  Timestamp expiry_us = 0;
};

/// Pending Interest Table: one entry per exact name. Aggregating several
/// requests for one name into one entry is what turns a Data return into a
/// multicast delivery.
class Pit {
 public:
  PitEntry* find(const Name& name);
  const PitEntry* find(const Name& name) const;

  /// Creates the entry (must not exist yet).
  PitEntry& create(const Name& name, InRecord first, Timestamp expiry_us);

  /// Adds an in-record unless the same (face, nonce) pair is already there.
  static void aggregate(PitEntry& entry, InRecord record);

  /// True iff the nonce appears in the entry's in-records.
  bool has_nonce(const Name& name, std::uint32_t nonce) const;

  void erase(const Name& name);

  /// Removes every entry with expiry <= now; returns their names in order.
  /// Each removed entry's in-record pairs are appended to dead_pairs.
  std::vector<Name> expire(Timestamp now, std::vector<std::pair<Name, std::uint32_t>>& dead_pairs);

  /// All entries whose name is a prefix of data_name, in canonical order.
  std::vector<PitEntry*> match_data(const Name& data_name);

  /// Drops in-records on face; entries left with no in-records are erased
  /// (their names are returned).
  std::vector<Name> remove_face(FaceId face);

  std::size_t size() const { return entries_.size(); }
  const std::map<Name, PitEntry>& entries() const { return entries_; }

 private:
  std::map<Name, PitEntry> entries_;
};

}  // namespace icnsim
