#pragma once

#include <cstdint>
#include <list>
#include <map>
#include <vector>

#include "icnsim/packet.hpp"
#include "icnsim/time.hpp"

namespace icnsim {

struct CsEntry {
  Data data;
  Timestamp inserted_at = 0;
};

/// Bounded in-network cache. Capacity counts payload bytes; eviction is LRU
/// by last hit or insert. Entries past their freshness window are skipped at
/// lookup but keep occupying bytes until LRU eviction reaches them.
class ContentStore {
 public:
  explicit ContentStore(std::uint64_t capacity_bytes) : capacity_(capacity_bytes) {}

  /// First fresh entry (in canonical name order) whose name has
  /// interest_name as a prefix. A hit refreshes LRU recency.
  const Data* lookup(const Name& interest_name, Timestamp now);

  /// Inserts or replaces by exact name, then evicts LRU entries until the
  /// byte bound holds again. A payload larger than the whole store is not
  /// inserted. Returns the names evicted.
  std::vector<Name> insert(const Data& data, Timestamp now);

  std::uint64_t used_bytes() const { return used_; }
  std::uint64_t capacity_bytes() const { return capacity_; }
  std::size_t size() const { return entries_.size(); }
  bool contains(const Name& name) const { return entries_.count(name) > 0; }

 private:
  struct Slot {
    CsEntry entry;
    std::list<Name>::iterator lru_it;
  };

  void touch(Slot& slot);
  void erase_slot(std::map<Name, Slot>::iterator it);

  std::uint64_t capacity_;
  std::uint64_t used_ = 0;
  std::map<Name, Slot> entries_;
  std::list<Name> lru_;  // front = most recently used
};

}  // namespace icnsim
