#include "icnsim/content_store.hpp"

namespace icnsim {

namespace {

bool is_fresh(const CsEntry& e, Timestamp now) {
  return now < e.inserted_at + e.data.freshness_us;
}

}  // namespace

void ContentStore::touch(Slot& slot) {
  lru_.splice(lru_.begin(), lru_, slot.lru_it);
}

void ContentStore::erase_slot(std::map<Name, Slot>::iterator it) {
  used_ -= it->second.entry.data.payload.size();
  lru_.erase(it->second.lru_it);
  entries_.erase(it);
}

const Data* ContentStore::lookup(const Name& interest_name, Timestamp now) {
  for (auto it = entries_.lower_bound(interest_name);
       it != entries_.end() && interest_name.is_prefix_of(it->first); ++it) {
    if (is_fresh(it->second.entry, now)) {
      touch(it->second);
      return &it->second.entry.data;
    }
  }
  return nullptr;
}

std::vector<Name> ContentStore::insert(const Data& data, Timestamp now) {
  std::vector<Name> evicted;
  auto existing = entries_.find(data.name);
  if (existing != entries_.end()) {
    erase_slot(existing);
  }

  std::uint64_t bytes = data.payload.size();
  if (bytes > capacity_) {
    return evicted;  // cannot fit even an empty store
  }

  lru_.push_front(data.name);
  entries_[data.name] = Slot{CsEntry{data, now}, lru_.begin()};
  used_ += bytes;

  while (used_ > capacity_) {
    const Name& victim = lru_.back();
    evicted.push_back(victim);
    erase_slot(entries_.find(victim));
  }
  return evicted;
}

}  // namespace icnsim
