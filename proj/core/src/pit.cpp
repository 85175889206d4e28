#include "icnsim/pit.hpp"

#include <algorithm>
#include <stdexcept>

namespace icnsim {

PitEntry* Pit::find(const Name& name) {
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : &it->second;
}

const PitEntry* Pit::find(const Name& name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : &it->second;
}

PitEntry& Pit::create(const Name& name, InRecord first, Timestamp expiry_us) {
  auto [it, inserted] = entries_.emplace(name, PitEntry{name, {first}, {}, expiry_us});
  if (!inserted) {
    throw std::logic_error("PIT entry already exists for " + name.to_string());
  }
  return it->second;
}

void Pit::aggregate(PitEntry& entry, InRecord record) {
  if (std::find(entry.in_records.begin(), entry.in_records.end(), record) ==
      entry.in_records.end()) {
    entry.in_records.push_back(record);
  }
}

bool Pit::has_nonce(const Name& name, std::uint32_t nonce) const {
  const auto* entry = find(name);
  if (entry == nullptr) {
    return false;
  }
  return std::any_of(entry->in_records.begin(), entry->in_records.end(),
                     [nonce](const InRecord& r) { return r.nonce == nonce; });
}

void Pit::erase(const Name& name) { entries_.erase(name); }

std::vector<Name> Pit::expire(Timestamp now,
                              std::vector<std::pair<Name, std::uint32_t>>& dead_pairs) {
  std::vector<Name> expired;
  for (auto it = entries_.begin(); it != entries_.end();) {
    if (it->second.expiry_us <= now) {
      for (const auto& rec : it->second.in_records) {
        dead_pairs.emplace_back(it->first, rec.nonce);
      }
      expired.push_back(it->first);
      it = entries_.erase(it);
    } else {
      ++it;
    }
  }
  return expired;
}

std::vector<PitEntry*> Pit::match_data(const Name& data_name) {
  std::vector<PitEntry*> matches;
  // Every prefix of data_name is a candidate exact key.
  for (std::size_t len = 1; len <= data_name.size(); ++len) {
    auto it = entries_.find(data_name.prefix(len));
    if (it != entries_.end()) {
      matches.push_back(&it->second);
    }
  }
  return matches;
}

std::vector<Name> Pit::remove_face(FaceId face) {
  std::vector<Name> erased;
  for (auto it = entries_.begin(); it != entries_.end();) {
    auto& recs = it->second.in_records;
    recs.erase(std::remove_if(recs.begin(), recs.end(),
                              [face](const InRecord& r) { return r.face == face; }),
               recs.end());
    it->second.out_faces.erase(face);
    if (recs.empty()) {
      erased.push_back(it->first);
      it = entries_.erase(it);
    } else {
      ++it;
    }
  }
  return erased;
}

}  // namespace icnsim
