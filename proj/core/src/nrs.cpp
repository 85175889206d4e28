#include "icnsim/nrs.hpp"

namespace icnsim {

NrsResult Nrs::register_name(const Name& name, const Name& locator, std::uint64_t seq) {
  auto it = records_.find(name);
  if (it == records_.end()) {
    records_[name] = NrsRecord{name, locator, seq, std::nullopt, true};
    return NrsResult::Accepted;
  }
  NrsRecord& rec = it->second;
  if (seq <= rec.seq) {
    return NrsResult::StaleSeq;
  }
  if (rec.locator != locator && !rec.locator.empty()) {
    rec.previous_locator = rec.locator;
  } else {
    rec.previous_locator.reset();
  }
  rec.locator = locator;
  rec.seq = seq;
  rec.registered = true;
  return NrsResult::Accepted;
}

NrsResult Nrs::deregister_name(const Name& name, std::uint64_t seq) {
  auto it = records_.find(name);
  if (it == records_.end()) {
    // tombstone: accepting keeps enable/disable idempotent
    NrsRecord rec;
    rec.name = name;
    rec.seq = seq;
    rec.registered = false;
    records_[name] = std::move(rec);
    return NrsResult::Accepted;
  }
  NrsRecord& rec = it->second;
  if (seq <= rec.seq) {
    return NrsResult::StaleSeq;
  }
  rec.seq = seq;
  rec.registered = false;
  return NrsResult::Accepted;
}

std::optional<Name> Nrs::resolve(const Name& name) const {
  for (std::size_t len = name.size(); len >= 1; --len) {
    auto it = records_.find(name.prefix(len));
    if (it != records_.end() && it->second.registered) {
      return it->second.locator;
    }
  }
  return std::nullopt;
}

const NrsRecord* Nrs::record(const Name& name) const {
  auto it = records_.find(name);
  return it == records_.end() ? nullptr : &it->second;
}

}  // namespace icnsim
