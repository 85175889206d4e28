#include "icnsim/fib.hpp"

#include <algorithm>
#include <stdexcept>

namespace icnsim {

void Fib::install(const Name& prefix, std::vector<NextHop> nexthops) {
  if (nexthops.empty()) {
    throw std::invalid_argument("FIB entry needs at least one nexthop");
  }
  for (std::size_t i = 0; i < nexthops.size(); ++i) {
    for (std::size_t j = i + 1; j < nexthops.size(); ++j) {
      if (nexthops[i].face == nexthops[j].face) {
        throw std::invalid_argument("duplicate face in FIB entry");
      }
    }
  }
  entries_[prefix] = FibEntry{prefix, std::move(nexthops)};
}

bool Fib::remove(const Name& prefix) { return entries_.erase(prefix) > 0; }

const FibEntry* Fib::lookup(const Name& name) const {
  for (std::size_t len = name.size(); len >= 1; --len) {
    auto it = entries_.find(name.prefix(len));
    if (it != entries_.end()) {
      return &it->second;
    }
  }
  return nullptr;
}

const FibEntry* Fib::exact(const Name& prefix) const {
  auto it = entries_.find(prefix);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<Name> Fib::remove_face(FaceId face) {
  std::vector<Name> erased;
  for (auto it = entries_.begin(); it != entries_.end();) {
    auto& hops = it->second.nexthops;
    hops.erase(std::remove_if(hops.begin(), hops.end(),
                              [face](const NextHop& h) { return h.face == face; }),
               hops.end());
    if (hops.empty()) {
      erased.push_back(it->first);
      it = entries_.erase(it);
    } else {
      ++it;
    }
  }
  return erased;
}

}  // namespace icnsim
