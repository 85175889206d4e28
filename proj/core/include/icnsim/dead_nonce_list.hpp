#pragma once

#include <cstdint>
#include <deque>
#include <set>
#include <utility>

#include "icnsim/name.hpp"

namespace icnsim {

/// Remembers recently dead (name, nonce) pairs so loops are still suppressed
/// after the PIT entry is gone. Fixed-size FIFO window.
class DeadNonceList {
 public:
  explicit DeadNonceList(std::size_t capacity = 1024) : capacity_(capacity) {}

  void insert(const Name& name, std::uint32_t nonce);
  bool contains(const Name& name, std::uint32_t nonce) const;
  std::size_t size() const { return fifo_.size(); }

 private:
  using Key = std::pair<Name, std::uint32_t>;

  std::size_t capacity_;
  std::deque<Key> fifo_;
  std::multiset<Key> index_;
};

}  // namespace icnsim
