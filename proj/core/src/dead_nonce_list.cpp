#include "icnsim/dead_nonce_list.hpp"

namespace icnsim {

void DeadNonceList::insert(const Name& name, std::uint32_t nonce) {
  Key key{name, nonce};
  fifo_.push_back(key);
  index_.insert(key);
  while (fifo_.size() > capacity_) {
    index_.erase(index_.find(fifo_.front()));
    fifo_.pop_front();
  }
}

bool DeadNonceList::contains(const Name& name, std::uint32_t nonce) const {
  return index_.count(Key{name, nonce}) > 0;
}

}  // namespace icnsim
