#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "icnsim/name.hpp"

namespace icnsim {

/// Binding of a mobile name prefix to its current locator. seq strictly
/// increases across accepted updates; deregistration keeps a tombstone so
/// late updates with stale seq still lose.
struct NrsRecord {
  Name name;
  Name locator;
  std::uint64_t seq = 0;
  std::optional<Name> previous_locator;
  bool registered = false;
};

enum class NrsResult { Accepted, StaleSeq };

/// Name Resolution Service: the authoritative name-to-locator map of one
/// domain. Single instance; replication is out of scope.
class Nrs {
 public:
  NrsResult register_name(const Name& name, const Name& locator, std::uint64_t seq);
  NrsResult deregister_name(const Name& name, std::uint64_t seq);

  /// Locator of the longest registered prefix of name, if any.
  std::optional<Name> resolve(const Name& name) const;

  const NrsRecord* record(const Name& name) const;
  const std::map<Name, NrsRecord>& records() const { return records_; }

 private:
  std::map<Name, NrsRecord> records_;
};

}  // namespace icnsim
