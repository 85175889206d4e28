#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "icnsim/name.hpp"
#include "icnsim/time.hpp"

namespace icnsim {

using Bytes = std::vector<std::uint8_t>;

/// Request packet. The optional forwarding hint carries a locator prefix and
/// is the late-binding attachment point: it routes the packet without ever
/// touching the application name.
struct Interest {
  Name name;
  std::uint32_t nonce = 0;
  Duration lifetime_us = kDefaultInterestLifetimeUs;
  std::uint8_t hop_limit = 32;
  std::optional<Name> forwarding_hint;
  std::map<std::string, std::string> context;  // opaque to forwarders

  bool operator==(const Interest&) const = default;
};

/// Response packet. signature_tag is an opaque deterministic digest checked
/// together with key_id against a verifier's trust anchors.
struct Data {
  Name name;
  Bytes payload;
  Duration freshness_us = 0;
  Name key_id;
  Bytes signature_tag;

  bool operator==(const Data&) const = default;
};

using Packet = std::variant<Interest, Data>;

inline bool is_interest(const Packet& p) { return std::holds_alternative<Interest>(p); }
inline bool is_data(const Packet& p) { return std::holds_alternative<Data>(p); }

inline const Name& packet_name(const Packet& p) {
  return std::visit([](const auto& v) -> const Name& { return v.name; }, p);
}

/// A Data satisfies an Interest iff the Interest name is a prefix of (or
/// equal to) the Data name.
inline bool satisfies(const Interest& interest, const Data& data) {
  return interest.name.is_prefix_of(data.name);
}

}  // namespace icnsim
