#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "icnsim/packet.hpp"

namespace icnsim {

// Payload TLV types carried inside Data payloads (distinct from the packet
// TLV space; payloads are opaque to forwarders).
namespace payload_tlv {
inline constexpr std::uint8_t kGatewayLocator = 0x30;
inline constexpr std::uint8_t kNameSpace = 0x31;
inline constexpr std::uint8_t kTrustAnchor = 0x32;  // repeated
inline constexpr std::uint8_t kStatusNotFound = 0x33;
}  // namespace payload_tlv

/// What a UE application learns from service discovery: where its slice
/// gateway is, the slice namespace, and the keys to trust.
struct DiscoveryResponse {
  Name gateway_locator;
  Name name_space;
  std::set<Name> trust_anchors;

  bool operator==(const DiscoveryResponse&) const = default;
};

Bytes encode_discovery_response(const DiscoveryResponse& response);
Bytes encode_discovery_notfound();
/// nullopt when the payload is a not-found marker.
std::optional<DiscoveryResponse> decode_discovery_response(const Bytes& payload);

namespace conference_names {

inline const Name& discovery_prefix() {
  static const Name n{"discovery"};
  return n;
}

/// Name a UE expresses to discover a conference slice's gateway.
Name discovery_query(const Name& slice_name_space);
std::optional<Name> parse_discovery_query(const Name& wire_name);

Name participant_prefix(const Name& slice_name_space, const std::string& participant_id);
Name participant_key(const Name& producer_prefix);
Name chunk_name(const Name& producer_prefix, const std::string& media, std::uint64_t seq);
Name roster_name(const Name& slice_name_space);

}  // namespace conference_names

/// Roster payload: the participant directory served by the conference
/// service function.
using RosterEntry = std::pair<std::string, Name>;  // (participant id, prefix)
Bytes encode_roster(const std::vector<RosterEntry>& entries);
std::vector<RosterEntry> decode_roster(const Bytes& payload);

/// Reproducible chunk body: a fixed-size byte pattern derived from the name.
Bytes deterministic_chunk_payload(const Name& name, std::size_t size);

}  // namespace icnsim
