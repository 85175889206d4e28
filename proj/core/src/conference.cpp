#include "icnsim/conference.hpp"

#include "icnsim/codec.hpp"
#include "icnsim/signature.hpp"

namespace icnsim {

Bytes deterministic_chunk_payload(const Name& name, std::size_t size) {
  std::string text = name.to_string();
  std::uint64_t state = fnv1a64(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  if (state == 0) {
    state = 1;
  }
  Bytes out(size);
  for (std::size_t i = 0; i < size; ++i) {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    out[i] = static_cast<std::uint8_t>(state & 0xFF);
  }
  return out;
}

Bytes encode_discovery_response(const DiscoveryResponse& response) {
  Bytes out;
  append_tlv(out, payload_tlv::kGatewayLocator, encode_name_tlv(response.gateway_locator));
  append_tlv(out, payload_tlv::kNameSpace, encode_name_tlv(response.name_space));
  for (const auto& anchor : response.trust_anchors) {
    append_tlv(out, payload_tlv::kTrustAnchor, encode_name_tlv(anchor));
  }
  return out;
}

Bytes encode_discovery_notfound() {
  Bytes out;
  append_tlv(out, payload_tlv::kStatusNotFound, {});
  return out;
}

namespace {

Name read_nested_name(std::span<const std::uint8_t> value) {
  TlvReader inner(value);
  auto [type, nval] = inner.next();
  if (type != tlv::kName || !inner.at_end()) {
    throw MalformedPacket("expected nested Name TLV in payload");
  }
  return decode_name_value(nval);
}

}  // namespace

std::optional<DiscoveryResponse> decode_discovery_response(const Bytes& payload) {
  TlvReader reader(payload);
  if (reader.peek_type() == payload_tlv::kStatusNotFound) {
    return std::nullopt;
  }
  DiscoveryResponse r;
  auto [gtype, gval] = reader.next();
  if (gtype != payload_tlv::kGatewayLocator) {
    throw MalformedPacket("expected GatewayLocator TLV");
  }
  r.gateway_locator = read_nested_name(gval);
  auto [ntype, nval] = reader.next();
  if (ntype != payload_tlv::kNameSpace) {
    throw MalformedPacket("expected NameSpace TLV");
  }
  r.name_space = read_nested_name(nval);
  while (!reader.at_end()) {
    auto [atype, aval] = reader.next();
    if (atype != payload_tlv::kTrustAnchor) {
      throw MalformedPacket("expected TrustAnchor TLV");
    }
    r.trust_anchors.insert(read_nested_name(aval));
  }
  return r;
}

namespace conference_names {

Name discovery_query(const Name& slice_name_space) {
  return discovery_prefix().appended("conf").appended(slice_name_space);
}

std::optional<Name> parse_discovery_query(const Name& wire_name) {
  Name prefix = discovery_prefix().appended("conf");
  if (!prefix.is_prefix_of(wire_name) || wire_name.size() == prefix.size()) {
    return std::nullopt;
  }
  return wire_name.suffix(prefix.size());
}

Name participant_prefix(const Name& slice_name_space, const std::string& participant_id) {
  return slice_name_space.appended(participant_id);
}

Name participant_key(const Name& producer_prefix) { return producer_prefix.appended("key"); }

Name chunk_name(const Name& producer_prefix, const std::string& media, std::uint64_t seq) {
  return producer_prefix.appended(media).appended(std::to_string(seq));
}

Name roster_name(const Name& slice_name_space) { return slice_name_space.appended("roster"); }

}  // namespace conference_names

Bytes encode_roster(const std::vector<RosterEntry>& entries) {
  std::string text;
  for (const auto& [pid, prefix] : entries) {
    text += pid;
    text += ' ';
    text += prefix.to_string();
    text += '\n';
  }
  return Bytes(text.begin(), text.end());
}

std::vector<RosterEntry> decode_roster(const Bytes& payload) {
  std::vector<RosterEntry> entries;
  std::string text(payload.begin(), payload.end());
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) {
      eol = text.size();
    }
    std::string line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.empty()) {
      continue;
    }
    std::size_t space = line.find(' ');
    if (space == std::string::npos) {
      throw MalformedPacket("bad roster line: " + line);
    }
    entries.emplace_back(line.substr(0, space), Name::parse(line.substr(space + 1)));
  }
  return entries;
}

}  // namespace icnsim
