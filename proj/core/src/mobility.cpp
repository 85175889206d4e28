#include "icnsim/mobility.hpp"

#include <stdexcept>

#include "icnsim/codec.hpp"
#include "icnsim/conference.hpp"

namespace icnsim {

std::variant<Interest, ResolutionFailed> Msa::resolve(const Interest& interest,
                                                      const Nrs& nrs) const {
  if (interest.forwarding_hint) {
    throw std::logic_error("resolution precondition: interest already carries a hint");
  }
  auto locator = nrs.resolve(interest.name);
  if (!locator) {
    return ResolutionFailed{};
  }
  Interest hinted = interest;
  hinted.forwarding_hint = *locator;
  return hinted;
}

namespace mobility_wire {

Name make_msa_resolve_name(const Name& app_name) {
  return msa_prefix().appended("resolve").appended(app_name);
}

std::optional<Name> parse_msa_resolve_name(const Name& wire_name) {
  Name prefix = msa_prefix().appended("resolve");
  if (!prefix.is_prefix_of(wire_name) || wire_name.size() == prefix.size()) {
    return std::nullopt;
  }
  return wire_name.suffix(prefix.size());
}

Name make_nrs_resolve_name(const Name& app_name) {
  return nrs_prefix().appended("resolve").appended(app_name);
}

std::optional<Name> parse_nrs_resolve_name(const Name& wire_name) {
  Name prefix = nrs_prefix().appended("resolve");
  if (!prefix.is_prefix_of(wire_name) || wire_name.size() == prefix.size()) {
    return std::nullopt;
  }
  return wire_name.suffix(prefix.size());
}

Name make_nrs_register_name(std::uint64_t seq, const Name& app_name) {
  return nrs_prefix().appended("register").appended(std::to_string(seq)).appended(app_name);
}

Name make_nrs_deregister_name(std::uint64_t seq, const Name& app_name) {
  return nrs_prefix().appended("deregister").appended(std::to_string(seq)).appended(app_name);
}

Name make_redirect_notify_name(const Name& poa_locator, std::uint64_t seq) {
  return poa_locator.appended("mobility").appended("redirect").appended(std::to_string(seq));
}

Bytes encode_locator_payload(const std::optional<Name>& locator) {
  Bytes out;
  if (locator) {
    Bytes name_tlv = encode_name_tlv(*locator);
    append_tlv(out, payload_tlv::kGatewayLocator, name_tlv);
  } else {
    append_tlv(out, payload_tlv::kStatusNotFound, {});
  }
  return out;
}

std::optional<Name> decode_locator_payload(const Bytes& payload) {
  TlvReader reader(payload);
  auto [type, value] = reader.next();
  if (type == payload_tlv::kStatusNotFound) {
    return std::nullopt;
  }
  if (type != payload_tlv::kGatewayLocator) {
    throw MalformedPacket("unexpected locator payload TLV");
  }
  TlvReader inner(value);
  auto [itype, ivalue] = inner.next();
  if (itype != tlv::kName) {
    throw MalformedPacket("expected Name in locator payload");
  }
  return decode_name_value(ivalue);
}

}  // namespace mobility_wire

}  // namespace icnsim
