#include "icnsim/signature.hpp"

#include <utility>

#include "icnsim/codec.hpp"

namespace icnsim {

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (auto b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Bytes signature_tag_of(const Name& name, std::span<const std::uint8_t> payload, const Name& key_id) {
  // Self-delimiting input: TLV-encoded names bracket the raw payload, so
  // (name, payload) boundaries cannot alias.
  Bytes input = encode_name_tlv(name);
  for (int i = 7; i >= 0; --i) {
    input.push_back(static_cast<std::uint8_t>((payload.size() >> (8 * i)) & 0xFF));
  }
  input.insert(input.end(), payload.begin(), payload.end());
  Bytes key = encode_name_tlv(key_id);
  input.insert(input.end(), key.begin(), key.end());

  std::uint64_t h = fnv1a64(input);
  Bytes tag(8);
  for (int i = 0; i < 8; ++i) {
    tag[i] = static_cast<std::uint8_t>((h >> (8 * (7 - i))) & 0xFF);
  }
  return tag;
}

Data make_signed_data(Name name, Bytes payload, Duration freshness_us, Name key_id) {
  Data d;
  d.signature_tag = signature_tag_of(name, payload, key_id);
  d.name = std::move(name);
  d.payload = std::move(payload);
  d.freshness_us = freshness_us;
  d.key_id = std::move(key_id);
  return d;
}

bool verify(const Data& data, const std::set<Name>& trust_anchors) {
  bool anchored = false;
  for (const auto& anchor : trust_anchors) {
    if (anchor.is_prefix_of(data.key_id)) {
      anchored = true;
      break;
    }
  }
  if (!anchored) {
    return false;
  }
  return data.signature_tag == signature_tag_of(data.name, data.payload, data.key_id);
}

}  // namespace icnsim
