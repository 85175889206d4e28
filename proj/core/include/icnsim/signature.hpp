#pragma once

#include <cstdint>
#include <set>
#include <span>

#include "icnsim/packet.hpp"

namespace icnsim {

/// 64-bit FNV-1a. Not cryptographic; provenance here is key-identity
/// matching plus a deterministic digest, which is all the trust gating
/// in this system needs.
std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

/// Deterministic 8-byte tag over the canonical (name, payload, key_id)
/// concatenation. Same inputs always produce the same tag.
Bytes signature_tag_of(const Name& name, std::span<const std::uint8_t> payload, const Name& key_id);

/// Builds a Data whose tag verifies against its own key_id.
Data make_signed_data(Name name, Bytes payload, Duration freshness_us, Name key_id);

/// Provenance check: key_id is covered by some trust anchor (anchor is a
/// prefix of, or equal to, key_id) and the tag matches the recomputed one.
bool verify(const Data& data, const std::set<Name>& trust_anchors);

}  // namespace icnsim
