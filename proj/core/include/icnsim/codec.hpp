#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>

#include "icnsim/packet.hpp"

namespace icnsim {

struct EncodingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MalformedPacket : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Wire format: every element is TLV with a 1-byte type, a 2-byte big-endian
// length and the value. Sub-TLVs appear in ascending type order; optional
// TLVs are omitted when absent.
namespace tlv {
inline constexpr std::uint8_t kInterest = 0x01;
inline constexpr std::uint8_t kData = 0x02;
inline constexpr std::uint8_t kName = 0x10;
inline constexpr std::uint8_t kComponent = 0x11;
inline constexpr std::uint8_t kNonce = 0x12;
inline constexpr std::uint8_t kLifetime = 0x13;
inline constexpr std::uint8_t kHopLimit = 0x14;
inline constexpr std::uint8_t kForwardingHint = 0x15;
inline constexpr std::uint8_t kContextEntry = 0x16;
inline constexpr std::uint8_t kString = 0x17;
inline constexpr std::uint8_t kPayload = 0x20;
inline constexpr std::uint8_t kFreshness = 0x21;
inline constexpr std::uint8_t kKeyId = 0x22;
inline constexpr std::uint8_t kSignatureTag = 0x23;
}  // namespace tlv

/// Deterministic encoding: the same packet always yields the same bytes.
/// Throws EncodingError when any value exceeds the 16-bit length field.
Bytes encode(const Packet& packet);

/// Exact inverse of encode on valid inputs. Throws MalformedPacket on
/// truncation, unknown or out-of-order TLVs, bad fixed-width fields, and
/// trailing bytes.
Packet decode(std::span<const std::uint8_t> bytes);

std::size_t encoded_size(const Packet& packet);

// Low-level helpers shared by other wire payloads (discovery responses).
void append_tlv(Bytes& out, std::uint8_t type, std::span<const std::uint8_t> value);
Bytes encode_name_tlv(const Name& name);

/// Cursor over a TLV sequence. Throws MalformedPacket on truncation.
class TlvReader {
 public:
  explicit TlvReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  bool at_end() const { return pos_ == bytes_.size(); }
  /// Type of the next TLV without consuming it.
  std::uint8_t peek_type() const;
  /// Reads one TLV, returning its value slice.
  std::pair<std::uint8_t, std::span<const std::uint8_t>> next();

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

Name decode_name_value(std::span<const std::uint8_t> value);

}  // namespace icnsim
