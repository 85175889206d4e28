#include "icnsim/codec.hpp"

#include <cstring>

namespace icnsim {

namespace {

constexpr std::size_t kMaxValueLen = 0xFFFF;

void append_be(Bytes& out, std::uint64_t v, int width) {
  for (int i = width - 1; i >= 0; --i) {
    out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
  }
}

std::uint64_t read_be(std::span<const std::uint8_t> v) {
  std::uint64_t out = 0;
  for (auto b : v) {
    out = (out << 8) | b;
  }
  return out;
}

Bytes encode_string_tlv(const std::string& s) {
  if (s.size() > kMaxValueLen) {
    throw EncodingError("string value too long");
  }
  Bytes out;
  out.push_back(tlv::kString);
  append_be(out, s.size(), 2);
  out.insert(out.end(), s.begin(), s.end());
  return out;
}

Bytes encode_interest_value(const Interest& in) {
  Bytes v;
  Bytes name = encode_name_tlv(in.name);
  v.insert(v.end(), name.begin(), name.end());

  v.push_back(tlv::kNonce);
  append_be(v, 4, 2);
  append_be(v, in.nonce, 4);

  v.push_back(tlv::kLifetime);
  append_be(v, 8, 2);
  append_be(v, in.lifetime_us, 8);

  v.push_back(tlv::kHopLimit);
  append_be(v, 1, 2);
  v.push_back(in.hop_limit);

  if (in.forwarding_hint) {
    Bytes hint = encode_name_tlv(*in.forwarding_hint);
    v.push_back(tlv::kForwardingHint);
    append_be(v, hint.size(), 2);
    v.insert(v.end(), hint.begin(), hint.end());
  }
  for (const auto& [key, value] : in.context) {
    Bytes entry = encode_string_tlv(key);
    Bytes val = encode_string_tlv(value);
    entry.insert(entry.end(), val.begin(), val.end());
    if (entry.size() > kMaxValueLen) {
      throw EncodingError("context entry too long");
    }
    v.push_back(tlv::kContextEntry);
    append_be(v, entry.size(), 2);
    v.insert(v.end(), entry.begin(), entry.end());
  }
  return v;
}

Bytes encode_data_value(const Data& d) {
  Bytes v;
  Bytes name = encode_name_tlv(d.name);
  v.insert(v.end(), name.begin(), name.end());

  if (d.payload.size() > kMaxValueLen) {
    throw EncodingError("payload too long");
  }
  v.push_back(tlv::kPayload);
  append_be(v, d.payload.size(), 2);
  v.insert(v.end(), d.payload.begin(), d.payload.end());

  v.push_back(tlv::kFreshness);
  append_be(v, 8, 2);
  append_be(v, d.freshness_us, 8);

  Bytes key = encode_name_tlv(d.key_id);
  v.push_back(tlv::kKeyId);
  append_be(v, key.size(), 2);
  v.insert(v.end(), key.begin(), key.end());

  if (d.signature_tag.size() > kMaxValueLen) {
    throw EncodingError("signature tag too long");
  }
  v.push_back(tlv::kSignatureTag);
  append_be(v, d.signature_tag.size(), 2);
  v.insert(v.end(), d.signature_tag.begin(), d.signature_tag.end());
  return v;
}

}  // namespace

void append_tlv(Bytes& out, std::uint8_t type, std::span<const std::uint8_t> value) {
  if (value.size() > kMaxValueLen) {
    throw EncodingError("TLV value too long");
  }
  out.push_back(type);
  append_be(out, value.size(), 2);
  out.insert(out.end(), value.begin(), value.end());
}

Bytes encode_name_tlv(const Name& name) {
  Bytes inner;
  for (const auto& c : name.components()) {
    if (c.size() > kMaxValueLen) {
      throw EncodingError("name component too long");
    }
    inner.push_back(tlv::kComponent);
    append_be(inner, c.size(), 2);
    inner.insert(inner.end(), c.begin(), c.end());
  }
  Bytes out;
  append_tlv(out, tlv::kName, inner);
  return out;
}

std::uint8_t TlvReader::peek_type() const {
  if (pos_ >= bytes_.size()) {
    throw MalformedPacket("peek past end of TLV sequence");
  }
  return bytes_[pos_];
}

std::pair<std::uint8_t, std::span<const std::uint8_t>> TlvReader::next() {
  if (bytes_.size() - pos_ < 3) {
    throw MalformedPacket("truncated TLV header");
  }
  std::uint8_t type = bytes_[pos_];
  std::size_t len = (static_cast<std::size_t>(bytes_[pos_ + 1]) << 8) | bytes_[pos_ + 2];
  pos_ += 3;
  if (bytes_.size() - pos_ < len) {
    throw MalformedPacket("truncated TLV value");
  }
  auto value = bytes_.subspan(pos_, len);
  pos_ += len;
  return {type, value};
}

Name decode_name_value(std::span<const std::uint8_t> value) {
  TlvReader reader(value);
  std::vector<std::string> components;
  while (!reader.at_end()) {
    auto [type, cval] = reader.next();
    if (type != tlv::kComponent) {
      throw MalformedPacket("expected Component TLV inside Name");
    }
    components.emplace_back(cval.begin(), cval.end());
  }
  if (components.empty()) {
    throw MalformedPacket("Name TLV with no components");
  }
  for (const auto& c : components) {
    if (c.empty() || c.find('/') != std::string::npos) {
      throw MalformedPacket("invalid name component on wire");
    }
  }
  return Name(std::move(components));
}

namespace {

Name expect_name(TlvReader& reader, std::uint8_t wrapper) {
  auto [type, value] = reader.next();
  if (type != wrapper) {
    throw MalformedPacket("expected Name-bearing TLV");
  }
  if (wrapper == tlv::kName) {
    return decode_name_value(value);
  }
  // nested: value holds a full Name TLV
  TlvReader inner(value);
  auto [itype, ivalue] = inner.next();
  if (itype != tlv::kName || !inner.at_end()) {
    throw MalformedPacket("expected nested Name TLV");
  }
  return decode_name_value(ivalue);
}

std::string decode_string_tlv(TlvReader& reader) {
  auto [type, value] = reader.next();
  if (type != tlv::kString) {
    throw MalformedPacket("expected String TLV");
  }
  return std::string(value.begin(), value.end());
}

Interest decode_interest(std::span<const std::uint8_t> value) {
  TlvReader reader(value);
  Interest in;
  in.name = expect_name(reader, tlv::kName);

  auto [ntype, nval] = reader.next();
  if (ntype != tlv::kNonce || nval.size() != 4) {
    throw MalformedPacket("bad Nonce TLV");
  }
  in.nonce = static_cast<std::uint32_t>(read_be(nval));

  auto [ltype, lval] = reader.next();
  if (ltype != tlv::kLifetime || lval.size() != 8) {
    throw MalformedPacket("bad Lifetime TLV");
  }
  in.lifetime_us = read_be(lval);

  auto [htype, hval] = reader.next();
  if (htype != tlv::kHopLimit || hval.size() != 1) {
    throw MalformedPacket("bad HopLimit TLV");
  }
  in.hop_limit = hval[0];

  if (!reader.at_end() && reader.peek_type() == tlv::kForwardingHint) {
    auto [ftype, fval] = reader.next();
    TlvReader inner(fval);
    auto [itype, ivalue] = inner.next();
    if (itype != tlv::kName || !inner.at_end()) {
      throw MalformedPacket("bad ForwardingHint TLV");
    }
    in.forwarding_hint = decode_name_value(ivalue);
  }
  while (!reader.at_end()) {
    auto [ctype, cval] = reader.next();
    if (ctype != tlv::kContextEntry) {
      throw MalformedPacket("unexpected TLV in Interest");
    }
    TlvReader entry(cval);
    std::string key = decode_string_tlv(entry);
    std::string val = decode_string_tlv(entry);
    if (!entry.at_end()) {
      throw MalformedPacket("trailing bytes in ContextEntry");
    }
    // canonical form requires strictly ascending keys
    if (!in.context.empty() && key <= in.context.rbegin()->first) {
      throw MalformedPacket("context entries out of order");
    }
    in.context.emplace(std::move(key), std::move(val));
  }
  return in;
}

Data decode_data(std::span<const std::uint8_t> value) {
  TlvReader reader(value);
  Data d;
  d.name = expect_name(reader, tlv::kName);

  auto [ptype, pval] = reader.next();
  if (ptype != tlv::kPayload) {
    throw MalformedPacket("bad Payload TLV");
  }
  d.payload.assign(pval.begin(), pval.end());

  auto [ftype, fval] = reader.next();
  if (ftype != tlv::kFreshness || fval.size() != 8) {
    throw MalformedPacket("bad Freshness TLV");
  }
  d.freshness_us = read_be(fval);

  d.key_id = expect_name(reader, tlv::kKeyId);

  auto [stype, sval] = reader.next();
  if (stype != tlv::kSignatureTag) {
    throw MalformedPacket("bad SignatureTag TLV");
  }
  d.signature_tag.assign(sval.begin(), sval.end());

  if (!reader.at_end()) {
    throw MalformedPacket("trailing bytes in Data");
  }
  return d;
}

}  // namespace

Bytes encode(const Packet& packet) {
  Bytes value;
  std::uint8_t type;
  if (const auto* in = std::get_if<Interest>(&packet)) {
    value = encode_interest_value(*in);
    type = tlv::kInterest;
  } else {
    value = encode_data_value(std::get<Data>(packet));
    type = tlv::kData;
  }
  Bytes out;
  append_tlv(out, type, value);
  return out;
}

std::size_t encoded_size(const Packet& packet) { return encode(packet).size(); }

Packet decode(std::span<const std::uint8_t> bytes) {
  TlvReader reader(bytes);
  auto [type, value] = reader.next();
  if (!reader.at_end()) {
    throw MalformedPacket("trailing bytes after packet");
  }
  switch (type) {
    case tlv::kInterest:
      return decode_interest(value);
    case tlv::kData:
      return decode_data(value);
    default:
      throw MalformedPacket("unknown top-level packet type");
  }
}

}  // namespace icnsim
