#pragma once

#include <optional>
#include <set>
#include <variant>

#include "icnsim/nrs.hpp"
#include "icnsim/packet.hpp"

namespace icnsim {

struct ResolutionFailed {};

/// Mobility Service Agent: resolution front-end other slices call into.
/// Late binding attaches the locator as forwarding hint; the application
/// name is never rewritten.
class Msa {
 public:
  void enable_prefix(const Name& prefix) { enabled_.insert(prefix); }
  void disable_prefix(const Name& prefix) { enabled_.erase(prefix); }
  const std::set<Name>& enabled_prefixes() const { return enabled_; }

  /// On an NRS hit, a copy of the Interest with forwarding_hint set.
  /// Precondition: the Interest carries no hint yet.
  std::variant<Interest, ResolutionFailed> resolve(const Interest& interest,
                                                   const Nrs& nrs) const;

 private:
  std::set<Name> enabled_;
};

// Wire naming for mobility signaling. All exchanges ride ordinary
// Interest/Data packets under /mobility so signaling cost shows up in the
// same metrics as data traffic.
namespace mobility_wire {

inline const Name& msa_prefix() {
  static const Name n{"mobility", "msa"};
  return n;
}
inline const Name& nrs_prefix() {
  static const Name n{"mobility", "nrs"};
  return n;
}

Name make_msa_resolve_name(const Name& app_name);
std::optional<Name> parse_msa_resolve_name(const Name& wire_name);

Name make_nrs_resolve_name(const Name& app_name);
std::optional<Name> parse_nrs_resolve_name(const Name& wire_name);

Name make_nrs_register_name(std::uint64_t seq, const Name& app_name);
Name make_nrs_deregister_name(std::uint64_t seq, const Name& app_name);

/// Redirect notification sent by the NRS to a stale point of attachment,
/// named under that node's own locator.
Name make_redirect_notify_name(const Name& poa_locator, std::uint64_t seq);

/// Payload of resolution responses: a locator TLV or a not-found marker.
Bytes encode_locator_payload(const std::optional<Name>& locator);
std::optional<Name> decode_locator_payload(const Bytes& payload);

}  // namespace mobility_wire

}  // namespace icnsim
