#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "icnsim/name.hpp"
#include "icnsim/substrate.hpp"
#include "icnsim/time.hpp"

namespace icnsim {

enum class ServiceType { base, mobility, conference };
enum class NetworkService { reachability, security, mobility, multicast, storage };
enum class VnfKind { icn_forwarder, msa, nrs, conf_service_fn, discovery_fn };

const char* to_string(ServiceType t);
const char* to_string(VnfKind k);
std::optional<ServiceType> parse_service_type(const std::string& text);
std::optional<NetworkService> parse_network_service(const std::string& text);

struct Sla {
  Duration latency_bound_us = 10'000;
  std::uint64_t bandwidth_floor_bps = 1'000'000;
};

struct ParticipantGroup {
  NodeId location;       // PoA region
  std::uint32_t count = 0;
};

/// FP1 service request in its minimal machine-checkable form: a declarative
/// record, not a DSL.
struct Intent {
  ServiceType service_type = ServiceType::conference;
  std::vector<ParticipantGroup> participants;
  Sla sla;
  std::set<NetworkService> network_services;
  std::uint32_t demand_rps = 10;  // expected requests/s
  Name name_space;                // conference namespace ("/conf1")
  // scenario-tunable knobs with deterministic defaults
  std::optional<std::uint64_t> gateway_cs_bytes;
  Duration redirect_grace_us = kDefaultRedirectGraceUs;
};

struct VnfAlloc {
  std::uint32_t cpu = 0;
  std::uint64_t storage_bytes = 0;
  std::uint64_t cs_capacity_bytes = 0;  // counted against node storage

  std::uint64_t storage_total() const { return storage_bytes + cs_capacity_bytes; }
};

struct VnfDemand {
  VnfKind kind = VnfKind::icn_forwarder;
  VnfAlloc alloc;
  std::string label;                   // e.g. "gateway:bs-a"
  std::optional<NodeId> pin;           // must be placed exactly here
  std::optional<NodeId> near;          // UE-to-host latency bound applies from this PoA
};

struct ResourceRequest {
  ServiceType service_type = ServiceType::conference;
  Name name_space;
  std::vector<VnfDemand> demands;
  Sla sla;
  Duration redirect_grace_us = kDefaultRedirectGraceUs;
};

struct PlacementItem {
  VnfKind kind = VnfKind::icn_forwarder;
  std::string label;
  NodeId node;
  VnfAlloc alloc;
};

struct Placement {
  std::vector<PlacementItem> items;
};

struct InsufficientResources {
  VnfKind kind = VnfKind::icn_forwarder;
  std::string label;
  std::string reason;
};

struct Unsupported {
  std::string detail;
};

/// Deterministic mapping from service requirements to data-plane resource
/// requirements. Base slices are bootstrapped separately because their
/// demand set depends on the substrate's PoA list, not on the intent.
std::variant<ResourceRequest, Unsupported> translate_intent(const Intent& intent);

struct NodeUsage {
  std::uint32_t cpu = 0;
  std::uint64_t storage = 0;

  auto operator<=>(const NodeUsage&) const = default;
};

struct PlacementInput {
  const Substrate* substrate = nullptr;
  std::map<NodeId, NodeUsage> used;  // current allocations
  Duration radio_latency_us = 1'000;
  std::uint64_t radio_bandwidth_bps = 50'000'000;
};

/// Greedy first-fit: per demand, candidates satisfying the placement
/// constraints are ordered by (most free cpu, then node id) and the first
/// with room wins. Latency constraints are checked against shortest-path
/// latencies plus the radio hop; bandwidth floors against path bottlenecks.
std::variant<Placement, InsufficientResources> place(const ResourceRequest& request,
                                                     const PlacementInput& input);

/// Validates a placement against capacities and constraints; returns an
/// explanation for the first violation, if any.
std::optional<std::string> validate_placement(const ResourceRequest& request,
                                              const Placement& placement,
                                              const PlacementInput& input);

}  // namespace icnsim
