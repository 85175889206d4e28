#include <algorithm>

#include "icnsim/intent.hpp"

namespace icnsim {

const char* to_string(ServiceType t) {
  switch (t) {
    case ServiceType::base:
      return "base";
    case ServiceType::mobility:
      return "mobility";
    case ServiceType::conference:
      return "conference";
  }
  return "?";
}

const char* to_string(VnfKind k) {
  switch (k) {
    case VnfKind::icn_forwarder:
      return "icn_forwarder";
    case VnfKind::msa:
      return "msa";
    case VnfKind::nrs:
      return "nrs";
    case VnfKind::conf_service_fn:
      return "conf_service_fn";
    case VnfKind::discovery_fn:
      return "discovery_fn";
  }
  return "?";
}

std::optional<ServiceType> parse_service_type(const std::string& text) {
  if (text == "base") return ServiceType::base;
  if (text == "mobility") return ServiceType::mobility;
  if (text == "conference") return ServiceType::conference;
  return std::nullopt;
}

std::optional<NetworkService> parse_network_service(const std::string& text) {
  if (text == "reachability") return NetworkService::reachability;
  if (text == "security") return NetworkService::security;
  if (text == "mobility") return NetworkService::mobility;
  if (text == "multicast") return NetworkService::multicast;
  if (text == "storage") return NetworkService::storage;
  return std::nullopt;
}

namespace {

constexpr std::uint64_t kServiceFnStorage = 1'000'000;

VnfAlloc gateway_alloc(const Intent& intent) {
  VnfAlloc alloc;
  alloc.cpu = 1 + intent.demand_rps / 100;
  alloc.storage_bytes = kServiceFnStorage;
  alloc.cs_capacity_bytes =
      intent.gateway_cs_bytes.value_or(std::max<std::uint64_t>(65'536, intent.demand_rps * 2'400));
  return alloc;
}

VnfAlloc service_fn_alloc() { return VnfAlloc{1, kServiceFnStorage, 0}; }

}  // namespace

std::variant<ResourceRequest, Unsupported> translate_intent(const Intent& intent) {
  ResourceRequest req;
  req.service_type = intent.service_type;
  req.sla = intent.sla;
  req.redirect_grace_us = intent.redirect_grace_us;

  switch (intent.service_type) {
    case ServiceType::mobility: {
      req.name_space = intent.name_space.empty() ? Name{"mobility"} : intent.name_space;
      req.demands.push_back(VnfDemand{VnfKind::nrs, service_fn_alloc(), "nrs", {}, {}});
      req.demands.push_back(VnfDemand{VnfKind::msa, service_fn_alloc(), "msa", {}, {}});
      return req;
    }
    case ServiceType::conference: {
      if (intent.participants.empty()) {
        return Unsupported{"conference intent needs at least one participant group"};
      }
      if (intent.name_space.empty()) {
        return Unsupported{"conference intent needs a name_space"};
      }
      req.name_space = intent.name_space;
      // one gateway forwarder per participant region, then the service logic
      for (const auto& group : intent.participants) {
        VnfDemand d;
        d.kind = VnfKind::icn_forwarder;
        d.alloc = gateway_alloc(intent);
        d.label = "gateway:" + group.location;
        d.near = group.location;
        req.demands.push_back(std::move(d));
      }
      req.demands.push_back(
          VnfDemand{VnfKind::conf_service_fn, service_fn_alloc(), "conf_service", {}, {}});
      return req;
    }
    case ServiceType::base:
      return Unsupported{"base slices are bootstrapped, not translated"};
  }
  return Unsupported{"unknown service type"};
}

namespace {

struct FreeView {
  std::uint32_t cpu;
  std::uint64_t storage;
};

FreeView free_on(const PhysNode& node, const std::map<NodeId, NodeUsage>& used) {
  FreeView f{node.cpu_capacity, node.storage_capacity};
  auto it = used.find(node.id);
  if (it != used.end()) {
    f.cpu = (it->second.cpu > f.cpu) ? 0 : f.cpu - it->second.cpu;
    f.storage = (it->second.storage > f.storage) ? 0 : f.storage - it->second.storage;
  }
  return f;
}

}  // namespace

std::variant<Placement, InsufficientResources> place(const ResourceRequest& request,
                                                     const PlacementInput& input) {
  const Substrate& substrate = *input.substrate;
  auto used = input.used;  // tentative commits as we walk the demand list
  Placement placement;

  for (const auto& demand : request.demands) {
    std::vector<const PhysNode*> candidates;
    bool any_constraint_ok = false;
    for (const auto& [id, node] : substrate.nodes()) {
      if (demand.pin && *demand.pin != id) {
        continue;
      }
      if (demand.near) {
        auto lat = substrate.path_latency(*demand.near, id);
        if (!lat || input.radio_latency_us + *lat > request.sla.latency_bound_us) {
          continue;
        }
        auto path = substrate.shortest_path(*demand.near, id);
        std::uint64_t bottleneck =
            std::min(path->bottleneck_bps, input.radio_bandwidth_bps);
        if (bottleneck < request.sla.bandwidth_floor_bps) {
          continue;
        }
      }
      any_constraint_ok = true;
      candidates.push_back(&node);
    }
    if (!any_constraint_ok) {
      return InsufficientResources{demand.kind, demand.label,
                                   "no node satisfies placement constraints"};
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](const PhysNode* a, const PhysNode* b) {
                       auto fa = free_on(*a, used);
                       auto fb = free_on(*b, used);
                       if (fa.cpu != fb.cpu) {
                         return fa.cpu > fb.cpu;
                       }
                       return a->id < b->id;
                     });
    const PhysNode* chosen = nullptr;
    for (const PhysNode* node : candidates) {
      auto free = free_on(*node, used);
      if (free.cpu >= demand.alloc.cpu && free.storage >= demand.alloc.storage_total()) {
        chosen = node;
        break;
      }
    }
    if (chosen == nullptr) {
      return InsufficientResources{demand.kind, demand.label, "insufficient cpu or storage"};
    }
    used[chosen->id].cpu += demand.alloc.cpu;
    used[chosen->id].storage += demand.alloc.storage_total();
    placement.items.push_back(PlacementItem{demand.kind, demand.label, chosen->id, demand.alloc});
  }

  // inter-gateway bandwidth floor (virtual link feasibility)
  std::vector<const PlacementItem*> gateways;
  for (const auto& item : placement.items) {
    if (item.kind == VnfKind::icn_forwarder) {
      gateways.push_back(&item);
    }
  }
  for (std::size_t i = 0; i < gateways.size(); ++i) {
    for (std::size_t j = i + 1; j < gateways.size(); ++j) {
      auto path = substrate.shortest_path(gateways[i]->node, gateways[j]->node);
      if (!path) {
        return InsufficientResources{VnfKind::icn_forwarder, gateways[j]->label,
                                     "no path between gateways"};
      }
      if (!path->links.empty() && path->bottleneck_bps < request.sla.bandwidth_floor_bps) {
        return InsufficientResources{VnfKind::icn_forwarder, gateways[j]->label,
                                     "gateway mesh below bandwidth floor"};
      }
    }
  }
  return placement;
}

std::optional<std::string> validate_placement(const ResourceRequest& request,
                                              const Placement& placement,
                                              const PlacementInput& input) {
  if (placement.items.size() != request.demands.size()) {
    return "placement item count differs from demand count";
  }
  auto used = input.used;
  for (std::size_t i = 0; i < placement.items.size(); ++i) {
    const auto& item = placement.items[i];
    const auto& demand = request.demands[i];
    const PhysNode* node = input.substrate->node(item.node);
    if (node == nullptr) {
      return "placement on unknown node " + item.node;
    }
    if (demand.pin && *demand.pin != item.node) {
      return "pinned demand placed elsewhere: " + demand.label;
    }
    if (demand.near) {
      auto lat = input.substrate->path_latency(*demand.near, item.node);
      if (!lat || input.radio_latency_us + *lat > request.sla.latency_bound_us) {
        return "latency constraint violated: " + demand.label;
      }
    }
    used[item.node].cpu += item.alloc.cpu;
    used[item.node].storage += item.alloc.storage_total();
    if (used[item.node].cpu > node->cpu_capacity ||
        used[item.node].storage > node->storage_capacity) {
      return "capacity exceeded on " + item.node;
    }
  }
  return std::nullopt;
}

}  // namespace icnsim
