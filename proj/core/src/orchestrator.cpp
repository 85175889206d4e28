#include "icnsim/orchestrator.hpp"

#include <algorithm>

namespace icnsim {

const char* to_string(OrchError::Kind kind) {
  switch (kind) {
    case OrchError::Kind::Unsupported:
      return "Unsupported";
    case OrchError::Kind::AlreadyActive:
      return "AlreadyActive";
    case OrchError::Kind::InsufficientResources:
      return "InsufficientResources";
    case OrchError::Kind::NamespaceConflict:
      return "NamespaceConflict";
    case OrchError::Kind::NotFound:
      return "NotFound";
    case OrchError::Kind::Rejected:
      return "Rejected";
    case OrchError::Kind::PreconditionFailed:
      return "PreconditionFailed";
  }
  return "?";
}

const Name& Orchestrator::base_ns() {
  static const Name n{"base"};
  return n;
}

const Name& Orchestrator::mobility_ns() {
  static const Name n{"mobility"};
  return n;
}

namespace {

const std::vector<Name>& reserved_namespaces() {
  static const std::vector<Name> reserved{
      Name{"base"}, Name{"mobility"}, Name{"discovery"}, Name{"trust"}, Name{"poa"}};
  return reserved;
}

bool overlaps(const Name& a, const Name& b) {
  return a.is_prefix_of(b) || b.is_prefix_of(a);
}

}  // namespace

Orchestrator::Orchestrator(const Substrate& substrate, SliceController& controller,
                           OrchConfig config)
    : substrate_(substrate), controller_(controller), config_(config) {}

const Slice* Orchestrator::find_slice(const Name& ns) const {
  auto it = slices_.find(ns);
  return it == slices_.end() ? nullptr : &it->second;
}

bool Orchestrator::slice_active(const Name& ns) const {
  const Slice* s = find_slice(ns);
  return s != nullptr && s->status == SliceStatus::active;
}

const SliceContext* Orchestrator::context(const Name& ns) const {
  auto it = contexts_.find(ns);
  return it == contexts_.end() ? nullptr : &it->second;
}

const std::vector<ConfMember>* Orchestrator::members(const Name& ns) const {
  auto it = members_.find(ns);
  return it == members_.end() ? nullptr : &it->second;
}

bool Orchestrator::mobility_enabled(const Name& prefix) const {
  return mobile_prefixes_.count(prefix) > 0;
}

std::vector<Name> Orchestrator::mobile_prefixes_of(const UeId& ue) const {
  std::vector<Name> out;
  for (const auto& [ns, members] : members_) {
    for (const auto& m : members) {
      if (m.ue == ue && mobile_prefixes_.count(m.prefix) > 0) {
        out.push_back(m.prefix);
      }
    }
  }
  return out;
}

std::uint64_t Orchestrator::bump_seq(const Name& prefix) { return ++seq_counters_[prefix]; }

Duration Orchestrator::redirect_grace_us() const { return mobility_grace_us_; }

std::optional<OrchError> Orchestrator::check_namespace(const Name& ns) const {
  if (ns.empty()) {
    return OrchError{OrchError::Kind::Unsupported, "empty name_space"};
  }
  for (const auto& reserved : reserved_namespaces()) {
    if (overlaps(reserved, ns)) {
      return OrchError{OrchError::Kind::NamespaceConflict,
                       "namespace overlaps reserved " + reserved.to_string()};
    }
  }
  for (const auto& [other_ns, slice] : slices_) {
    if (slice.status == SliceStatus::active && overlaps(other_ns, ns)) {
      return OrchError{OrchError::Kind::NamespaceConflict,
                       "namespace overlaps active slice " + other_ns.to_string()};
    }
  }
  return std::nullopt;
}

void Orchestrator::commit_alloc(const NodeId& node, const VnfAlloc& alloc) {
  used_[node].cpu += alloc.cpu;
  used_[node].storage += alloc.storage_total();
}

void Orchestrator::release_alloc(const NodeId& node, const VnfAlloc& alloc) {
  auto& u = used_[node];
  u.cpu -= std::min(u.cpu, alloc.cpu);
  u.storage -= std::min(u.storage, alloc.storage_total());
}

FaceId Orchestrator::face_between(const std::string& from, const std::string& to) const {
  auto it = vlink_faces_.find({from, to});
  if (it != vlink_faces_.end()) {
    return it->second.first;
  }
  it = vlink_faces_.find({to, from});
  if (it != vlink_faces_.end()) {
    return it->second.second;
  }
  throw SimulationBug("no vlink between " + from + " and " + to);
}

std::pair<FaceId, FaceId> Orchestrator::make_vlink(const Name& ns, Slice& slice,
                                                   const std::string& a, const std::string& b) {
  if (vlink_faces_.count({a, b}) > 0) {
    return vlink_faces_.at({a, b});
  }
  if (vlink_faces_.count({b, a}) > 0) {
    auto [fb, fa] = vlink_faces_.at({b, a});
    return {fa, fb};
  }
  auto faces = controller_.vlink_up(ns, a, b);
  vlink_faces_[{a, b}] = faces;
  slice.vlinks.emplace_back(a, b);
  return faces;
}

void Orchestrator::record_fib(SliceContext& ctx, const Name& ns, const std::string& vnf,
                              const Name& prefix, FaceId face, std::uint32_t cost) {
  controller_.fib_install(ns, vnf, prefix, face, cost);
  ctx.rules.push_back(RuleRecord{RuleRecord::Kind::fib, vnf, prefix});
}

void Orchestrator::record_anchor(SliceContext& ctx, const Name& ns, const std::string& vnf,
                                 const Name& anchor) {
  controller_.anchor_add(ns, vnf, anchor);
  ctx.rules.push_back(RuleRecord{RuleRecord::Kind::anchor, vnf, anchor});
}

NodeId Orchestrator::nearest_poa(const NodeId& node) const {
  NodeId best;
  Duration best_lat = 0;
  for (const auto& poa : substrate_.poa_nodes()) {
    auto lat = substrate_.path_latency(node, poa);
    if (!lat) {
      continue;
    }
    if (best.empty() || *lat < best_lat || (*lat == best_lat && poa < best)) {
      best = poa;
      best_lat = *lat;
    }
  }
  if (best.empty()) {
    throw SimulationBug("no PoA reachable from " + node);
  }
  return best;
}

Orchestrator::SliceResult Orchestrator::submit_intent(const Intent& intent) {
  switch (intent.service_type) {
    case ServiceType::base:
      return bootstrap_base_slice();
    case ServiceType::mobility:
      return create_mobility_slice(intent);
    case ServiceType::conference:
      return create_conference_slice(intent);
  }
  return OrchError{OrchError::Kind::Unsupported, "unknown service type"};
}

Orchestrator::SliceResult Orchestrator::bootstrap_base_slice() {
  const Name& ns = base_ns();
  if (slice_active(ns)) {
    return OrchError{OrchError::Kind::AlreadyActive, "base slice already active"};
  }
  auto poas = substrate_.poa_nodes();
  if (poas.empty()) {
    return OrchError{OrchError::Kind::Unsupported, "substrate has no PoA nodes"};
  }

  ResourceRequest req;
  req.service_type = ServiceType::base;
  req.name_space = ns;
  req.sla = Sla{};
  for (const auto& poa : poas) {
    VnfDemand d;
    d.kind = VnfKind::icn_forwarder;
    d.alloc = VnfAlloc{config_.base_fwd_cpu, config_.base_fwd_storage, config_.base_fwd_cs_bytes};
    d.label = "fwd:" + poa;
    d.pin = poa;
    req.demands.push_back(std::move(d));
  }
  req.demands.push_back(
      VnfDemand{VnfKind::discovery_fn, VnfAlloc{1, 1'000'000, 0}, "discovery", {}, {}});

  PlacementInput input{&substrate_, used_, config_.radio_latency_us, config_.radio_bandwidth_bps};
  auto placed = place(req, input);
  if (auto* fail = std::get_if<InsufficientResources>(&placed)) {
    controller_.slice_rejected(ns, fail->reason);
    return OrchError{OrchError::Kind::InsufficientResources, fail->label + ": " + fail->reason};
  }
  const Placement& placement = std::get<Placement>(placed);

  Slice slice;
  slice.name_space = ns;
  slice.kind = ServiceType::base;
  SliceContext ctx;
  ctx.name_space = ns;

  std::string discovery_vnf;
  for (const auto& item : placement.items) {
    std::string id = controller_.vnf_up(ns, item.kind, item.node, item.alloc, item.label);
    commit_alloc(item.node, item.alloc);
    slice.vnfs.push_back(VnfInstance{id, item.kind, item.node, item.alloc, ns, item.label});
    ctx.vnf_nodes[id] = item.node;
    if (item.kind == VnfKind::icn_forwarder) {
      base_fwd_[item.node] = id;
    } else {
      discovery_vnf = id;
    }
  }

  // full mesh between base forwarders; locator routes ride it
  for (auto a = base_fwd_.begin(); a != base_fwd_.end(); ++a) {
    for (auto b = std::next(a); b != base_fwd_.end(); ++b) {
      make_vlink(ns, slice, a->second, b->second);
    }
  }
  for (const auto& [poa_p, fwd_p] : base_fwd_) {
    for (const auto& [poa_q, fwd_q] : base_fwd_) {
      if (poa_p == poa_q) {
        continue;
      }
      auto lat = substrate_.path_latency(poa_p, poa_q);
      record_fib(ctx, ns, fwd_p, substrate_.node(poa_q)->locator_prefix,
                 face_between(fwd_p, fwd_q),
                 static_cast<std::uint32_t>(lat.value_or(1'000'000)));
    }
  }

  // discovery function anchors at the base forwarder nearest its host
  const NodeId disc_node = ctx.vnf_nodes.at(discovery_vnf);
  const NodeId anchor_poa = nearest_poa(disc_node);
  const std::string& anchor_fwd = base_fwd_.at(anchor_poa);
  auto [anchor_face, _] = make_vlink(ns, slice, anchor_fwd, discovery_vnf);
  static const Name kDiscovery{"discovery"};
  static const Name kTrust{"trust"};
  record_fib(ctx, ns, anchor_fwd, kDiscovery, anchor_face, 0);
  record_fib(ctx, ns, anchor_fwd, kTrust, anchor_face, 0);
  for (const auto& [poa, fwd] : base_fwd_) {
    if (fwd == anchor_fwd) {
      continue;
    }
    FaceId toward = face_between(fwd, anchor_fwd);
    auto lat = substrate_.path_latency(poa, anchor_poa);
    auto cost = static_cast<std::uint32_t>(lat.value_or(1'000'000));
    record_fib(ctx, ns, fwd, kDiscovery, toward, cost);
    record_fib(ctx, ns, fwd, kTrust, toward, cost);
  }

  slice.status = SliceStatus::active;
  slices_[ns] = std::move(slice);
  contexts_[ns] = std::move(ctx);
  controller_.slice_active(ns, ServiceType::base);
  return &slices_.at(ns);
}

void Orchestrator::install_mobility_reach_rules_for_gateway(const std::string& gw_vnf,
                                                            FaceId uplink_face) {
  auto ctx_it = contexts_.find(mobility_ns());
  if (ctx_it == contexts_.end()) {
    return;
  }
  record_fib(ctx_it->second, mobility_ns(), gw_vnf, mobility_ns(), uplink_face, 0);
}

Orchestrator::SliceResult Orchestrator::create_mobility_slice(const Intent& intent) {
  const Name& ns = mobility_ns();
  if (slice_active(ns)) {
    return OrchError{OrchError::Kind::AlreadyActive, "mobility slice already active"};
  }
  if (!slice_active(base_ns())) {
    return OrchError{OrchError::Kind::PreconditionFailed, "base slice not active"};
  }

  auto translated = translate_intent(intent);
  if (auto* unsupported = std::get_if<Unsupported>(&translated)) {
    return OrchError{OrchError::Kind::Unsupported, unsupported->detail};
  }
  ResourceRequest& req = std::get<ResourceRequest>(translated);
  req.name_space = ns;

  PlacementInput input{&substrate_, used_, config_.radio_latency_us, config_.radio_bandwidth_bps};
  auto placed = place(req, input);
  if (auto* fail = std::get_if<InsufficientResources>(&placed)) {
    controller_.slice_rejected(ns, fail->reason);
    return OrchError{OrchError::Kind::InsufficientResources, fail->label + ": " + fail->reason};
  }
  const Placement& placement = std::get<Placement>(placed);

  Slice slice;
  slice.name_space = ns;
  slice.kind = ServiceType::mobility;
  SliceContext ctx;
  ctx.name_space = ns;
  ctx.redirect_grace_us = intent.redirect_grace_us;
  mobility_grace_us_ = intent.redirect_grace_us;

  for (const auto& item : placement.items) {
    std::string id = controller_.vnf_up(ns, item.kind, item.node, item.alloc, item.label);
    commit_alloc(item.node, item.alloc);
    slice.vnfs.push_back(VnfInstance{id, item.kind, item.node, item.alloc, ns, item.label});
    ctx.vnf_nodes[id] = item.node;
    if (item.kind == VnfKind::nrs) {
      nrs_vnf_ = id;
    } else if (item.kind == VnfKind::msa) {
      msa_vnf_ = id;
    }
  }

  // each service function anchors at the base forwarder nearest its host;
  // every other base forwarder routes to it over the mesh
  struct Anchored {
    std::string vnf;
    Name prefix;
    std::string anchor_fwd;
    NodeId anchor_poa;
  };
  std::vector<Anchored> anchored{
      {nrs_vnf_, mobility_wire::nrs_prefix(), "", ""},
      {msa_vnf_, mobility_wire::msa_prefix(), "", ""},
  };
  for (auto& a : anchored) {
    a.anchor_poa = nearest_poa(ctx.vnf_nodes.at(a.vnf));
    a.anchor_fwd = base_fwd_.at(a.anchor_poa);
    auto [anchor_face, _] = make_vlink(ns, slice, a.anchor_fwd, a.vnf);
    record_fib(ctx, ns, a.anchor_fwd, a.prefix, anchor_face, 0);
    for (const auto& [poa, fwd] : base_fwd_) {
      if (fwd == a.anchor_fwd) {
        continue;
      }
      auto lat = substrate_.path_latency(poa, a.anchor_poa);
      record_fib(ctx, ns, fwd, a.prefix, face_between(fwd, a.anchor_fwd),
                 static_cast<std::uint32_t>(lat.value_or(1'000'000)));
    }
  }

  slice.status = SliceStatus::active;
  slices_[ns] = std::move(slice);
  contexts_[ns] = std::move(ctx);

  // gateways of already-active slices learn how to reach the resolver
  for (const auto& [other_ns, other] : slices_) {
    if (other.kind != ServiceType::conference || other.status != SliceStatus::active) {
      continue;
    }
    for (const auto& vnf : other.vnfs) {
      if (vnf.kind == VnfKind::icn_forwarder) {
        auto it = gw_uplink_faces_.find(vnf.id);
        if (it != gw_uplink_faces_.end()) {
          install_mobility_reach_rules_for_gateway(vnf.id, it->second);
        }
      }
    }
  }

  controller_.slice_active(ns, ServiceType::mobility);
  return &slices_.at(ns);
}

Orchestrator::SliceResult Orchestrator::create_conference_slice(const Intent& intent) {
  if (!slice_active(base_ns())) {
    return OrchError{OrchError::Kind::PreconditionFailed, "base slice not active"};
  }
  if (auto err = check_namespace(intent.name_space)) {
    controller_.slice_rejected(intent.name_space, err->detail);
    return *err;
  }

  auto translated = translate_intent(intent);
  if (auto* unsupported = std::get_if<Unsupported>(&translated)) {
    return OrchError{OrchError::Kind::Unsupported, unsupported->detail};
  }
  const ResourceRequest& req = std::get<ResourceRequest>(translated);
  for (const auto& group : intent.participants) {
    if (substrate_.node(group.location) == nullptr) {
      return OrchError{OrchError::Kind::Unsupported, "unknown region " + group.location};
    }
  }

  PlacementInput input{&substrate_, used_, config_.radio_latency_us, config_.radio_bandwidth_bps};
  auto placed = place(req, input);
  if (auto* fail = std::get_if<InsufficientResources>(&placed)) {
    controller_.slice_rejected(intent.name_space, fail->reason);
    return OrchError{OrchError::Kind::InsufficientResources, fail->label + ": " + fail->reason};
  }
  const Placement& placement = std::get<Placement>(placed);

  const Name& ns = intent.name_space;
  Slice slice;
  slice.name_space = ns;
  slice.kind = ServiceType::conference;
  SliceContext ctx;
  ctx.name_space = ns;

  std::vector<std::string> gateways;
  std::string conf_fn;
  for (const auto& item : placement.items) {
    std::string id = controller_.vnf_up(ns, item.kind, item.node, item.alloc, item.label);
    commit_alloc(item.node, item.alloc);
    slice.vnfs.push_back(VnfInstance{id, item.kind, item.node, item.alloc, ns, item.label});
    ctx.vnf_nodes[id] = item.node;
    if (item.kind == VnfKind::icn_forwarder) {
      gateways.push_back(id);
    } else {
      conf_fn = id;
    }
  }
  slice.gateway_vnf = gateways.front();
  ctx.conf_fn_vnf = conf_fn;

  // gateway mesh plus the service-logic attachment at the first gateway
  for (std::size_t i = 0; i < gateways.size(); ++i) {
    for (std::size_t j = i + 1; j < gateways.size(); ++j) {
      make_vlink(ns, slice, gateways[i], gateways[j]);
    }
  }
  make_vlink(ns, slice, gateways.front(), conf_fn);

  // every PoA is served by its nearest gateway
  for (const auto& [poa, fwd] : base_fwd_) {
    std::string best;
    Duration best_lat = 0;
    for (const auto& gw : gateways) {
      auto lat = substrate_.path_latency(poa, ctx.vnf_nodes.at(gw));
      if (!lat) {
        continue;
      }
      if (best.empty() || *lat < best_lat || (*lat == best_lat && gw < best)) {
        best = gw;
        best_lat = *lat;
      }
    }
    if (best.empty()) {
      controller_.slice_rejected(ns, "PoA " + poa + " cannot reach any gateway");
      return OrchError{OrchError::Kind::InsufficientResources, "unreachable PoA " + poa};
    }
    ctx.serving_gateway[poa] = best;
    make_vlink(ns, slice, best, fwd);
  }

  // slice namespace routes: PoA forwarders hand traffic to their gateway
  for (const auto& [poa, fwd] : base_fwd_) {
    const std::string& gw = ctx.serving_gateway.at(poa);
    record_fib(ctx, ns, fwd, ns, face_between(fwd, gw), 0);
    record_anchor(ctx, ns, fwd, ns);
  }

  // locator uplink (and resolver reach, when mobility is up) per gateway
  for (const auto& gw : gateways) {
    const NodeId& host = ctx.vnf_nodes.at(gw);
    const NodeId up_poa = nearest_poa(host);
    const std::string& up_fwd = base_fwd_.at(up_poa);
    auto [gw_face, _] = make_vlink(ns, slice, gw, up_fwd);
    gw_uplink_faces_[gw] = gw_face;
    static const Name kPoa{"poa"};
    record_fib(ctx, ns, gw, kPoa, gw_face, 0);
    record_anchor(ctx, ns, gw, ns);
    if (slice_active(mobility_ns())) {
      install_mobility_reach_rules_for_gateway(gw, gw_face);
    }
  }

  // roster service routing
  const Name roster = conference_names::roster_name(ns);
  record_fib(ctx, ns, gateways.front(), roster, face_between(gateways.front(), conf_fn), 0);
  for (std::size_t i = 1; i < gateways.size(); ++i) {
    record_fib(ctx, ns, gateways[i], roster, face_between(gateways[i], gateways.front()), 0);
  }

  slice.status = SliceStatus::active;
  slices_[ns] = std::move(slice);
  contexts_[ns] = std::move(ctx);
  members_[ns] = {};
  controller_.slice_active(ns, ServiceType::conference);
  return &slices_.at(ns);
}

std::variant<ConfMember, OrchError> Orchestrator::join_participant(const Name& slice_ns,
                                                                   const UeId& ue,
                                                                   const std::string& pid) {
  if (!slice_active(slice_ns)) {
    return OrchError{OrchError::Kind::NotFound, "no active slice " + slice_ns.to_string()};
  }
  Slice& slice = slices_.at(slice_ns);
  if (slice.kind != ServiceType::conference) {
    return OrchError{OrchError::Kind::Unsupported, "not a conference slice"};
  }
  auto poa = controller_.ue_position(ue);
  if (!poa) {
    return OrchError{OrchError::Kind::PreconditionFailed, "ue not attached: " + ue};
  }
  auto& members = members_[slice_ns];
  for (const auto& m : members) {
    if (m.pid == pid) {
      return OrchError{OrchError::Kind::Rejected, "participant id already joined: " + pid};
    }
  }
  SliceContext& ctx = contexts_.at(slice_ns);
  const Name prefix = conference_names::participant_prefix(slice_ns, pid);
  const std::string& serving = ctx.serving_gateway.at(*poa);
  const std::string& poa_fwd = base_fwd_.at(*poa);

  record_fib(ctx, slice_ns, serving, prefix, face_between(serving, poa_fwd), 0);
  for (const auto& vnf : slice.vnfs) {
    if (vnf.kind == VnfKind::icn_forwarder && vnf.id != serving) {
      record_fib(ctx, slice_ns, vnf.id, prefix, face_between(vnf.id, serving), 0);
    }
  }

  ConfMember member{pid, ue, prefix};
  members.push_back(member);
  std::vector<RosterEntry> roster;
  for (const auto& m : members) {
    roster.emplace_back(m.pid, m.prefix);
  }
  controller_.roster_update(slice_ns, ctx.conf_fn_vnf, roster);
  return member;
}

std::optional<OrchError> Orchestrator::enable_mobility(const Name& slice_ns,
                                                       const std::vector<Name>& prefixes) {
  if (!slice_active(slice_ns)) {
    return OrchError{OrchError::Kind::NotFound, "no active slice " + slice_ns.to_string()};
  }
  for (const auto& prefix : prefixes) {
    if (!slice_ns.is_prefix_of(prefix)) {
      return OrchError{OrchError::Kind::Rejected,
                       "prefix outside slice name_space: " + prefix.to_string()};
    }
  }
  if (!slice_active(mobility_ns())) {
    Intent intent;
    intent.service_type = ServiceType::mobility;
    intent.name_space = mobility_ns();
    auto result = create_mobility_slice(intent);
    if (auto* err = std::get_if<OrchError>(&result)) {
      return *err;
    }
  }

  Slice& slice = slices_.at(slice_ns);
  SliceContext& ctx = contexts_.at(slice_ns);
  for (const auto& prefix : prefixes) {
    controller_.mobility_policy(prefix, true);
    mobile_prefixes_.insert(prefix);
    // register current position when the owner is already attached
    const std::vector<ConfMember>* members = this->members(slice_ns);
    if (members != nullptr) {
      for (const auto& m : *members) {
        if (m.prefix == prefix) {
          if (auto poa = controller_.ue_position(m.ue)) {
            std::uint64_t seq = bump_seq(prefix);
            controller_.nrs_control_register(prefix, substrate_.node(*poa)->locator_prefix, seq);
          }
          break;
        }
      }
    }
    for (const auto& vnf : slice.vnfs) {
      if (vnf.kind == VnfKind::icn_forwarder) {
        controller_.resolution_set(slice_ns, vnf.id, prefix);
        ctx.rules.push_back(RuleRecord{RuleRecord::Kind::resolution, vnf.id, prefix});
      }
    }
  }
  return std::nullopt;
}

std::optional<OrchError> Orchestrator::disable_mobility(const Name& slice_ns,
                                                        const std::vector<Name>& prefixes) {
  if (!slice_active(slice_ns)) {
    return OrchError{OrchError::Kind::NotFound, "no active slice " + slice_ns.to_string()};
  }
  Slice& slice = slices_.at(slice_ns);
  SliceContext& ctx = contexts_.at(slice_ns);
  for (const auto& prefix : prefixes) {
    if (!slice_ns.is_prefix_of(prefix)) {
      return OrchError{OrchError::Kind::Rejected,
                       "prefix outside slice name_space: " + prefix.to_string()};
    }
    controller_.mobility_policy(prefix, false);
    mobile_prefixes_.erase(prefix);
    if (slice_active(mobility_ns())) {
      controller_.nrs_control_deregister(prefix, bump_seq(prefix));
    }
    for (const auto& vnf : slice.vnfs) {
      if (vnf.kind == VnfKind::icn_forwarder) {
        controller_.resolution_unset(slice_ns, vnf.id, prefix);
      }
    }
    auto& rules = ctx.rules;
    rules.erase(std::remove_if(rules.begin(), rules.end(),
                               [&prefix](const RuleRecord& r) {
                                 return r.kind == RuleRecord::Kind::resolution &&
                                        r.prefix == prefix;
                               }),
                rules.end());
  }
  return std::nullopt;
}

std::optional<OrchError> Orchestrator::teardown_slice(const Name& slice_ns) {
  auto it = slices_.find(slice_ns);
  if (it == slices_.end() || it->second.status != SliceStatus::active) {
    return OrchError{OrchError::Kind::NotFound, "no active slice " + slice_ns.to_string()};
  }
  Slice& slice = it->second;
  SliceContext& ctx = contexts_.at(slice_ns);

  // retire mobility state bound to this namespace first
  if (slice.kind == ServiceType::conference) {
    std::vector<Name> mobile;
    for (const auto& prefix : mobile_prefixes_) {
      if (slice_ns.is_prefix_of(prefix)) {
        mobile.push_back(prefix);
      }
    }
    for (const auto& prefix : mobile) {
      controller_.mobility_policy(prefix, false);
      if (slice_active(mobility_ns())) {
        controller_.nrs_control_deregister(prefix, bump_seq(prefix));
      }
      mobile_prefixes_.erase(prefix);
    }
  }

  for (auto rit = ctx.rules.rbegin(); rit != ctx.rules.rend(); ++rit) {
    switch (rit->kind) {
      case RuleRecord::Kind::fib:
        controller_.fib_remove(slice_ns, rit->vnf, rit->prefix);
        break;
      case RuleRecord::Kind::resolution:
        controller_.resolution_unset(slice_ns, rit->vnf, rit->prefix);
        break;
      case RuleRecord::Kind::anchor:
        controller_.anchor_remove(slice_ns, rit->vnf, rit->prefix);
        break;
    }
  }
  ctx.rules.clear();
  controller_.namespace_cleanup(slice_ns);

  for (const auto& [a, b] : slice.vlinks) {
    controller_.vlink_down(a, b);
    vlink_faces_.erase({a, b});
    vlink_faces_.erase({b, a});
  }
  for (const auto& vnf : slice.vnfs) {
    controller_.vnf_down(vnf.id);
    release_alloc(vnf.node, vnf.alloc);
    gw_uplink_faces_.erase(vnf.id);
  }

  if (slice.kind == ServiceType::base) {
    base_fwd_.clear();
  }
  if (slice.kind == ServiceType::mobility) {
    nrs_vnf_.clear();
    msa_vnf_.clear();
  }
  slice.status = SliceStatus::torn_down;
  members_.erase(slice_ns);
  controller_.slice_down(slice_ns);
  return std::nullopt;
}

std::optional<DiscoveryResponse> Orchestrator::discovery_info(const Name& ns,
                                                              const NodeId& poa) const {
  if (!slice_active(ns)) {
    return std::nullopt;
  }
  const Slice& slice = slices_.at(ns);
  if (slice.kind != ServiceType::conference) {
    return std::nullopt;
  }
  const SliceContext& ctx = contexts_.at(ns);
  auto it = ctx.serving_gateway.find(poa);
  if (it == ctx.serving_gateway.end()) {
    return std::nullopt;
  }
  DiscoveryResponse r;
  r.gateway_locator = substrate_.node(ctx.vnf_nodes.at(it->second))->locator_prefix;
  r.name_space = ns;
  r.trust_anchors = {ns, Name{"trust"}};
  return r;
}

std::optional<std::string> Orchestrator::serving_gateway(const Name& ns,
                                                         const NodeId& poa) const {
  const SliceContext* ctx = context(ns);
  if (ctx == nullptr) {
    return std::nullopt;
  }
  auto it = ctx->serving_gateway.find(poa);
  if (it == ctx->serving_gateway.end()) {
    return std::nullopt;
  }
  return it->second;
}

}  // namespace icnsim
