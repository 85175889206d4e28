#include "icnsim/simulation.hpp"

#include <algorithm>

#include "icnsim/codec.hpp"
#include "icnsim/signature.hpp"

namespace icnsim {

namespace {

std::string bool_field(bool v) { return v ? "1" : "0"; }

}  // namespace

// ---------------------------------------------------------------------------
// construction / run loop

Simulation::Simulation(Scenario scenario, std::optional<std::uint64_t> seed_override)
    : scenario_(std::move(scenario)) {
  validate_scenario(scenario_);
  if (seed_override) {
    scenario_.seed = *seed_override;
  }
  substrate_ = build_substrate(scenario_);
  rng_.seed(scenario_.seed);
  OrchConfig config;
  config.base_fwd_cs_bytes = scenario_.defaults.base_cs_bytes;
  config.radio_latency_us = scenario_.radio.latency_us;
  config.radio_bandwidth_bps = scenario_.radio.bandwidth_bps;
  orch_ = std::make_unique<Orchestrator>(substrate_, *this, config);
  for (const auto& ue : scenario_.ues) {
    ues_[ue] = UeState{ue, std::nullopt, {}, {}};
  }
}

Simulation::~Simulation() = default;

MetricsReport Simulation::run(std::optional<Timestamp> until) {
  if (ran_) {
    throw std::logic_error("a Simulation instance runs exactly once");
  }
  ran_ = true;
  for (const auto& item : scenario_.timeline) {
    engine_.schedule(item.at, EventKind::ScenarioAction, [this, item] { apply_action(item); });
  }
  Timestamp t_end = until.value_or(scenario_.duration_us);
  std::uint64_t processed = engine_.run_until(t_end);
  auto& rec = trace_event("-", "-", "sim_end");
  rec.fields.emplace_back("events", std::to_string(processed));
  return build_report(trace_.records());
}

const Forwarder* Simulation::forwarder(const std::string& vnf_id) const {
  auto it = forwarders_.find(vnf_id);
  return it == forwarders_.end() ? nullptr : it->second.fwd.get();
}

std::vector<std::string> Simulation::forwarder_ids() const {
  std::vector<std::string> out;
  for (const auto& [id, _] : forwarders_) {
    out.push_back(id);
  }
  return out;
}

std::optional<NodeId> Simulation::ue_poa(const UeId& ue) const {
  auto it = ues_.find(ue);
  if (it == ues_.end() || !it->second.attachment) {
    return std::nullopt;
  }
  return it->second.attachment->poa;
}

std::uint32_t Simulation::draw_nonce() { return static_cast<std::uint32_t>(rng_()); }

std::string Simulation::slice_tag(const Name& ns) {
  std::string tag;
  for (const auto& c : ns.components()) {
    if (!tag.empty()) {
      tag += '.';
    }
    tag += c;
  }
  return tag;
}

const Name& Simulation::infra_key() const {
  static const Name key{"trust", "infra"};
  return key;
}

// ---------------------------------------------------------------------------
// tracing

TraceRecord& Simulation::trace_event(const std::string& node, const std::string& vnf,
                                     std::string kind) {
  return trace_.append(engine_.now(), node, vnf, std::move(kind));
}

void Simulation::trace_ctrl(const Name& slice_ns, const std::string& op, const std::string& vnf,
                            const std::vector<std::pair<std::string, std::string>>& extra) {
  std::string node = "-";
  if (auto it = forwarders_.find(vnf); it != forwarders_.end()) {
    node = it->second.node;
  } else if (auto sit = services_.find(vnf); sit != services_.end()) {
    node = sit->second.node;
  }
  auto& rec = trace_event(node, vnf, "ctrl");
  rec.fields.emplace_back("slice", slice_ns.to_string());
  rec.fields.emplace_back("op", op);
  for (const auto& [k, v] : extra) {
    rec.fields.emplace_back(k, v);
  }
}

void Simulation::SinkAdapter::on_aggregated(const Name& name, FaceId in_face) {
  auto& rec = sim->trace_event(node, vnf, "aggregate");
  rec.fields.emplace_back("name", name.to_string());
  rec.fields.emplace_back("face", std::to_string(in_face));
}

void Simulation::SinkAdapter::on_cs_inserted(const Name& name, std::uint64_t bytes) {
  auto& rec = sim->trace_event(node, vnf, "cs_insert");
  rec.fields.emplace_back("name", name.to_string());
  rec.fields.emplace_back("bytes", std::to_string(bytes));
}

void Simulation::SinkAdapter::on_cs_evicted(const Name& name) {
  auto& rec = sim->trace_event(node, vnf, "cs_evict");
  rec.fields.emplace_back("name", name.to_string());
}

void Simulation::SinkAdapter::on_pit_expired(const Name& name) {
  auto& rec = sim->trace_event(node, vnf, "pit_expire");
  rec.fields.emplace_back("name", name.to_string());
}

void Simulation::SinkAdapter::on_redirected(const Name& name, const Name& new_locator) {
  auto& rec = sim->trace_event(node, vnf, "redirect");
  rec.fields.emplace_back("name", name.to_string());
  rec.fields.emplace_back("locator", new_locator.to_string());
}

// ---------------------------------------------------------------------------
// SliceController: lifecycle

std::string Simulation::vnf_up(const Name& slice_ns, VnfKind kind, const NodeId& node,
                               const VnfAlloc& alloc, const std::string& label) {
  std::string id = slice_tag(slice_ns) + ":" + label;
  if (forwarders_.count(id) > 0 || services_.count(id) > 0) {
    throw SimulationBug("vnf id already in use: " + id);
  }
  const PhysNode* host = substrate_.node(node);
  if (host == nullptr) {
    throw SimulationBug("vnf_up on unknown node " + node);
  }
  if (kind == VnfKind::icn_forwarder) {
    FwdInstance inst;
    inst.fwd = std::make_unique<Forwarder>(id, host->locator_prefix, alloc.cs_capacity_bytes);
    inst.node = node;
    inst.slice_ns = slice_ns;
    inst.sink = std::make_unique<SinkAdapter>();
    inst.sink->sim = this;
    inst.sink->vnf = id;
    inst.sink->node = node;
    inst.fwd->set_event_sink(inst.sink.get());
    inst.control_face = inst.fwd->add_face();
    wires_[{id, inst.control_face}] = Wire{Wire::Peer::control, id, 0, {}};
    // node-local bootstrap state, not slice rules: names under the node's
    // own locator terminate at the node agent, and infrastructure keys are
    // always trusted
    inst.fwd->install_fib(host->locator_prefix, {NextHop{inst.control_face, 0}});
    inst.fwd->add_trust_anchor(Name{"trust"});
    forwarders_[id] = std::move(inst);
  } else {
    ServiceEndpoint svc;
    svc.id = id;
    svc.kind = kind;
    svc.node = node;
    svc.slice_ns = slice_ns;
    services_[id] = std::move(svc);
  }
  trace_ctrl(slice_ns, "vnf_up", id,
             {{"node", node}, {"kind", to_string(kind)}, {"cpu", std::to_string(alloc.cpu)}});
  return id;
}

void Simulation::vnf_down(const std::string& vnf_id) {
  Name slice_ns;
  if (auto it = forwarders_.find(vnf_id); it != forwarders_.end()) {
    slice_ns = it->second.slice_ns;
    // strand any UE still hanging off this forwarder
    std::vector<UeId> to_detach;
    for (const auto& [ue_id, ue] : ues_) {
      if (ue.attachment && ue.attachment->bf_vnf == vnf_id) {
        to_detach.push_back(ue_id);
      }
    }
    for (const auto& ue_id : to_detach) {
      do_detach(ue_id);
    }
    for (auto wit = wires_.begin(); wit != wires_.end();) {
      if (wit->first.first == vnf_id) {
        wit = wires_.erase(wit);
      } else {
        ++wit;
      }
    }
    pending_resolutions_.erase(vnf_id);
    trace_ctrl(slice_ns, "vnf_down", vnf_id);
    forwarders_.erase(it);
    return;
  }
  if (auto it = services_.find(vnf_id); it != services_.end()) {
    slice_ns = it->second.slice_ns;
    trace_ctrl(slice_ns, "vnf_down", vnf_id);
    services_.erase(it);
    return;
  }
  throw SimulationBug("vnf_down on unknown vnf " + vnf_id);
}

std::pair<FaceId, FaceId> Simulation::vlink_up(const Name& slice_ns, const std::string& from_vnf,
                                               const std::string& to_vnf) {
  auto node_of = [this](const std::string& vnf) -> NodeId {
    if (auto it = forwarders_.find(vnf); it != forwarders_.end()) {
      return it->second.node;
    }
    if (auto it = services_.find(vnf); it != services_.end()) {
      return it->second.node;
    }
    throw SimulationBug("vlink endpoint unknown: " + vnf);
  };
  NodeId node_a = node_of(from_vnf);
  NodeId node_b = node_of(to_vnf);
  auto path = substrate_.shortest_path(node_a, node_b);
  if (!path) {
    throw SimulationBug("no physical path between " + node_a + " and " + node_b);
  }
  std::vector<LinkId> forward = path->links;
  std::vector<LinkId> backward(forward.rbegin(), forward.rend());

  bool a_is_fwd = forwarders_.count(from_vnf) > 0;
  bool b_is_fwd = forwarders_.count(to_vnf) > 0;
  FaceId face_a = 0;
  FaceId face_b = 0;
  if (a_is_fwd && b_is_fwd) {
    face_a = forwarders_.at(from_vnf).fwd->add_face();
    face_b = forwarders_.at(to_vnf).fwd->add_face();
    wires_[{from_vnf, face_a}] = Wire{Wire::Peer::forwarder, to_vnf, face_b, forward};
    wires_[{to_vnf, face_b}] = Wire{Wire::Peer::forwarder, from_vnf, face_a, backward};
  } else if (a_is_fwd && !b_is_fwd) {
    face_a = forwarders_.at(from_vnf).fwd->add_face();
    wires_[{from_vnf, face_a}] = Wire{Wire::Peer::service, to_vnf, 0, forward};
    ServiceEndpoint& svc = services_.at(to_vnf);
    svc.anchor_vnf = from_vnf;
    svc.anchor_face = face_a;
    svc.path_to_anchor = backward;
  } else if (!a_is_fwd && b_is_fwd) {
    face_b = forwarders_.at(to_vnf).fwd->add_face();
    wires_[{to_vnf, face_b}] = Wire{Wire::Peer::service, from_vnf, 0, backward};
    ServiceEndpoint& svc = services_.at(from_vnf);
    svc.anchor_vnf = to_vnf;
    svc.anchor_face = face_b;
    svc.path_to_anchor = forward;
  } else {
    throw SimulationBug("vlink needs at least one forwarder endpoint");
  }
  trace_ctrl(slice_ns, "vlink_up", from_vnf, {{"peer", to_vnf}});
  return {face_a, face_b};
}

void Simulation::vlink_down(const std::string& a_vnf, const std::string& b_vnf) {
  auto drop_side = [this](const std::string& self, const std::string& peer) {
    auto fit = forwarders_.find(self);
    if (fit == forwarders_.end()) {
      return;
    }
    std::vector<FaceId> faces;
    for (const auto& [key, wire] : wires_) {
      if (key.first == self && wire.peer_id == peer &&
          (wire.peer == Wire::Peer::forwarder || wire.peer == Wire::Peer::service)) {
        faces.push_back(key.second);
      }
    }
    for (FaceId face : faces) {
      fit->second.fwd->remove_face(face);
      wires_.erase({self, face});
    }
  };
  drop_side(a_vnf, b_vnf);
  drop_side(b_vnf, a_vnf);
  for (auto* svc_id : {&a_vnf, &b_vnf}) {
    auto sit = services_.find(*svc_id);
    if (sit != services_.end() &&
        (sit->second.anchor_vnf == a_vnf || sit->second.anchor_vnf == b_vnf)) {
      sit->second.anchor_vnf.clear();
      sit->second.anchor_face = 0;
      sit->second.path_to_anchor.clear();
    }
  }
  trace_ctrl(Name{"base"}, "vlink_down", a_vnf, {{"peer", b_vnf}});
}

// ---------------------------------------------------------------------------
// SliceController: rules

void Simulation::fib_install(const Name& slice_ns, const std::string& vnf, const Name& prefix,
                             FaceId face, std::uint32_t cost) {
  auto it = forwarders_.find(vnf);
  if (it == forwarders_.end()) {
    throw SimulationBug("fib_install on unknown vnf " + vnf);
  }
  if (!it->second.fwd->has_face(face)) {
    throw SimulationBug("fib_install on unknown face of " + vnf);
  }
  it->second.fwd->install_fib(prefix, {NextHop{face, cost}});
  trace_ctrl(slice_ns, "fib_install", vnf, {{"prefix", prefix.to_string()}});
}

void Simulation::fib_remove(const Name& slice_ns, const std::string& vnf, const Name& prefix) {
  auto it = forwarders_.find(vnf);
  if (it != forwarders_.end()) {
    it->second.fwd->remove_fib(prefix);
  }
  trace_ctrl(slice_ns, "fib_remove", vnf, {{"prefix", prefix.to_string()}});
}

void Simulation::resolution_set(const Name& slice_ns, const std::string& vnf,
                                const Name& prefix) {
  auto it = forwarders_.find(vnf);
  if (it == forwarders_.end()) {
    throw SimulationBug("resolution_set on unknown vnf " + vnf);
  }
  it->second.fwd->set_resolution_rule(prefix);
  trace_ctrl(slice_ns, "rule_set", vnf, {{"prefix", prefix.to_string()}});
}

void Simulation::resolution_unset(const Name& slice_ns, const std::string& vnf,
                                  const Name& prefix) {
  auto it = forwarders_.find(vnf);
  if (it != forwarders_.end()) {
    it->second.fwd->unset_resolution_rule(prefix);
  }
  trace_ctrl(slice_ns, "rule_unset", vnf, {{"prefix", prefix.to_string()}});
}

void Simulation::anchor_add(const Name& slice_ns, const std::string& vnf, const Name& anchor) {
  auto it = forwarders_.find(vnf);
  if (it == forwarders_.end()) {
    throw SimulationBug("anchor_add on unknown vnf " + vnf);
  }
  it->second.fwd->add_trust_anchor(anchor);
  trace_ctrl(slice_ns, "anchor_add", vnf, {{"anchor", anchor.to_string()}});
}

void Simulation::anchor_remove(const Name& slice_ns, const std::string& vnf,
                               const Name& anchor) {
  auto it = forwarders_.find(vnf);
  if (it != forwarders_.end()) {
    it->second.fwd->remove_trust_anchor(anchor);
  }
  trace_ctrl(slice_ns, "anchor_remove", vnf, {{"anchor", anchor.to_string()}});
}

// ---------------------------------------------------------------------------
// SliceController: mobility service control plane

Simulation::ServiceEndpoint* Simulation::find_service(VnfKind kind) {
  for (auto& [id, svc] : services_) {
    if (svc.kind == kind) {
      return &svc;
    }
  }
  return nullptr;
}

NrsResult Simulation::nrs_control_register(const Name& name, const Name& locator,
                                           std::uint64_t seq) {
  ServiceEndpoint* nrs = find_service(VnfKind::nrs);
  if (nrs == nullptr) {
    throw SimulationBug("nrs_control_register without an NRS instance");
  }
  NrsResult result = nrs->nrs.register_name(name, locator, seq);
  auto& rec = trace_event(nrs->node, nrs->id, "nrs_register");
  rec.fields.emplace_back("name", name.to_string());
  rec.fields.emplace_back("locator", locator.to_string());
  rec.fields.emplace_back("seq", std::to_string(seq));
  rec.fields.emplace_back("result", result == NrsResult::Accepted ? "accepted" : "stale");
  rec.fields.emplace_back("via", "ctrl");
  return result;
}

NrsResult Simulation::nrs_control_deregister(const Name& name, std::uint64_t seq) {
  ServiceEndpoint* nrs = find_service(VnfKind::nrs);
  if (nrs == nullptr) {
    throw SimulationBug("nrs_control_deregister without an NRS instance");
  }
  NrsResult result = nrs->nrs.deregister_name(name, seq);
  auto& rec = trace_event(nrs->node, nrs->id, "nrs_deregister");
  rec.fields.emplace_back("name", name.to_string());
  rec.fields.emplace_back("seq", std::to_string(seq));
  rec.fields.emplace_back("result", result == NrsResult::Accepted ? "accepted" : "stale");
  rec.fields.emplace_back("via", "ctrl");
  return result;
}

void Simulation::mobility_policy(const Name& prefix, bool enabled) {
  ServiceEndpoint* msa = find_service(VnfKind::msa);
  if (msa == nullptr) {
    throw SimulationBug("mobility_policy without an MSA instance");
  }
  if (enabled) {
    msa->msa.enable_prefix(prefix);
  } else {
    msa->msa.disable_prefix(prefix);
  }
  trace_ctrl(Orchestrator::mobility_ns(), "policy", msa->id,
             {{"prefix", prefix.to_string()}, {"enabled", bool_field(enabled)}});
}

void Simulation::roster_update(const Name& slice_ns, const std::string& conf_fn_vnf,
                               const std::vector<RosterEntry>& roster) {
  auto it = services_.find(conf_fn_vnf);
  if (it == services_.end()) {
    throw SimulationBug("roster_update on unknown vnf " + conf_fn_vnf);
  }
  it->second.roster = roster;
  trace_ctrl(slice_ns, "roster_update", conf_fn_vnf,
             {{"entries", std::to_string(roster.size())}});
}

void Simulation::slice_active(const Name& ns, ServiceType kind) {
  trace_ctrl(ns, "slice_active", "-", {{"kind", to_string(kind)}});
}

void Simulation::slice_rejected(const Name& ns, const std::string& reason) {
  trace_ctrl(ns, "slice_rejected", "-", {{"reason", reason}});
}

void Simulation::slice_down(const Name& ns) { trace_ctrl(ns, "slice_down", "-"); }

void Simulation::namespace_cleanup(const Name& ns) {
  // producer bindings at the attachment forwarders
  for (auto& [ue_id, ue] : ues_) {
    if (!ue.attachment) {
      continue;
    }
    auto app = ue.apps.find(ns);
    if (app == ue.apps.end() || !app->second.producer) {
      continue;
    }
    auto fit = forwarders_.find(ue.attachment->bf_vnf);
    if (fit != forwarders_.end() && fit->second.fwd->remove_fib(app->second.producer->prefix)) {
      trace_ctrl(ns, "fib_remove", ue.attachment->bf_vnf,
                 {{"prefix", app->second.producer->prefix.to_string()}});
    }
  }
  // grace-period redirects under the dead namespace
  for (auto& [vnf_id, inst] : forwarders_) {
    for (const auto& name : inst.fwd->remove_redirects_under(ns)) {
      auto& rec = trace_event(inst.node, vnf_id, "redirect_expire");
      rec.fields.emplace_back("name", name.to_string());
    }
  }
}

std::optional<NodeId> Simulation::ue_position(const UeId& ue) { return ue_poa(ue); }

// ---------------------------------------------------------------------------
// packet movement

void Simulation::transmit_path(std::vector<LinkId> path, std::size_t idx, NodeId current,
                               Packet packet, std::size_t bytes,
                               std::function<void()> deliver) {
  if (idx >= path.size()) {
    engine_.schedule(engine_.now(), EventKind::PacketArrival, std::move(deliver));
    return;
  }
  const PhysLink* link = substrate_.link(path[idx]);
  if (link == nullptr) {
    throw SimulationBug("transmit over unknown link " + path[idx]);
  }
  bool forward_dir = link->a == current;
  NodeId next = forward_dir ? link->b : link->a;
  LinkState& state = link_state_[link->id];
  LinkQueue& queue = forward_dir ? state.ab : state.ba;
  Duration ser = serialization_delay_us(bytes, link->bandwidth_bps);
  auto admitted = queue.admit(engine_.now(), ser, link->latency_us, link->queue_capacity);
  if (!admitted) {
    auto& rec = trace_event(current, "-", "link_drop");
    rec.fields.emplace_back("link", link->id);
    rec.fields.emplace_back("bytes", std::to_string(bytes));
    return;
  }
  LinkQueue* queue_ptr = &queue;
  engine_.schedule(admitted->serialize_done, EventKind::TimerFire,
                   [queue_ptr] { queue_ptr->release(); });
  engine_.schedule(admitted->arrival, EventKind::PacketArrival,
                   [this, path = std::move(path), idx, next, packet = std::move(packet), bytes,
                    deliver = std::move(deliver)]() mutable {
                     transmit_path(std::move(path), idx + 1, next, std::move(packet), bytes,
                                   std::move(deliver));
                   });
}

void Simulation::send_out(const std::string& vnf, FaceId face, Packet packet) {
  auto wit = wires_.find({vnf, face});
  auto fit = forwarders_.find(vnf);
  if (wit == wires_.end() || fit == forwarders_.end()) {
    auto& rec = trace_event(fit != forwarders_.end() ? fit->second.node : "-", vnf, "drop");
    rec.fields.emplace_back("kind", is_interest(packet) ? "I" : "D");
    rec.fields.emplace_back("name", packet_name(packet).to_string());
    rec.fields.emplace_back("reason", "FaceGone");
    return;
  }
  const Wire& wire = wit->second;
  const NodeId& node = fit->second.node;
  switch (wire.peer) {
    case Wire::Peer::control:
      handle_control_packet(vnf, packet);
      return;
    case Wire::Peer::forwarder: {
      std::size_t bytes = encoded_size(packet);
      std::string peer = wire.peer_id;
      FaceId peer_face = wire.peer_face;
      transmit_path(wire.path, 0, node, packet, bytes,
                    [this, peer, peer_face, packet] {
                      deliver_to_forwarder(peer, peer_face, packet);
                    });
      return;
    }
    case Wire::Peer::service: {
      std::size_t bytes = encoded_size(packet);
      std::string peer = wire.peer_id;
      transmit_path(wire.path, 0, node, packet, bytes,
                    [this, peer, packet] { deliver_to_service(peer, packet); });
      return;
    }
    case Wire::Peer::ue: {
      const UeId ue = wire.peer_id;
      auto uit = ues_.find(ue);
      if (uit == ues_.end() || !uit->second.attachment) {
        auto& rec = trace_event(node, vnf, "drop");
        rec.fields.emplace_back("kind", is_interest(packet) ? "I" : "D");
        rec.fields.emplace_back("name", packet_name(packet).to_string());
        rec.fields.emplace_back("reason", "FaceGone");
        return;
      }
      Attachment& att = *uit->second.attachment;
      std::size_t bytes = encoded_size(packet);
      Duration ser = serialization_delay_us(bytes, scenario_.radio.bandwidth_bps);
      auto admitted = att.radio.down.admit(engine_.now(), ser, scenario_.radio.latency_us,
                                           scenario_.radio.queue_capacity);
      if (!admitted) {
        auto& rec = trace_event(node, vnf, "link_drop");
        rec.fields.emplace_back("link", "radio:" + ue);
        rec.fields.emplace_back("bytes", std::to_string(bytes));
        return;
      }
      LinkQueue* q = &att.radio.down;
      engine_.schedule(admitted->serialize_done, EventKind::TimerFire, [q] { q->release(); });
      std::uint64_t epoch = att.epoch;
      engine_.schedule(admitted->arrival, EventKind::PacketArrival,
                       [this, ue, epoch, packet] { deliver_to_ue(ue, epoch, packet); });
      return;
    }
  }
}

void Simulation::send_from_ue(const UeId& ue, Packet packet) {
  auto uit = ues_.find(ue);
  if (uit == ues_.end() || !uit->second.attachment) {
    return;  // radio gone; the packet evaporates and timers recover
  }
  Attachment& att = *uit->second.attachment;
  std::size_t bytes = encoded_size(packet);
  Duration ser = serialization_delay_us(bytes, scenario_.radio.bandwidth_bps);
  auto admitted = att.radio.up.admit(engine_.now(), ser, scenario_.radio.latency_us,
                                     scenario_.radio.queue_capacity);
  if (!admitted) {
    auto& rec = trace_event(att.poa, "-", "link_drop");
    rec.fields.emplace_back("link", "radio:" + ue);
    rec.fields.emplace_back("bytes", std::to_string(bytes));
    return;
  }
  LinkQueue* q = &att.radio.up;
  engine_.schedule(admitted->serialize_done, EventKind::TimerFire, [q] { q->release(); });
  std::string bf = att.bf_vnf;
  FaceId face = att.face;
  engine_.schedule(admitted->arrival, EventKind::PacketArrival,
                   [this, bf, face, packet] { deliver_to_forwarder(bf, face, packet); });
}

void Simulation::send_from_service(const std::string& service_id, Packet packet) {
  auto sit = services_.find(service_id);
  if (sit == services_.end() || sit->second.anchor_vnf.empty()) {
    return;
  }
  ServiceEndpoint& svc = sit->second;
  std::size_t bytes = encoded_size(packet);
  std::string anchor = svc.anchor_vnf;
  FaceId face = svc.anchor_face;
  transmit_path(svc.path_to_anchor, 0, svc.node, packet, bytes,
                [this, anchor, face, packet] { deliver_to_forwarder(anchor, face, packet); });
}

void Simulation::deliver_to_forwarder(const std::string& vnf, FaceId face, Packet packet) {
  auto it = forwarders_.find(vnf);
  if (it == forwarders_.end() || !it->second.fwd->has_face(face)) {
    auto& rec = trace_event(it != forwarders_.end() ? it->second.node : "-", vnf, "drop");
    rec.fields.emplace_back("kind", is_interest(packet) ? "I" : "D");
    rec.fields.emplace_back("name", packet_name(packet).to_string());
    rec.fields.emplace_back("reason", "FaceGone");
    return;
  }
  Forwarder& fwd = *it->second.fwd;
  std::vector<ForwardAction> actions;
  if (const auto* interest = std::get_if<Interest>(&packet)) {
    actions = fwd.on_interest(face, *interest, engine_.now());
  } else {
    actions = fwd.on_data(face, std::get<Data>(packet), engine_.now());
  }
  fwd.check_invariants();
  process_actions(vnf, std::move(actions));
}

void Simulation::process_actions(const std::string& vnf, std::vector<ForwardAction> actions) {
  auto it = forwarders_.find(vnf);
  if (it == forwarders_.end()) {
    return;
  }
  const NodeId& node = it->second.node;
  for (auto& action : actions) {
    if (auto* send = std::get_if<SendInterest>(&action)) {
      auto& rec = trace_event(node, vnf, "send_interest");
      rec.fields.emplace_back("name", send->interest.name.to_string());
      rec.fields.emplace_back("nonce", std::to_string(send->interest.nonce));
      rec.fields.emplace_back("face", std::to_string(send->face));
      if (send->interest.forwarding_hint) {
        rec.fields.emplace_back("hint", send->interest.forwarding_hint->to_string());
      }
      // the PIT entry this forward created expires exactly then
      engine_.schedule(engine_.now() + send->interest.lifetime_us, EventKind::TimerFire,
                       [this, vnf] {
                         auto fit = forwarders_.find(vnf);
                         if (fit != forwarders_.end()) {
                           fit->second.fwd->expire_pit(engine_.now());
                         }
                       });
      send_out(vnf, send->face, Packet{send->interest});
    } else if (auto* senddata = std::get_if<SendData>(&action)) {
      auto& rec = trace_event(node, vnf, "send_data");
      rec.fields.emplace_back("name", senddata->data.name.to_string());
      rec.fields.emplace_back("face", std::to_string(senddata->face));
      rec.fields.emplace_back("cache", bool_field(senddata->from_cache));
      rec.fields.emplace_back("bytes", std::to_string(senddata->data.payload.size()));
      send_out(vnf, senddata->face, Packet{senddata->data});
    } else if (auto* resolve = std::get_if<InvokeResolution>(&action)) {
      auto& rec = trace_event(node, vnf, "invoke_resolution");
      rec.fields.emplace_back("name", resolve->interest.name.to_string());
      handle_invoke_resolution(vnf, *resolve);
    } else if (auto* drop = std::get_if<Drop>(&action)) {
      auto& rec = trace_event(node, vnf, "drop");
      rec.fields.emplace_back("kind", drop->was_interest ? "I" : "D");
      rec.fields.emplace_back("name", drop->name.to_string());
      rec.fields.emplace_back("reason", to_string(drop->reason));
    }
  }
}

// ---------------------------------------------------------------------------
// node agent: resolution client and redirect handling

void Simulation::handle_invoke_resolution(const std::string& vnf, const InvokeResolution& act) {
  Name resolve_name = mobility_wire::make_msa_resolve_name(act.interest.name);
  auto& pending = pending_resolutions_[vnf];
  auto pit = pending.find(resolve_name);
  if (pit != pending.end()) {
    pit->second.originals.emplace_back(act.in_face, act.interest);
    return;
  }
  PendingResolution entry;
  entry.originals.emplace_back(act.in_face, act.interest);
  entry.token = next_token();
  std::uint64_t token = entry.token;
  pending.emplace(resolve_name, std::move(entry));

  Interest resolve;
  resolve.name = resolve_name;
  resolve.nonce = draw_nonce();
  resolve.lifetime_us = scenario_.defaults.interest_lifetime_us;
  resolve.hop_limit = scenario_.defaults.hop_limit;
  auto fit = forwarders_.find(vnf);
  auto actions = fit->second.fwd->on_interest(fit->second.control_face, resolve, engine_.now());
  process_actions(vnf, std::move(actions));

  engine_.schedule(engine_.now() + resolve.lifetime_us, EventKind::TimerFire,
                   [this, vnf, resolve_name, token] {
                     auto pmap = pending_resolutions_.find(vnf);
                     if (pmap == pending_resolutions_.end()) {
                       return;
                     }
                     auto entry = pmap->second.find(resolve_name);
                     if (entry == pmap->second.end() || entry->second.token != token) {
                       return;
                     }
                     fail_pending_resolution(vnf, resolve_name);
                   });
}

void Simulation::fail_pending_resolution(const std::string& vnf, const Name& resolve_name) {
  auto pmap = pending_resolutions_.find(vnf);
  if (pmap == pending_resolutions_.end()) {
    return;
  }
  auto entry = pmap->second.find(resolve_name);
  if (entry == pmap->second.end()) {
    return;
  }
  auto fit = forwarders_.find(vnf);
  const NodeId node = fit != forwarders_.end() ? fit->second.node : "-";
  for (const auto& [face, interest] : entry->second.originals) {
    auto& rec = trace_event(node, vnf, "drop");
    rec.fields.emplace_back("kind", "I");
    rec.fields.emplace_back("name", interest.name.to_string());
    rec.fields.emplace_back("reason", "NoRoute");
  }
  pmap->second.erase(entry);
}

void Simulation::handle_control_packet(const std::string& vnf, const Packet& packet) {
  if (const auto* interest = std::get_if<Interest>(&packet)) {
    handle_control_interest(vnf, *interest);
  } else {
    handle_control_data(vnf, std::get<Data>(packet));
  }
}

void Simulation::handle_control_interest(const std::string& vnf, const Interest& interest) {
  auto fit = forwarders_.find(vnf);
  if (fit == forwarders_.end()) {
    return;
  }
  FwdInstance& inst = *&fit->second;
  const Name& locator = inst.fwd->locator();
  const Name& name = interest.name;
  // redirect notification: <locator>/mobility/redirect/<seq>
  if (locator.is_prefix_of(name) && name.size() >= locator.size() + 2 &&
      name.at(locator.size()) == "mobility" && name.at(locator.size() + 1) == "redirect") {
    const std::string* target = nullptr;
    const std::string* new_locator = nullptr;
    auto t_it = interest.context.find("name");
    auto l_it = interest.context.find("locator");
    if (t_it != interest.context.end()) target = &t_it->second;
    if (l_it != interest.context.end()) new_locator = &l_it->second;
    auto g_it = interest.context.find("grace_us");
    if (target != nullptr && new_locator != nullptr) {
      Duration grace = g_it != interest.context.end() ? std::stoull(g_it->second)
                                                      : kDefaultRedirectGraceUs;
      Name mobile = Name::parse(*target);
      Name loc = Name::parse(*new_locator);
      Timestamp expiry = engine_.now() + grace;
      inst.fwd->install_redirect(mobile, loc, expiry);
      auto& rec = trace_event(inst.node, vnf, "redirect_install");
      rec.fields.emplace_back("name", mobile.to_string());
      rec.fields.emplace_back("locator", loc.to_string());
      rec.fields.emplace_back("expiry", std::to_string(expiry));
      engine_.schedule(expiry, EventKind::TimerFire, [this, vnf] {
        auto it = forwarders_.find(vnf);
        if (it == forwarders_.end()) {
          return;
        }
        for (const auto& name : it->second.fwd->sweep_redirects(engine_.now())) {
          auto& rec2 = trace_event(it->second.node, vnf, "redirect_expire");
          rec2.fields.emplace_back("name", name.to_string());
        }
      });
      // acknowledge so the resolver's breadcrumbs are consumed
      Data ack = make_signed_data(interest.name, Bytes{'o', 'k'}, 0, infra_key());
      auto actions = inst.fwd->on_data(inst.control_face, ack, engine_.now());
      process_actions(vnf, std::move(actions));
      return;
    }
  }
  auto& rec = trace_event(inst.node, vnf, "drop");
  rec.fields.emplace_back("kind", "I");
  rec.fields.emplace_back("name", name.to_string());
  rec.fields.emplace_back("reason", "NoRoute");
}

void Simulation::handle_control_data(const std::string& vnf, const Data& data) {
  auto orig = mobility_wire::parse_msa_resolve_name(data.name);
  if (!orig) {
    return;  // registration acks and the like
  }
  auto pmap = pending_resolutions_.find(vnf);
  if (pmap == pending_resolutions_.end()) {
    return;
  }
  auto entry = pmap->second.find(data.name);
  if (entry == pmap->second.end()) {
    return;
  }
  auto originals = std::move(entry->second.originals);
  pmap->second.erase(entry);

  std::optional<Name> locator;
  try {
    locator = mobility_wire::decode_locator_payload(data.payload);
  } catch (const MalformedPacket&) {
    locator.reset();
  }
  auto fit = forwarders_.find(vnf);
  if (fit == forwarders_.end()) {
    return;
  }
  const NodeId node = fit->second.node;
  for (auto& [face, interest] : originals) {
    if (locator && fit->second.fwd->has_face(face)) {
      Interest hinted = interest;
      hinted.forwarding_hint = *locator;
      auto actions = fit->second.fwd->on_interest(face, hinted, engine_.now());
      fit->second.fwd->check_invariants();
      process_actions(vnf, std::move(actions));
    } else {
      auto& rec = trace_event(node, vnf, "drop");
      rec.fields.emplace_back("kind", "I");
      rec.fields.emplace_back("name", interest.name.to_string());
      rec.fields.emplace_back("reason", "NoRoute");
    }
  }
}

}  // namespace icnsim
