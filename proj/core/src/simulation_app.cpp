#include <algorithm>

#include "icnsim/codec.hpp"
#include "icnsim/signature.hpp"
#include "icnsim/simulation.hpp"

namespace icnsim {

namespace {

Bytes text_payload(const std::string& text) { return Bytes(text.begin(), text.end()); }

}  // namespace

// ---------------------------------------------------------------------------
// service endpoints

void Simulation::deliver_to_service(const std::string& service_id, Packet packet) {
  auto it = services_.find(service_id);
  if (it == services_.end()) {
    auto& rec = trace_event("-", service_id, "drop");
    rec.fields.emplace_back("kind", is_interest(packet) ? "I" : "D");
    rec.fields.emplace_back("name", packet_name(packet).to_string());
    rec.fields.emplace_back("reason", "FaceGone");
    return;
  }
  if (const auto* interest = std::get_if<Interest>(&packet)) {
    service_handle_interest(it->second, *interest);
  } else {
    service_handle_data(it->second, std::get<Data>(packet));
  }
}

void Simulation::reply_from_service(ServiceEndpoint& svc, const Name& name, Bytes payload) {
  Name key = svc.kind == VnfKind::conf_service_fn
                 ? svc.slice_ns.appended("service").appended("key")
                 : infra_key();
  Data data = make_signed_data(name, std::move(payload), 0, std::move(key));
  send_from_service(svc.id, Packet{std::move(data)});
}

void Simulation::service_handle_interest(ServiceEndpoint& svc, const Interest& interest) {
  switch (svc.kind) {
    case VnfKind::discovery_fn:
      discovery_serve(svc, interest);
      return;
    case VnfKind::conf_service_fn:
      conf_fn_serve(svc, interest);
      return;
    case VnfKind::nrs:
      nrs_serve(svc, interest);
      return;
    case VnfKind::msa:
      msa_serve(svc, interest);
      return;
    case VnfKind::icn_forwarder:
      return;
  }
}

void Simulation::service_handle_data(ServiceEndpoint& svc, const Data& data) {
  if (svc.kind != VnfKind::msa) {
    return;  // acknowledgments only
  }
  auto orig = mobility_wire::parse_nrs_resolve_name(data.name);
  if (!orig) {
    return;
  }
  auto pending = svc.msa_pending.find(*orig);
  if (pending == svc.msa_pending.end()) {
    return;
  }
  svc.msa_pending.erase(pending);
  std::optional<Name> locator;
  try {
    locator = mobility_wire::decode_locator_payload(data.payload);
  } catch (const MalformedPacket&) {
    locator.reset();
  }
  auto& rec = trace_event(svc.node, svc.id, "msa_resolve");
  rec.fields.emplace_back("name", orig->to_string());
  rec.fields.emplace_back("found", locator ? "1" : "0");
  reply_from_service(svc, mobility_wire::make_msa_resolve_name(*orig),
                     mobility_wire::encode_locator_payload(locator));
}

void Simulation::discovery_serve(ServiceEndpoint& svc, const Interest& interest) {
  const Name& name = interest.name;
  if (auto ns = conference_names::parse_discovery_query(name)) {
    auto poa_it = interest.context.find("poa");
    std::optional<DiscoveryResponse> info;
    if (poa_it != interest.context.end()) {
      info = orch_->discovery_info(*ns, poa_it->second);
    }
    if (info) {
      reply_from_service(svc, name, encode_discovery_response(*info));
    } else {
      reply_from_service(svc, name, encode_discovery_notfound());
    }
    return;
  }
  static const Name kServices{"discovery", "services"};
  if (kServices.is_prefix_of(name)) {
    std::string listing;
    for (const auto& [ns, slice] : orch_->slices()) {
      if (slice.kind == ServiceType::conference && slice.status == SliceStatus::active) {
        listing += ns.to_string();
        listing += '\n';
      }
    }
    reply_from_service(svc, name, text_payload(listing));
    return;
  }
  static const Name kTrust{"trust"};
  if (kTrust.is_prefix_of(name)) {
    reply_from_service(svc, name, text_payload("/trust\n"));
    return;
  }
  reply_from_service(svc, name, encode_discovery_notfound());
}

void Simulation::conf_fn_serve(ServiceEndpoint& svc, const Interest& interest) {
  if (interest.name == conference_names::roster_name(svc.slice_ns)) {
    reply_from_service(svc, interest.name, encode_roster(svc.roster));
    return;
  }
  reply_from_service(svc, interest.name, encode_discovery_notfound());
}

void Simulation::nrs_serve(ServiceEndpoint& svc, const Interest& interest) {
  const Name& name = interest.name;
  if (auto target = mobility_wire::parse_nrs_resolve_name(name)) {
    auto locator = svc.nrs.resolve(*target);
    auto& rec = trace_event(svc.node, svc.id, "nrs_resolve");
    rec.fields.emplace_back("name", target->to_string());
    rec.fields.emplace_back("found", locator ? "1" : "0");
    if (locator) {
      rec.fields.emplace_back("locator", locator->to_string());
    }
    reply_from_service(svc, name, mobility_wire::encode_locator_payload(locator));
    return;
  }

  // /mobility/nrs/(register|deregister)/<seq>/<name...>
  const Name& nrs_prefix = mobility_wire::nrs_prefix();
  if (nrs_prefix.is_prefix_of(name) && name.size() >= nrs_prefix.size() + 3) {
    const std::string& verb = name.at(nrs_prefix.size());
    if (verb == "register" || verb == "deregister") {
      std::uint64_t seq = 0;
      try {
        seq = std::stoull(name.at(nrs_prefix.size() + 1));
      } catch (const std::exception&) {
        return;
      }
      Name target = name.suffix(nrs_prefix.size() + 2);
      if (verb == "register") {
        auto loc_it = interest.context.find("locator");
        if (loc_it == interest.context.end()) {
          return;
        }
        Name locator = Name::parse(loc_it->second);
        NrsResult result = svc.nrs.register_name(target, locator, seq);
        auto& rec = trace_event(svc.node, svc.id, "nrs_register");
        rec.fields.emplace_back("name", target.to_string());
        rec.fields.emplace_back("locator", locator.to_string());
        rec.fields.emplace_back("seq", std::to_string(seq));
        rec.fields.emplace_back("result",
                                result == NrsResult::Accepted ? "accepted" : "stale");
        if (result == NrsResult::Accepted) {
          const NrsRecord* record = svc.nrs.record(target);
          if (record != nullptr && record->previous_locator &&
              *record->previous_locator != locator) {
            // push the new locator to the stale point of attachment so it
            // can redirect in-flight traffic during the grace window
            Interest notify;
            notify.name = mobility_wire::make_redirect_notify_name(*record->previous_locator,
                                                                   ++svc.notify_counter);
            notify.nonce = draw_nonce();
            notify.lifetime_us = scenario_.defaults.interest_lifetime_us;
            notify.hop_limit = scenario_.defaults.hop_limit;
            notify.context["name"] = target.to_string();
            notify.context["locator"] = locator.to_string();
            notify.context["grace_us"] = std::to_string(orch_->redirect_grace_us());
            send_from_service(svc.id, Packet{std::move(notify)});
          }
        }
        reply_from_service(svc, name,
                           text_payload(result == NrsResult::Accepted ? "ok" : "stale"));
      } else {
        NrsResult result = svc.nrs.deregister_name(target, seq);
        auto& rec = trace_event(svc.node, svc.id, "nrs_deregister");
        rec.fields.emplace_back("name", target.to_string());
        rec.fields.emplace_back("seq", std::to_string(seq));
        rec.fields.emplace_back("result",
                                result == NrsResult::Accepted ? "accepted" : "stale");
        reply_from_service(svc, name,
                           text_payload(result == NrsResult::Accepted ? "ok" : "stale"));
      }
      return;
    }
  }
}

void Simulation::msa_serve(ServiceEndpoint& svc, const Interest& interest) {
  auto orig = mobility_wire::parse_msa_resolve_name(interest.name);
  if (!orig) {
    return;
  }
  if (svc.msa_pending.count(*orig) > 0) {
    return;  // an identical resolution is already in flight
  }
  svc.msa_pending.emplace(*orig, interest);
  Interest query;
  query.name = mobility_wire::make_nrs_resolve_name(*orig);
  query.nonce = draw_nonce();
  query.lifetime_us = scenario_.defaults.interest_lifetime_us;
  query.hop_limit = scenario_.defaults.hop_limit;
  send_from_service(svc.id, Packet{std::move(query)});
}

// ---------------------------------------------------------------------------
// UE attachment

void Simulation::do_attach(const UeId& ue, const NodeId& poa) {
  auto uit = ues_.find(ue);
  if (uit == ues_.end()) {
    throw SimulationBug("attach of unknown ue " + ue);
  }
  UeState& state = uit->second;
  if (state.attachment) {
    throw SimulationBug("InvalidTransition: ue already attached: " + ue);
  }
  std::string bf;
  for (const auto& [vnf_id, inst] : forwarders_) {
    if (inst.slice_ns == Orchestrator::base_ns() && inst.node == poa) {
      bf = vnf_id;
      break;
    }
  }
  if (bf.empty()) {
    throw SimulationBug("attach at " + poa + " before base slice bootstrap");
  }
  FwdInstance& inst = forwarders_.at(bf);
  FaceId face = inst.fwd->add_face();
  wires_[{bf, face}] = Wire{Wire::Peer::ue, ue, 0, {}};
  static std::uint64_t epoch_counter = 0;
  Attachment att;
  att.poa = poa;
  att.bf_vnf = bf;
  att.face = face;
  att.epoch = ++epoch_counter;
  state.attachment = std::move(att);

  auto& rec = trace_event(poa, bf, "ue_attach");
  rec.fields.emplace_back("ue", ue);
  rec.fields.emplace_back("poa", poa);

  // local name hosting: producer prefixes of joined apps bind to the new face
  for (auto& [ns, session] : state.apps) {
    if (session.producer) {
      inst.fwd->install_fib(session.producer->prefix, {NextHop{face, 0}});
      trace_ctrl(ns, "fib_install", bf, {{"prefix", session.producer->prefix.to_string()}});
    }
  }

  // the new point of attachment re-registers every mobile name it now hosts
  const Name& locator = substrate_.node(poa)->locator_prefix;
  for (const auto& prefix : orch_->mobile_prefixes_of(ue)) {
    std::uint64_t seq = orch_->bump_seq(prefix);
    Interest reg;
    reg.name = mobility_wire::make_nrs_register_name(seq, prefix);
    reg.nonce = draw_nonce();
    reg.lifetime_us = scenario_.defaults.interest_lifetime_us;
    reg.hop_limit = scenario_.defaults.hop_limit;
    reg.context["locator"] = locator.to_string();
    auto actions = inst.fwd->on_interest(inst.control_face, reg, engine_.now());
    process_actions(bf, std::move(actions));
  }
}

void Simulation::do_detach(const UeId& ue) {
  auto uit = ues_.find(ue);
  if (uit == ues_.end()) {
    throw SimulationBug("detach of unknown ue " + ue);
  }
  UeState& state = uit->second;
  if (!state.attachment) {
    throw SimulationBug("InvalidTransition: ue not attached: " + ue);
  }
  Attachment att = *state.attachment;
  auto fit = forwarders_.find(att.bf_vnf);
  if (fit != forwarders_.end()) {
    for (auto& [ns, session] : state.apps) {
      if (session.producer && fit->second.fwd->remove_fib(session.producer->prefix)) {
        trace_ctrl(ns, "fib_remove", att.bf_vnf,
                   {{"prefix", session.producer->prefix.to_string()}});
      }
    }
    fit->second.fwd->remove_face(att.face);
  }
  wires_.erase({att.bf_vnf, att.face});
  state.attachment.reset();
  auto& rec = trace_event(att.poa, att.bf_vnf, "ue_detach");
  rec.fields.emplace_back("ue", ue);
  rec.fields.emplace_back("poa", att.poa);
}

void Simulation::deliver_to_ue(const UeId& ue, std::uint64_t epoch, Packet packet) {
  auto uit = ues_.find(ue);
  if (uit == ues_.end() || !uit->second.attachment ||
      uit->second.attachment->epoch != epoch) {
    return;  // arrived after a handover; the radio it rode is gone
  }
  if (const auto* interest = std::get_if<Interest>(&packet)) {
    ue_handle_interest(uit->second, *interest);
  } else {
    ue_handle_data(uit->second, std::get<Data>(packet));
  }
}

// ---------------------------------------------------------------------------
// conference application: producer side

void Simulation::do_join(const JoinConferenceAction& action) {
  auto uit = ues_.find(action.ue);
  if (uit == ues_.end() || !uit->second.attachment) {
    throw ScenarioError(0, "join_conference before attach: " + action.ue);
  }
  UeState& state = uit->second;
  auto joined = orch_->join_participant(action.slice_ns, action.ue, action.participant_id);
  if (auto* err = std::get_if<OrchError>(&joined)) {
    trace_ctrl(action.slice_ns, "join_rejected", "-",
               {{"ue", action.ue}, {"reason", err->detail}});
    return;
  }
  const ConfMember& member = std::get<ConfMember>(joined);

  AppSession session;
  session.slice_ns = action.slice_ns;
  session.pid = member.pid;
  if (!action.publish_media.empty()) {
    ProducerSession producer;
    producer.prefix = member.prefix;
    producer.media = action.publish_media;
    producer.rate_cps = action.publish_rate_cps;
    producer.chunk_size = action.chunk_size;
    producer.publish_count = action.publish_count;
    producer.joined_at = engine_.now();
    session.producer = std::move(producer);
  }
  state.apps[action.slice_ns] = std::move(session);

  auto& rec = trace_event(state.attachment->poa, "-", "app_join");
  rec.fields.emplace_back("ue", action.ue);
  rec.fields.emplace_back("slice", action.slice_ns.to_string());
  rec.fields.emplace_back("pid", member.pid);

  AppSession& stored = state.apps.at(action.slice_ns);
  if (stored.producer) {
    // bind the producer prefix at the current attachment
    auto fit = forwarders_.find(state.attachment->bf_vnf);
    fit->second.fwd->install_fib(stored.producer->prefix, {NextHop{state.attachment->face, 0}});
    trace_ctrl(action.slice_ns, "fib_install", state.attachment->bf_vnf,
               {{"prefix", stored.producer->prefix.to_string()}});
    do_publish(action.ue, action.slice_ns);
  }
  start_discovery(action.ue, action.slice_ns);
}

void Simulation::do_publish(const UeId& ue, const Name& slice_ns) {
  auto uit = ues_.find(ue);
  if (uit == ues_.end()) {
    return;
  }
  auto ait = uit->second.apps.find(slice_ns);
  if (ait == uit->second.apps.end() || !ait->second.producer) {
    return;
  }
  ProducerSession& producer = *ait->second.producer;
  if (producer.publish_count != 0 && producer.next_seq >= producer.publish_count) {
    return;
  }
  Name name = conference_names::chunk_name(producer.prefix, producer.media, producer.next_seq);
  Data chunk = make_signed_data(name, deterministic_chunk_payload(name, producer.chunk_size),
                                scenario_.defaults.data_freshness_us,
                                conference_names::participant_key(producer.prefix));
  producer.published[name] = chunk;
  auto& rec = trace_event(uit->second.attachment ? uit->second.attachment->poa : "-", "-",
                          "app_publish");
  rec.fields.emplace_back("ue", ue);
  rec.fields.emplace_back("name", name.to_string());
  rec.fields.emplace_back("seq", std::to_string(producer.next_seq));
  rec.fields.emplace_back("bytes", std::to_string(producer.chunk_size));
  if (producer.pending.erase(name) > 0 && uit->second.attachment) {
    send_from_ue(ue, Packet{chunk});
  }
  ++producer.next_seq;
  Timestamp next_at =
      producer.joined_at + (producer.next_seq * 1'000'000ULL) / producer.rate_cps;
  engine_.schedule(std::max(next_at, engine_.now()), EventKind::TimerFire,
                   [this, ue, slice_ns] { do_publish(ue, slice_ns); });
}

void Simulation::ue_handle_interest(UeState& ue, const Interest& interest) {
  for (auto& [ns, session] : ue.apps) {
    if (!session.producer) {
      continue;
    }
    ProducerSession& producer = *session.producer;
    if (!producer.prefix.is_prefix_of(interest.name)) {
      continue;
    }
    auto found = producer.published.find(interest.name);
    if (found != producer.published.end()) {
      send_from_ue(ue.id, Packet{found->second});
      return;
    }
    // a chunk requested ahead of the live edge is answered at publish time
    if (interest.name.size() == producer.prefix.size() + 2 &&
        interest.name.at(producer.prefix.size()) == producer.media) {
      producer.pending.insert(interest.name);
    }
    return;
  }
}

}  // namespace icnsim
