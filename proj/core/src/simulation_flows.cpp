#include <algorithm>

#include "icnsim/codec.hpp"
#include "icnsim/signature.hpp"
#include "icnsim/simulation.hpp"

namespace icnsim {

// ---------------------------------------------------------------------------
// service discovery (UE side)

std::string Simulation::discovery_flow_id(const UeId& ue, const Name& slice_ns) const {
  return ue + "|discovery:" + slice_tag(slice_ns);
}

void Simulation::start_discovery(const UeId& ue, const Name& slice_ns) {
  auto& session = ues_.at(ue).apps.at(slice_ns);
  session.discovery_pending = true;
  session.discovery_rtx = 0;
  session.discovery_first_sent = engine_.now();
  send_discovery_interest(ue, slice_ns);
}

void Simulation::send_discovery_interest(const UeId& ue, const Name& slice_ns) {
  UeState& state = ues_.at(ue);
  AppSession& session = state.apps.at(slice_ns);
  Interest interest;
  interest.name = conference_names::discovery_query(slice_ns);
  interest.nonce = draw_nonce();
  interest.lifetime_us = scenario_.defaults.interest_lifetime_us;
  interest.hop_limit = scenario_.defaults.hop_limit;
  if (state.attachment) {
    interest.context["poa"] = state.attachment->poa;
  }
  std::uint64_t token = next_token();
  session.discovery_token = token;

  auto& rec = trace_event(state.attachment ? state.attachment->poa : "-", "-", "app_interest");
  rec.fields.emplace_back("ue", ue);
  rec.fields.emplace_back("flow", discovery_flow_id(ue, slice_ns));
  rec.fields.emplace_back("name", interest.name.to_string());
  rec.fields.emplace_back("seq", "0");
  rec.fields.emplace_back("rtx", std::to_string(session.discovery_rtx));

  send_from_ue(ue, Packet{std::move(interest)});
  engine_.schedule(engine_.now() + scenario_.defaults.interest_lifetime_us,
                   EventKind::TimerFire, [this, ue, slice_ns, token] {
                     auto uit = ues_.find(ue);
                     if (uit == ues_.end()) {
                       return;
                     }
                     auto ait = uit->second.apps.find(slice_ns);
                     if (ait == uit->second.apps.end()) {
                       return;
                     }
                     AppSession& s = ait->second;
                     if (!s.discovery_pending || s.discovery_token != token) {
                       return;
                     }
                     auto& to = trace_event("-", "-", "app_timeout");
                     to.fields.emplace_back("ue", ue);
                     to.fields.emplace_back("flow", discovery_flow_id(ue, slice_ns));
                     to.fields.emplace_back("name",
                                            conference_names::discovery_query(slice_ns).to_string());
                     to.fields.emplace_back("seq", "0");
                     if (s.discovery_rtx < scenario_.defaults.retx_limit) {
                       ++s.discovery_rtx;
                       send_discovery_interest(ue, slice_ns);
                     } else {
                       s.discovery_pending = false;
                       auto& ab = trace_event("-", "-", "app_discovery");
                       ab.fields.emplace_back("ue", ue);
                       ab.fields.emplace_back("slice", slice_ns.to_string());
                       ab.fields.emplace_back("status", "timeout");
                       s.after_discovery.clear();
                     }
                   });
}

// ---------------------------------------------------------------------------
// fetch flows

void Simulation::do_start_fetch(const StartFetchAction& action) {
  auto uit = ues_.find(action.ue);
  if (uit == ues_.end()) {
    throw ScenarioError(0, "start_fetch for unknown ue " + action.ue);
  }
  UeState& state = uit->second;
  auto ait = state.apps.find(action.slice_ns);
  if (ait == state.apps.end()) {
    throw ScenarioError(0, "start_fetch before join_conference: " + action.ue);
  }
  FetchFlow flow;
  flow.ue = action.ue;
  flow.slice_ns = action.slice_ns;
  flow.media = action.media;
  flow.target_pid = action.target_pid;
  flow.target_prefix = action.target_prefix;
  flow.next_seq = action.start_seq;
  flow.remaining = action.count;
  flow.endless = action.count == 0;
  std::size_t idx = state.flows.size();
  state.flows.push_back(std::move(flow));

  AppSession& session = ait->second;
  if (session.discovery_done) {
    flow_begin(action.ue, idx);
  } else if (session.discovery_pending) {
    UeId ue = action.ue;
    session.after_discovery.push_back([this, ue, idx] { flow_begin(ue, idx); });
  } else {
    state.flows[idx].done = true;
    auto& rec = trace_event("-", "-", "app_flow_abort");
    rec.fields.emplace_back("ue", action.ue);
    rec.fields.emplace_back("reason", "no_discovery");
  }
}

void Simulation::flow_begin(const UeId& ue, std::size_t flow_idx) {
  FetchFlow& flow = ues_.at(ue).flows.at(flow_idx);
  if (flow.done) {
    return;
  }
  if (flow.target_prefix) {
    flow.flow_id = ue + "|" + flow.target_prefix->to_string() + "|" + flow.media;
    flow_send_chunk(ue, flow_idx);
  } else {
    flow.waiting_roster = true;
    flow_send_roster_interest(ue, flow_idx);
  }
}

void Simulation::flow_send_roster_interest(const UeId& ue, std::size_t flow_idx) {
  FetchFlow& flow = ues_.at(ue).flows.at(flow_idx);
  Name roster = conference_names::roster_name(flow.slice_ns);
  if (!flow.outstanding) {
    flow.outstanding = Outstanding{roster, 0, engine_.now(), 0, next_token()};
  }
  flow_send_transmission(ue, flow_idx);
}

void Simulation::flow_send_chunk(const UeId& ue, std::size_t flow_idx) {
  FetchFlow& flow = ues_.at(ue).flows.at(flow_idx);
  if (flow.done) {
    return;
  }
  Name name = conference_names::chunk_name(*flow.target_prefix, flow.media, flow.next_seq);
  flow.outstanding = Outstanding{name, flow.next_seq, engine_.now(), 0, next_token()};
  flow_send_transmission(ue, flow_idx);
}

void Simulation::flow_send_transmission(const UeId& ue, std::size_t flow_idx) {
  UeState& state = ues_.at(ue);
  FetchFlow& flow = state.flows.at(flow_idx);
  if (!flow.outstanding) {
    return;
  }
  Outstanding& out = *flow.outstanding;
  Interest interest;
  interest.name = out.name;
  interest.nonce = draw_nonce();
  interest.lifetime_us = scenario_.defaults.interest_lifetime_us;
  interest.hop_limit = scenario_.defaults.hop_limit;

  std::string flow_id = flow.waiting_roster
                            ? ue + "|" + conference_names::roster_name(flow.slice_ns).to_string()
                            : flow.flow_id;
  auto& rec = trace_event(state.attachment ? state.attachment->poa : "-", "-", "app_interest");
  rec.fields.emplace_back("ue", ue);
  rec.fields.emplace_back("flow", flow_id);
  rec.fields.emplace_back("name", out.name.to_string());
  rec.fields.emplace_back("seq", std::to_string(out.seq));
  rec.fields.emplace_back("rtx", std::to_string(out.rtx));

  std::uint64_t token = out.token;
  send_from_ue(ue, Packet{std::move(interest)});
  engine_.schedule(engine_.now() + scenario_.defaults.interest_lifetime_us,
                   EventKind::TimerFire, [this, ue, flow_idx, token] {
    auto uit = ues_.find(ue);
    if (uit == ues_.end() || flow_idx >= uit->second.flows.size()) {
      return;
    }
    FetchFlow& f = uit->second.flows[flow_idx];
    if (f.done || !f.outstanding || f.outstanding->token != token) {
      return;
    }
    std::string fid = f.waiting_roster
                          ? ue + "|" + conference_names::roster_name(f.slice_ns).to_string()
                          : f.flow_id;
    auto& to = trace_event("-", "-", "app_timeout");
    to.fields.emplace_back("ue", ue);
    to.fields.emplace_back("flow", fid);
    to.fields.emplace_back("name", f.outstanding->name.to_string());
    to.fields.emplace_back("seq", std::to_string(f.outstanding->seq));
    if (f.outstanding->rtx < scenario_.defaults.retx_limit) {
      ++f.outstanding->rtx;
      flow_send_transmission(ue, flow_idx);
      return;
    }
    if (f.waiting_roster) {
      f.done = true;
      f.outstanding.reset();
      auto& ab = trace_event("-", "-", "app_flow_abort");
      ab.fields.emplace_back("ue", ue);
      ab.fields.emplace_back("reason", "roster_timeout");
      return;
    }
    auto& lost = trace_event("-", "-", "app_chunk_lost");
    lost.fields.emplace_back("ue", ue);
    lost.fields.emplace_back("flow", fid);
    lost.fields.emplace_back("seq", std::to_string(f.outstanding->seq));
    flow_advance(ue, flow_idx);
  });
}

void Simulation::flow_advance(const UeId& ue, std::size_t flow_idx) {
  FetchFlow& flow = ues_.at(ue).flows.at(flow_idx);
  flow.outstanding.reset();
  ++flow.next_seq;
  if (!flow.endless) {
    --flow.remaining;
    if (flow.remaining == 0) {
      flow.done = true;
      return;
    }
  }
  flow_send_chunk(ue, flow_idx);
}

// ---------------------------------------------------------------------------
// UE data-plane receive path

bool Simulation::ue_verifies(const UeState& ue, const Data& data) const {
  std::set<Name> anchors{Name{"trust"}};
  for (const auto& [ns, session] : ue.apps) {
    if (session.discovery) {
      anchors.insert(session.discovery->trust_anchors.begin(),
                     session.discovery->trust_anchors.end());
    }
  }
  return verify(data, anchors);
}

void Simulation::ue_handle_data(UeState& ue, const Data& data) {
  if (!ue_verifies(ue, data)) {
    auto& rec = trace_event(ue.attachment ? ue.attachment->poa : "-", "-", "app_prov_fail");
    rec.fields.emplace_back("ue", ue.id);
    rec.fields.emplace_back("name", data.name.to_string());
    return;
  }
  bool consumed = false;

  // discovery responses
  for (auto& [ns, session] : ue.apps) {
    if (!session.discovery_pending ||
        data.name != conference_names::discovery_query(session.slice_ns)) {
      continue;
    }
    session.discovery_pending = false;
    consumed = true;
    auto& rec = trace_event("-", "-", "app_data");
    rec.fields.emplace_back("ue", ue.id);
    rec.fields.emplace_back("flow", discovery_flow_id(ue.id, session.slice_ns));
    rec.fields.emplace_back("name", data.name.to_string());
    rec.fields.emplace_back("seq", "0");
    rec.fields.emplace_back("latency_us",
                            std::to_string(engine_.now() - session.discovery_first_sent));
    std::optional<DiscoveryResponse> response;
    try {
      response = decode_discovery_response(data.payload);
    } catch (const MalformedPacket&) {
      response.reset();
    }
    auto& disc = trace_event("-", "-", "app_discovery");
    disc.fields.emplace_back("ue", ue.id);
    disc.fields.emplace_back("slice", session.slice_ns.to_string());
    if (response) {
      session.discovery = *response;
      session.discovery_done = true;
      disc.fields.emplace_back("status", "ok");
      disc.fields.emplace_back("gateway", response->gateway_locator.to_string());
      auto queued = std::move(session.after_discovery);
      session.after_discovery.clear();
      for (auto& fn : queued) {
        fn();
      }
    } else {
      disc.fields.emplace_back("status", "notfound");
      session.after_discovery.clear();
    }
  }

  // roster answers and chunk deliveries
  for (std::size_t idx = 0; idx < ue.flows.size(); ++idx) {
    FetchFlow& flow = ue.flows[idx];
    if (flow.done || !flow.outstanding || flow.outstanding->name != data.name) {
      continue;
    }
    consumed = true;
    if (flow.waiting_roster) {
      auto& rec = trace_event("-", "-", "app_data");
      rec.fields.emplace_back("ue", ue.id);
      rec.fields.emplace_back(
          "flow", ue.id + "|" + conference_names::roster_name(flow.slice_ns).to_string());
      rec.fields.emplace_back("name", data.name.to_string());
      rec.fields.emplace_back("seq", "0");
      rec.fields.emplace_back("latency_us",
                              std::to_string(engine_.now() - flow.outstanding->first_sent));
      flow.outstanding.reset();
      flow.waiting_roster = false;
      std::optional<Name> prefix;
      try {
        for (const auto& [pid, p] : decode_roster(data.payload)) {
          if (pid == flow.target_pid) {
            prefix = p;
            break;
          }
        }
      } catch (const MalformedPacket&) {
        prefix.reset();
      }
      if (!prefix) {
        flow.done = true;
        auto& ab = trace_event("-", "-", "app_flow_abort");
        ab.fields.emplace_back("ue", ue.id);
        ab.fields.emplace_back("reason", "unknown_participant");
        continue;
      }
      flow.target_prefix = *prefix;
      flow.flow_id = ue.id + "|" + prefix->to_string() + "|" + flow.media;
      flow_send_chunk(ue.id, idx);
    } else {
      auto& rec = trace_event("-", "-", "app_data");
      rec.fields.emplace_back("ue", ue.id);
      rec.fields.emplace_back("flow", flow.flow_id);
      rec.fields.emplace_back("name", data.name.to_string());
      rec.fields.emplace_back("seq", std::to_string(flow.outstanding->seq));
      rec.fields.emplace_back("latency_us",
                              std::to_string(engine_.now() - flow.outstanding->first_sent));
      flow_advance(ue.id, idx);
    }
  }

  if (!consumed) {
    auto& rec = trace_event("-", "-", "app_stray");
    rec.fields.emplace_back("ue", ue.id);
    rec.fields.emplace_back("name", data.name.to_string());
  }
}

// ---------------------------------------------------------------------------
// scenario actions

void Simulation::apply_action(const TimelineItem& item) {
  std::visit(
      [this](const auto& action) {
        using T = std::decay_t<decltype(action)>;
        if constexpr (std::is_same_v<T, SubmitIntentAction>) {
          auto result = orch_->submit_intent(action.intent);
          if (auto* err = std::get_if<OrchError>(&result)) {
            trace_ctrl(action.intent.name_space.empty() ? Orchestrator::base_ns()
                                                        : action.intent.name_space,
                       "intent_error", "-",
                       {{"kind", to_string(err->kind)}, {"reason", err->detail}});
          }
        } else if constexpr (std::is_same_v<T, UeAttachAction>) {
          do_attach(action.ue, action.poa);
        } else if constexpr (std::is_same_v<T, UeDetachAction>) {
          do_detach(action.ue);
        } else if constexpr (std::is_same_v<T, UeMoveAction>) {
          do_detach(action.ue);
          UeId ue = action.ue;
          NodeId to = action.to_poa;
          engine_.schedule(engine_.now() + action.gap_us, EventKind::UeAttach,
                           [this, ue, to] { do_attach(ue, to); });
        } else if constexpr (std::is_same_v<T, JoinConferenceAction>) {
          do_join(action);
        } else if constexpr (std::is_same_v<T, StartFetchAction>) {
          do_start_fetch(action);
        } else if constexpr (std::is_same_v<T, EnableMobilityAction>) {
          auto err = orch_->enable_mobility(action.slice_ns, action.prefixes);
          if (err) {
            trace_ctrl(action.slice_ns, "mobility_rejected", "-", {{"reason", err->detail}});
          } else {
            trace_ctrl(action.slice_ns, "mobility_enabled", "-",
                       {{"prefixes", std::to_string(action.prefixes.size())}});
          }
        } else if constexpr (std::is_same_v<T, DisableMobilityAction>) {
          auto err = orch_->disable_mobility(action.slice_ns, action.prefixes);
          if (err) {
            trace_ctrl(action.slice_ns, "mobility_rejected", "-", {{"reason", err->detail}});
          } else {
            trace_ctrl(action.slice_ns, "mobility_disabled", "-",
                       {{"prefixes", std::to_string(action.prefixes.size())}});
          }
        } else if constexpr (std::is_same_v<T, TeardownSliceAction>) {
          auto err = orch_->teardown_slice(action.slice_ns);
          if (err) {
            trace_ctrl(action.slice_ns, "teardown_rejected", "-", {{"reason", err->detail}});
          }
        }
      },
      item.action);
}

}  // namespace icnsim
