#include <json.hpp>

#include "icnsim/scenario.hpp"

namespace icnsim {

namespace {

using nlohmann::json;

Name name_at(const json& j, const char* key, const std::string& ctx) {
  try {
    return Name::parse(j.at(key).get<std::string>());
  } catch (const std::exception& e) {
    throw ScenarioError(0, ctx + ": " + e.what());
  }
}

Intent intent_from_json(const json& j) {
  Intent intent;
  auto service = parse_service_type(j.at("service").get<std::string>());
  if (!service) {
    throw ScenarioError(0, "unknown service type in intent");
  }
  intent.service_type = *service;
  if (j.contains("name_space")) {
    intent.name_space = name_at(j, "name_space", "intent.name_space");
  }
  intent.sla.latency_bound_us = j.value("latency_bound_us", intent.sla.latency_bound_us);
  intent.sla.bandwidth_floor_bps = j.value("bandwidth_floor_bps", intent.sla.bandwidth_floor_bps);
  intent.demand_rps = j.value("demand_rps", intent.demand_rps);
  intent.redirect_grace_us = j.value("grace_us", intent.redirect_grace_us);
  if (j.contains("gateway_cs_bytes")) {
    intent.gateway_cs_bytes = j.at("gateway_cs_bytes").get<std::uint64_t>();
  }
  if (j.contains("network_services")) {
    for (const auto& item : j.at("network_services")) {
      auto svc = parse_network_service(item.get<std::string>());
      if (!svc) {
        throw ScenarioError(0, "unknown network service in intent");
      }
      intent.network_services.insert(*svc);
    }
  }
  if (j.contains("regions")) {
    for (const auto& [location, count] : j.at("regions").items()) {
      intent.participants.push_back(ParticipantGroup{location, count.get<std::uint32_t>()});
    }
  }
  return intent;
}

ScenarioAction action_from_json(const std::string& verb, const json& j) {
  if (verb == "submit_intent") {
    return SubmitIntentAction{intent_from_json(j)};
  }
  if (verb == "ue_attach") {
    return UeAttachAction{j.at("ue").get<std::string>(), j.at("poa").get<std::string>()};
  }
  if (verb == "ue_detach") {
    return UeDetachAction{j.at("ue").get<std::string>()};
  }
  if (verb == "ue_move") {
    UeMoveAction a;
    a.ue = j.at("ue").get<std::string>();
    a.to_poa = j.at("to").get<std::string>();
    a.gap_us = j.value("gap_us", a.gap_us);
    return a;
  }
  if (verb == "join_conference") {
    JoinConferenceAction a;
    a.ue = j.at("ue").get<std::string>();
    a.slice_ns = name_at(j, "slice", "join_conference.slice");
    a.participant_id = j.value("participant", a.ue);
    a.publish_media = j.value("publish_media", std::string());
    a.publish_rate_cps = j.value("publish_rate_cps", 0U);
    a.chunk_size = j.value("chunk_size", a.chunk_size);
    a.publish_count = j.value("publish_count", std::uint64_t{0});
    if (!a.publish_media.empty() && a.publish_rate_cps == 0) {
      throw ScenarioError(0, "publishing join needs publish_rate_cps > 0");
    }
    return a;
  }
  if (verb == "start_fetch") {
    StartFetchAction a;
    a.ue = j.at("ue").get<std::string>();
    a.slice_ns = name_at(j, "slice", "start_fetch.slice");
    a.target_pid = j.value("target", std::string());
    if (j.contains("target_prefix")) {
      a.target_prefix = name_at(j, "target_prefix", "start_fetch.target_prefix");
    }
    if (a.target_pid.empty() && !a.target_prefix) {
      throw ScenarioError(0, "start_fetch needs target or target_prefix");
    }
    a.media = j.value("media", a.media);
    a.start_seq = j.value("start_seq", std::uint64_t{0});
    a.count = j.value("count", std::uint64_t{0});
    return a;
  }
  if (verb == "enable_mobility" || verb == "disable_mobility") {
    Name slice_ns = name_at(j, "slice", verb + ".slice");
    std::vector<Name> prefixes;
    if (j.contains("prefixes")) {
      for (const auto& p : j.at("prefixes")) {
        prefixes.push_back(Name::parse(p.get<std::string>()));
      }
    }
    if (prefixes.empty()) {
      throw ScenarioError(0, verb + " needs prefixes");
    }
    if (verb == "enable_mobility") {
      return EnableMobilityAction{std::move(slice_ns), std::move(prefixes)};
    }
    return DisableMobilityAction{std::move(slice_ns), std::move(prefixes)};
  }
  if (verb == "teardown_slice") {
    return TeardownSliceAction{name_at(j, "slice", "teardown_slice.slice")};
  }
  throw ScenarioError(0, "unknown timeline action '" + verb + "'");
}

}  // namespace

Scenario parse_scenario_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(0, std::string("JSON parse error: ") + e.what());
  }
  try {
    Scenario scenario;
    scenario.seed = root.value("seed", scenario.seed);
    scenario.duration_us = root.value("duration_us", scenario.duration_us);
    if (root.contains("defaults")) {
      const json& d = root.at("defaults");
      auto& def = scenario.defaults;
      def.interest_lifetime_us = d.value("interest_lifetime_us", def.interest_lifetime_us);
      def.hop_limit = d.value("hop_limit", def.hop_limit);
      def.data_freshness_us = d.value("data_freshness_us", def.data_freshness_us);
      def.retx_limit = d.value("retx_limit", def.retx_limit);
      def.base_cs_bytes = d.value("base_cs_bytes", def.base_cs_bytes);
    }
    if (root.contains("radio")) {
      const json& r = root.at("radio");
      scenario.radio.latency_us = r.value("latency_us", scenario.radio.latency_us);
      scenario.radio.bandwidth_bps = r.value("bandwidth_bps", scenario.radio.bandwidth_bps);
      scenario.radio.queue_capacity = r.value("queue", scenario.radio.queue_capacity);
    }
    for (const auto& n : root.value("nodes", json::array())) {
      PhysNode node;
      node.id = n.at("id").get<std::string>();
      auto role = parse_node_role(n.value("role", "icn_bs"));
      if (!role) {
        throw ScenarioError(0, "unknown node role for '" + node.id + "'");
      }
      node.role = *role;
      node.cpu_capacity = n.value("cpu", 4U);
      node.storage_capacity = n.value("storage", std::uint64_t{50'000'000});
      if (n.contains("locator")) {
        node.locator_prefix = name_at(n, "locator", "node.locator");
      }
      scenario.nodes.push_back(std::move(node));
    }
    for (const auto& l : root.value("links", json::array())) {
      PhysLink link;
      link.id = l.at("id").get<std::string>();
      link.a = l.at("from").get<std::string>();
      link.b = l.at("to").get<std::string>();
      link.latency_us = l.at("latency_us").get<Duration>();
      link.bandwidth_bps = l.at("bandwidth_bps").get<std::uint64_t>();
      link.queue_capacity = l.value("queue", 64U);
      scenario.links.push_back(std::move(link));
    }
    for (const auto& u : root.value("ues", json::array())) {
      scenario.ues.push_back(u.get<std::string>());
    }
    for (const auto& t : root.value("timeline", json::array())) {
      TimelineItem item;
      item.at = t.at("at").get<Timestamp>();
      item.action = action_from_json(t.at("action").get<std::string>(), t);
      scenario.timeline.push_back(std::move(item));
    }
    validate_scenario(scenario);
    return scenario;
  } catch (const json::exception& e) {
    throw ScenarioError(0, std::string("JSON schema error: ") + e.what());
  }
}

}  // namespace icnsim
