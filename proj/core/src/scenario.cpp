#include "icnsim/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace icnsim {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return "";
  }
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_u64(const std::string& value, int line) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ScenarioError(line, "expected unsigned integer, got '" + value + "'");
  }
  return out;
}

Name parse_name(const std::string& value, int line) {
  try {
    return Name::parse(value);
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(line, std::string("bad name: ") + e.what());
  }
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    std::size_t comma = value.find(',', pos);
    if (comma == std::string::npos) {
      comma = value.size();
    }
    std::string item = trim(value.substr(pos, comma - pos));
    if (!item.empty()) {
      out.push_back(item);
    }
    pos = comma + 1;
  }
  return out;
}

struct KeyValue {
  std::string key;
  std::string value;
  int line = 0;
};

/// One parsed [section] block with ordered key/value lines.
struct Section {
  std::string header;  // e.g. "node bs-a" or "at 1000 submit_intent"
  int line = 0;
  std::vector<KeyValue> entries;

  const KeyValue* find(const std::string& key) const {
    for (const auto& kv : entries) {
      if (kv.key == key) {
        return &kv;
      }
    }
    return nullptr;
  }
  std::string get(const std::string& key, const std::string& fallback = "") const {
    const KeyValue* kv = find(key);
    return kv == nullptr ? fallback : kv->value;
  }
  std::string require(const std::string& key) const {
    const KeyValue* kv = find(key);
    if (kv == nullptr) {
      throw ScenarioError(line, "missing required key '" + key + "' in [" + header + "]");
    }
    return kv->value;
  }
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const {
    const KeyValue* kv = find(key);
    return kv == nullptr ? fallback : parse_u64(kv->value, kv->line);
  }
};

Intent parse_intent_section(const Section& s) {
  Intent intent;
  auto service = parse_service_type(s.require("service"));
  if (!service) {
    throw ScenarioError(s.line, "unknown service type '" + s.get("service") + "'");
  }
  intent.service_type = *service;
  if (const KeyValue* kv = s.find("name_space")) {
    intent.name_space = parse_name(kv->value, kv->line);
  }
  intent.sla.latency_bound_us = s.get_u64("latency_bound_us", intent.sla.latency_bound_us);
  intent.sla.bandwidth_floor_bps =
      s.get_u64("bandwidth_floor_bps", intent.sla.bandwidth_floor_bps);
  intent.demand_rps = static_cast<std::uint32_t>(s.get_u64("demand_rps", intent.demand_rps));
  intent.redirect_grace_us = s.get_u64("grace_us", intent.redirect_grace_us);
  if (const KeyValue* kv = s.find("gateway_cs_bytes")) {
    intent.gateway_cs_bytes = parse_u64(kv->value, kv->line);
  }
  if (const KeyValue* kv = s.find("network_services")) {
    for (const auto& item : split_list(kv->value)) {
      auto svc = parse_network_service(item);
      if (!svc) {
        throw ScenarioError(kv->line, "unknown network service '" + item + "'");
      }
      intent.network_services.insert(*svc);
    }
  }
  for (const auto& kv : s.entries) {
    if (kv.key.rfind("region ", 0) == 0) {
      ParticipantGroup group;
      group.location = trim(kv.key.substr(7));
      group.count = static_cast<std::uint32_t>(parse_u64(kv.value, kv.line));
      intent.participants.push_back(std::move(group));
    }
  }
  return intent;
}

ScenarioAction parse_action_section(const std::string& verb, const Section& s) {
  if (verb == "submit_intent") {
    return SubmitIntentAction{parse_intent_section(s)};
  }
  if (verb == "ue_attach") {
    return UeAttachAction{s.require("ue"), s.require("poa")};
  }
  if (verb == "ue_detach") {
    return UeDetachAction{s.require("ue")};
  }
  if (verb == "ue_move") {
    UeMoveAction a;
    a.ue = s.require("ue");
    a.to_poa = s.require("to");
    a.gap_us = s.get_u64("gap_us", a.gap_us);
    return a;
  }
  if (verb == "join_conference") {
    JoinConferenceAction a;
    a.ue = s.require("ue");
    a.slice_ns = parse_name(s.require("slice"), s.line);
    a.participant_id = s.get("participant", a.ue);
    a.publish_media = s.get("publish_media");
    a.publish_rate_cps = static_cast<std::uint32_t>(s.get_u64("publish_rate_cps", 0));
    a.chunk_size = static_cast<std::uint32_t>(s.get_u64("chunk_size", a.chunk_size));
    a.publish_count = s.get_u64("publish_count", 0);
    if (!a.publish_media.empty() && a.publish_rate_cps == 0) {
      throw ScenarioError(s.line, "publishing join needs publish_rate_cps > 0");
    }
    return a;
  }
  if (verb == "start_fetch") {
    StartFetchAction a;
    a.ue = s.require("ue");
    a.slice_ns = parse_name(s.require("slice"), s.line);
    a.target_pid = s.get("target");
    if (const KeyValue* kv = s.find("target_prefix")) {
      a.target_prefix = parse_name(kv->value, kv->line);
    }
    if (a.target_pid.empty() && !a.target_prefix) {
      throw ScenarioError(s.line, "start_fetch needs target or target_prefix");
    }
    a.media = s.get("media", a.media);
    a.start_seq = s.get_u64("start_seq", 0);
    a.count = s.get_u64("count", 0);
    return a;
  }
  if (verb == "enable_mobility" || verb == "disable_mobility") {
    Name slice_ns = parse_name(s.require("slice"), s.line);
    std::vector<Name> prefixes;
    if (const KeyValue* kv = s.find("prefixes")) {
      for (const auto& item : split_list(kv->value)) {
        prefixes.push_back(parse_name(item, kv->line));
      }
    }
    if (const KeyValue* kv = s.find("prefix")) {
      prefixes.push_back(parse_name(kv->value, kv->line));
    }
    if (prefixes.empty()) {
      throw ScenarioError(s.line, verb + " needs prefix or prefixes");
    }
    if (verb == "enable_mobility") {
      return EnableMobilityAction{std::move(slice_ns), std::move(prefixes)};
    }
    return DisableMobilityAction{std::move(slice_ns), std::move(prefixes)};
  }
  if (verb == "teardown_slice") {
    return TeardownSliceAction{parse_name(s.require("slice"), s.line)};
  }
  throw ScenarioError(s.line, "unknown timeline action '" + verb + "'");
}

void commit_section(Scenario& scenario, const Section& s) {
  std::istringstream header(s.header);
  std::string kind;
  header >> kind;
  if (kind == "node") {
    std::string id;
    header >> id;
    if (id.empty()) {
      throw ScenarioError(s.line, "[node] needs an id");
    }
    PhysNode node;
    node.id = id;
    auto role = parse_node_role(s.get("role", "icn_bs"));
    if (!role) {
      throw ScenarioError(s.line, "unknown node role '" + s.get("role") + "'");
    }
    node.role = *role;
    node.cpu_capacity = static_cast<std::uint32_t>(s.get_u64("cpu", 4));
    node.storage_capacity = s.get_u64("storage", 50'000'000);
    if (const KeyValue* kv = s.find("locator")) {
      node.locator_prefix = parse_name(kv->value, kv->line);
    }
    scenario.nodes.push_back(std::move(node));
  } else if (kind == "link") {
    std::string id;
    header >> id;
    if (id.empty()) {
      throw ScenarioError(s.line, "[link] needs an id");
    }
    PhysLink link;
    link.id = id;
    link.a = s.require("from");
    link.b = s.require("to");
    link.latency_us = s.get_u64("latency_us", 0);
    link.bandwidth_bps = s.get_u64("bandwidth_bps", 0);
    link.queue_capacity = static_cast<std::uint32_t>(s.get_u64("queue", 64));
    scenario.links.push_back(std::move(link));
  } else if (kind == "radio") {
    scenario.radio.latency_us = s.get_u64("latency_us", scenario.radio.latency_us);
    scenario.radio.bandwidth_bps = s.get_u64("bandwidth_bps", scenario.radio.bandwidth_bps);
    scenario.radio.queue_capacity =
        static_cast<std::uint32_t>(s.get_u64("queue", scenario.radio.queue_capacity));
  } else if (kind == "ue") {
    std::string id;
    header >> id;
    if (id.empty()) {
      throw ScenarioError(s.line, "[ue] needs an id");
    }
    scenario.ues.push_back(id);
  } else if (kind == "at") {
    std::string time_text;
    std::string verb;
    header >> time_text >> verb;
    if (time_text.empty() || verb.empty()) {
      throw ScenarioError(s.line, "[at] needs a time and an action");
    }
    TimelineItem item;
    item.at = parse_u64(time_text, s.line);
    item.line = s.line;
    item.action = parse_action_section(verb, s);
    scenario.timeline.push_back(std::move(item));
  } else {
    throw ScenarioError(s.line, "unknown section kind '" + kind + "'");
  }
}

}  // namespace

Scenario parse_scenario_text(const std::string& text) {
  Scenario scenario;
  std::optional<Section> current;
  std::vector<KeyValue> globals;

  int line_no = 0;
  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ScenarioError(line_no, "unterminated section header");
      }
      if (current) {
        commit_section(scenario, *current);
      }
      current = Section{trim(line.substr(1, line.size() - 2)), line_no, {}};
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ScenarioError(line_no, "expected 'key = value' or a [section] header");
    }
    KeyValue kv{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no};
    if (kv.key.empty()) {
      throw ScenarioError(line_no, "empty key");
    }
    if (current) {
      current->entries.push_back(std::move(kv));
    } else {
      globals.push_back(std::move(kv));
    }
  }
  if (current) {
    commit_section(scenario, *current);
  }

  for (const auto& kv : globals) {
    if (kv.key == "seed") {
      scenario.seed = parse_u64(kv.value, kv.line);
    } else if (kv.key == "duration_us") {
      scenario.duration_us = parse_u64(kv.value, kv.line);
    } else if (kv.key == "interest_lifetime_us") {
      scenario.defaults.interest_lifetime_us = parse_u64(kv.value, kv.line);
    } else if (kv.key == "hop_limit") {
      scenario.defaults.hop_limit = static_cast<std::uint8_t>(parse_u64(kv.value, kv.line));
    } else if (kv.key == "data_freshness_us") {
      scenario.defaults.data_freshness_us = parse_u64(kv.value, kv.line);
    } else if (kv.key == "retx_limit") {
      scenario.defaults.retx_limit = static_cast<std::uint32_t>(parse_u64(kv.value, kv.line));
    } else if (kv.key == "base_cs_bytes") {
      scenario.defaults.base_cs_bytes = parse_u64(kv.value, kv.line);
    } else {
      throw ScenarioError(kv.line, "unknown global key '" + kv.key + "'");
    }
  }

  validate_scenario(scenario);
  return scenario;
}

void validate_scenario(const Scenario& scenario) {
  if (scenario.duration_us == 0) {
    throw ScenarioError(0, "duration_us must be positive");
  }
  std::set<std::string> node_ids;
  for (const auto& node : scenario.nodes) {
    if (!node_ids.insert(node.id).second) {
      throw ScenarioError(0, "duplicate node id '" + node.id + "'");
    }
    if (node.cpu_capacity == 0) {
      throw ScenarioError(0, "node '" + node.id + "' needs cpu > 0");
    }
  }
  std::set<std::string> link_ids;
  for (const auto& link : scenario.links) {
    if (!link_ids.insert(link.id).second) {
      throw ScenarioError(0, "duplicate link id '" + link.id + "'");
    }
    if (node_ids.count(link.a) == 0 || node_ids.count(link.b) == 0) {
      throw ScenarioError(0, "link '" + link.id + "' references undefined node");
    }
    if (link.latency_us == 0 || link.bandwidth_bps == 0 || link.queue_capacity == 0) {
      throw ScenarioError(0, "link '" + link.id + "' needs positive latency, bandwidth, queue");
    }
  }
  if (scenario.radio.latency_us == 0 || scenario.radio.bandwidth_bps == 0 ||
      scenario.radio.queue_capacity == 0) {
    throw ScenarioError(0, "radio needs positive latency, bandwidth, queue");
  }
  std::set<std::string> ue_ids;
  for (const auto& ue : scenario.ues) {
    if (node_ids.count(ue) > 0) {
      throw ScenarioError(0, "ue id collides with node id '" + ue + "'");
    }
    if (!ue_ids.insert(ue).second) {
      throw ScenarioError(0, "duplicate ue id '" + ue + "'");
    }
  }
  if (scenario.defaults.interest_lifetime_us == 0) {
    throw ScenarioError(0, "interest_lifetime_us must be positive");
  }
  if (scenario.defaults.hop_limit == 0) {
    throw ScenarioError(0, "hop_limit must be positive");
  }

  std::map<NodeId, NodeRole> roles;
  for (const auto& node : scenario.nodes) {
    roles[node.id] = node.role;
  }
  auto require_ue = [&](const UeId& ue, int line) {
    if (ue_ids.count(ue) == 0) {
      throw ScenarioError(line, "undefined ue '" + ue + "'");
    }
  };
  auto require_poa = [&](const NodeId& node, int line) {
    auto it = roles.find(node);
    if (it == roles.end()) {
      throw ScenarioError(line, "undefined node '" + node + "'");
    }
    if (!is_poa_role(it->second)) {
      throw ScenarioError(line, "node '" + node + "' is not a point of attachment");
    }
  };

  Timestamp prev = 0;
  for (const auto& item : scenario.timeline) {
    if (item.at < prev) {
      throw ScenarioError(item.line, "timeline not sorted by time");
    }
    prev = item.at;
    std::visit(
        [&](const auto& action) {
          using T = std::decay_t<decltype(action)>;
          if constexpr (std::is_same_v<T, SubmitIntentAction>) {
            const Intent& intent = action.intent;
            if (intent.sla.latency_bound_us == 0 || intent.sla.bandwidth_floor_bps == 0) {
              throw ScenarioError(item.line, "sla bounds must be positive");
            }
            if (intent.service_type == ServiceType::conference) {
              if (intent.participants.empty()) {
                throw ScenarioError(item.line, "conference intent needs >= 1 participant group");
              }
              if (intent.name_space.empty()) {
                throw ScenarioError(item.line, "conference intent needs name_space");
              }
              for (const auto& group : intent.participants) {
                if (node_ids.count(group.location) == 0) {
                  throw ScenarioError(item.line, "undefined region '" + group.location + "'");
                }
              }
            }
          } else if constexpr (std::is_same_v<T, UeAttachAction>) {
            require_ue(action.ue, item.line);
            require_poa(action.poa, item.line);
          } else if constexpr (std::is_same_v<T, UeDetachAction>) {
            require_ue(action.ue, item.line);
          } else if constexpr (std::is_same_v<T, UeMoveAction>) {
            require_ue(action.ue, item.line);
            require_poa(action.to_poa, item.line);
          } else if constexpr (std::is_same_v<T, JoinConferenceAction>) {
            require_ue(action.ue, item.line);
          } else if constexpr (std::is_same_v<T, StartFetchAction>) {
            require_ue(action.ue, item.line);
          }
        },
        item.action);
  }
}

Substrate build_substrate(const Scenario& scenario) {
  Substrate substrate;
  for (const auto& node : scenario.nodes) {
    substrate.add_node(node);
  }
  for (const auto& link : scenario.links) {
    substrate.add_link(link);
  }
  return substrate;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ScenarioError(0, "cannot open scenario file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
    return parse_scenario_json(text);
  }
  return parse_scenario_text(text);
}

}  // namespace icnsim
