#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "icnsim/intent.hpp"
#include "icnsim/substrate.hpp"
#include "icnsim/time.hpp"

namespace icnsim {

struct ScenarioError : std::runtime_error {
  ScenarioError(int line_no, const std::string& message)
      : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + message
                                       : message),
        line(line_no) {}
  int line = 0;
};

struct RadioSpec {
  Duration latency_us = 1'000;
  std::uint64_t bandwidth_bps = 50'000'000;
  std::uint32_t queue_capacity = 64;
};

struct ScenarioDefaults {
  Duration interest_lifetime_us = kDefaultInterestLifetimeUs;
  std::uint8_t hop_limit = 32;
  Duration data_freshness_us = 60'000'000;
  std::uint32_t retx_limit = 3;
  std::uint64_t base_cs_bytes = 262'144;
};

// --- timeline actions ---

struct SubmitIntentAction {
  Intent intent;
};
struct UeAttachAction {
  UeId ue;
  NodeId poa;
};
struct UeDetachAction {
  UeId ue;
};
struct UeMoveAction {
  UeId ue;
  NodeId to_poa;
  Duration gap_us = 50'000;
};
struct JoinConferenceAction {
  UeId ue;
  Name slice_ns;
  std::string participant_id;  // defaults to the ue id
  // producer side; publishing starts at join when media is set
  std::string publish_media;
  std::uint32_t publish_rate_cps = 0;
  std::uint32_t chunk_size = 1'200;
  std::uint64_t publish_count = 0;  // 0 = until scenario end
};
struct StartFetchAction {
  UeId ue;
  Name slice_ns;
  std::string target_pid;               // resolved through the roster
  std::optional<Name> target_prefix;    // explicit target, skips the roster
  std::string media = "video";
  std::uint64_t start_seq = 0;
  std::uint64_t count = 0;  // 0 = until scenario end
};
struct EnableMobilityAction {
  Name slice_ns;
  std::vector<Name> prefixes;
};
struct DisableMobilityAction {
  Name slice_ns;
  std::vector<Name> prefixes;
};
struct TeardownSliceAction {
  Name slice_ns;
};

using ScenarioAction =
    std::variant<SubmitIntentAction, UeAttachAction, UeDetachAction, UeMoveAction,
                 JoinConferenceAction, StartFetchAction, EnableMobilityAction,
                 DisableMobilityAction, TeardownSliceAction>;

struct TimelineItem {
  Timestamp at = 0;
  ScenarioAction action;
  int line = 0;  // source line for diagnostics
};

struct Scenario {
  std::uint64_t seed = 1;
  Duration duration_us = 1'000'000;
  ScenarioDefaults defaults;
  RadioSpec radio;
  std::vector<PhysNode> nodes;
  std::vector<PhysLink> links;
  std::vector<UeId> ues;
  std::vector<TimelineItem> timeline;
};

/// Loads .json as JSON, anything else as the structured-text format.
/// Validates invariants; throws ScenarioError with a line number.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario_text(const std::string& text);
Scenario parse_scenario_json(const std::string& text);

/// Cross-checks identifiers, ordering and value ranges.
void validate_scenario(const Scenario& scenario);

/// Substrate built from the scenario topology.
Substrate build_substrate(const Scenario& scenario);

}  // namespace icnsim
