#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "icnsim/conference.hpp"
#include "icnsim/fib.hpp"
#include "icnsim/forwarder.hpp"
#include "icnsim/intent.hpp"
#include "icnsim/mobility.hpp"
#include "icnsim/nrs.hpp"

namespace icnsim {

enum class SliceStatus { provisioning, active, torn_down };

struct VnfInstance {
  std::string id;
  VnfKind kind = VnfKind::icn_forwarder;
  NodeId node;
  VnfAlloc alloc;
  Name slice_ns;
  std::string label;
};

struct Slice {
  Name name_space;
  ServiceType kind = ServiceType::conference;
  SliceStatus status = SliceStatus::provisioning;
  std::vector<VnfInstance> vnfs;
  std::vector<std::pair<std::string, std::string>> vlinks;
  std::string gateway_vnf;  // representative gateway (conference slices)
};

/// One pushed rule, remembered so teardown can unwind it exactly.
struct RuleRecord {
  enum class Kind { fib, resolution, anchor };
  Kind kind = Kind::fib;
  std::string vnf;
  Name prefix;
};

struct ConfMember {
  std::string pid;
  UeId ue;
  Name prefix;
};

struct SliceContext {
  Name name_space;
  std::vector<RuleRecord> rules;
  std::map<NodeId, std::string> serving_gateway;  // PoA -> gateway vnf
  std::map<std::string, NodeId> vnf_nodes;
  std::string conf_fn_vnf;
  Duration redirect_grace_us = kDefaultRedirectGraceUs;
};

struct OrchError {
  enum class Kind {
    Unsupported,
    AlreadyActive,
    InsufficientResources,
    NamespaceConflict,
    NotFound,
    Rejected,
    PreconditionFailed,
  };
  Kind kind = Kind::Unsupported;
  std::string detail;
};

const char* to_string(OrchError::Kind kind);

/// Domain-controller surface the orchestrator pushes rules through. Every
/// call is one control message; the implementation traces and counts them.
class SliceController {
 public:
  virtual ~SliceController() = default;

  virtual std::string vnf_up(const Name& slice_ns, VnfKind kind, const NodeId& node,
                             const VnfAlloc& alloc, const std::string& label) = 0;
  virtual void vnf_down(const std::string& vnf_id) = 0;
  /// Creates a bidirectional virtual link mapped onto the physical shortest
  /// path; returns (face at `from`, face at `to`).
  virtual std::pair<FaceId, FaceId> vlink_up(const Name& slice_ns, const std::string& from_vnf,
                                             const std::string& to_vnf) = 0;
  virtual void vlink_down(const std::string& a_vnf, const std::string& b_vnf) = 0;

  virtual void fib_install(const Name& slice_ns, const std::string& vnf, const Name& prefix,
                           FaceId face, std::uint32_t cost) = 0;
  virtual void fib_remove(const Name& slice_ns, const std::string& vnf, const Name& prefix) = 0;
  virtual void resolution_set(const Name& slice_ns, const std::string& vnf,
                              const Name& prefix) = 0;
  virtual void resolution_unset(const Name& slice_ns, const std::string& vnf,
                                const Name& prefix) = 0;
  virtual void anchor_add(const Name& slice_ns, const std::string& vnf, const Name& anchor) = 0;
  virtual void anchor_remove(const Name& slice_ns, const std::string& vnf,
                             const Name& anchor) = 0;

  virtual NrsResult nrs_control_register(const Name& name, const Name& locator,
                                         std::uint64_t seq) = 0;
  virtual NrsResult nrs_control_deregister(const Name& name, std::uint64_t seq) = 0;
  virtual void mobility_policy(const Name& prefix, bool enabled) = 0;
  virtual void roster_update(const Name& slice_ns, const std::string& conf_fn_vnf,
                             const std::vector<RosterEntry>& roster) = 0;

  virtual void slice_active(const Name& ns, ServiceType kind) = 0;
  virtual void slice_rejected(const Name& ns, const std::string& reason) = 0;
  virtual void slice_down(const Name& ns) = 0;
  /// Scrub attachment bindings and redirect state under a dead namespace.
  virtual void namespace_cleanup(const Name& ns) = 0;

  virtual std::optional<NodeId> ue_position(const UeId& ue) = 0;
};

struct OrchConfig {
  std::uint32_t base_fwd_cpu = 1;
  std::uint64_t base_fwd_storage = 1'000'000;
  std::uint64_t base_fwd_cs_bytes = 262'144;
  Duration radio_latency_us = 1'000;
  std::uint64_t radio_bandwidth_bps = 50'000'000;
};

/// Global ICN orchestrator: intent intake, placement, slice lifecycle, and
/// the rule pushes that wire slices into the data plane. Single domain;
/// control requests are serialized on the simulation timeline.
class Orchestrator {
 public:
  Orchestrator(const Substrate& substrate, SliceController& controller, OrchConfig config = {});

  using SliceResult = std::variant<const Slice*, OrchError>;

  /// FP1/FP2: validate and dispatch to the lifecycle entry points.
  SliceResult submit_intent(const Intent& intent);

  SliceResult bootstrap_base_slice();
  std::optional<OrchError> enable_mobility(const Name& slice_ns,
                                           const std::vector<Name>& prefixes);
  std::optional<OrchError> disable_mobility(const Name& slice_ns,
                                            const std::vector<Name>& prefixes);
  std::optional<OrchError> teardown_slice(const Name& slice_ns);

  /// Registers a joining participant and pushes its reachability rules.
  std::variant<ConfMember, OrchError> join_participant(const Name& slice_ns, const UeId& ue,
                                                       const std::string& pid);

  // --- views ---
  const Slice* find_slice(const Name& ns) const;
  bool slice_active(const Name& ns) const;
  const std::map<Name, Slice>& slices() const { return slices_; }
  const SliceContext* context(const Name& ns) const;
  const std::map<NodeId, NodeUsage>& allocations() const { return used_; }
  const std::vector<ConfMember>* members(const Name& ns) const;
  bool mobility_enabled(const Name& prefix) const;
  /// Mobility-enabled producer prefixes owned by this UE.
  std::vector<Name> mobile_prefixes_of(const UeId& ue) const;
  std::uint64_t bump_seq(const Name& prefix);
  Duration redirect_grace_us() const;
  /// Discovery answer for a conference slice as seen from a PoA.
  std::optional<DiscoveryResponse> discovery_info(const Name& ns, const NodeId& poa) const;
  std::optional<std::string> serving_gateway(const Name& ns, const NodeId& poa) const;

  static const Name& base_ns();
  static const Name& mobility_ns();

 private:
  SliceResult create_mobility_slice(const Intent& intent);
  SliceResult create_conference_slice(const Intent& intent);
  std::optional<OrchError> check_namespace(const Name& ns) const;
  void commit_alloc(const NodeId& node, const VnfAlloc& alloc);
  void release_alloc(const NodeId& node, const VnfAlloc& alloc);
  FaceId face_between(const std::string& from, const std::string& to) const;
  std::pair<FaceId, FaceId> make_vlink(const Name& ns, Slice& slice, const std::string& a,
                                       const std::string& b);
  void record_fib(SliceContext& ctx, const Name& ns, const std::string& vnf, const Name& prefix,
                  FaceId face, std::uint32_t cost);
  void record_anchor(SliceContext& ctx, const Name& ns, const std::string& vnf,
                     const Name& anchor);
  NodeId nearest_poa(const NodeId& node) const;
  void install_mobility_reach_rules_for_gateway(const std::string& gw_vnf, FaceId uplink_face);

  const Substrate& substrate_;
  SliceController& controller_;
  OrchConfig config_;

  std::map<Name, Slice> slices_;
  std::map<Name, SliceContext> contexts_;
  std::map<NodeId, NodeUsage> used_;
  std::map<NodeId, std::string> base_fwd_;  // PoA -> base forwarder vnf
  std::map<std::pair<std::string, std::string>, std::pair<FaceId, FaceId>> vlink_faces_;
  std::map<std::string, FaceId> gw_uplink_faces_;  // gateway vnf -> uplink face
  std::map<Name, std::vector<ConfMember>> members_;
  std::set<Name> mobile_prefixes_;
  std::map<Name, std::uint64_t> seq_counters_;
  std::string nrs_vnf_;
  std::string msa_vnf_;
  Duration mobility_grace_us_ = kDefaultRedirectGraceUs;
};

}  // namespace icnsim
