#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "icnsim/conference.hpp"
#include "icnsim/engine.hpp"
#include "icnsim/forwarder.hpp"
#include "icnsim/metrics.hpp"
#include "icnsim/mobility.hpp"
#include "icnsim/orchestrator.hpp"
#include "icnsim/scenario.hpp"
#include "icnsim/substrate.hpp"
#include "icnsim/trace.hpp"

namespace icnsim {

/// Composition root: owns the event engine, the physical substrate, every
/// virtual forwarder and service function, the orchestrator, and all UE
/// application state, and executes one scenario deterministically.
class Simulation final : public SliceController {
 public:
  explicit Simulation(Scenario scenario,
                      std::optional<std::uint64_t> seed_override = std::nullopt);
  ~Simulation() override;

  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  /// Runs the whole timeline (or up to `until`) and returns the report.
  MetricsReport run(std::optional<Timestamp> until = std::nullopt);

  const TraceLog& trace() const { return trace_; }
  const Scenario& scenario() const { return scenario_; }
  const Substrate& substrate() const { return substrate_; }
  const Orchestrator& orchestrator() const { return *orch_; }
  Orchestrator& orchestrator() { return *orch_; }
  Engine& engine() { return engine_; }
  const Forwarder* forwarder(const std::string& vnf_id) const;
  std::vector<std::string> forwarder_ids() const;
  std::optional<NodeId> ue_poa(const UeId& ue) const;

  // --- SliceController (domain-controller actuation) ---
  std::string vnf_up(const Name& slice_ns, VnfKind kind, const NodeId& node,
                     const VnfAlloc& alloc, const std::string& label) override;
  void vnf_down(const std::string& vnf_id) override;
  std::pair<FaceId, FaceId> vlink_up(const Name& slice_ns, const std::string& from_vnf,
                                     const std::string& to_vnf) override;
  void vlink_down(const std::string& a_vnf, const std::string& b_vnf) override;
  void fib_install(const Name& slice_ns, const std::string& vnf, const Name& prefix, FaceId face,
                   std::uint32_t cost) override;
  void fib_remove(const Name& slice_ns, const std::string& vnf, const Name& prefix) override;
  void resolution_set(const Name& slice_ns, const std::string& vnf, const Name& prefix) override;
  void resolution_unset(const Name& slice_ns, const std::string& vnf,
                        const Name& prefix) override;
  void anchor_add(const Name& slice_ns, const std::string& vnf, const Name& anchor) override;
  void anchor_remove(const Name& slice_ns, const std::string& vnf, const Name& anchor) override;
  NrsResult nrs_control_register(const Name& name, const Name& locator,
                                 std::uint64_t seq) override;
  NrsResult nrs_control_deregister(const Name& name, std::uint64_t seq) override;
  void mobility_policy(const Name& prefix, bool enabled) override;
  void roster_update(const Name& slice_ns, const std::string& conf_fn_vnf,
                     const std::vector<RosterEntry>& roster) override;
  void slice_active(const Name& ns, ServiceType kind) override;
  void slice_rejected(const Name& ns, const std::string& reason) override;
  void slice_down(const Name& ns) override;
  void namespace_cleanup(const Name& ns) override;
  std::optional<NodeId> ue_position(const UeId& ue) override;

 private:
  friend struct SinkAdapter;

  struct SinkAdapter : ForwarderEventSink {
    Simulation* sim = nullptr;
    std::string vnf;
    NodeId node;
    void on_aggregated(const Name& name, FaceId in_face) override;
    void on_cs_inserted(const Name& name, std::uint64_t bytes) override;
    void on_cs_evicted(const Name& name) override;
    void on_pit_expired(const Name& name) override;
    void on_redirected(const Name& name, const Name& new_locator) override;
  };

  struct FwdInstance {
    std::unique_ptr<Forwarder> fwd;
    NodeId node;
    Name slice_ns;
    FaceId control_face = 0;
    std::unique_ptr<SinkAdapter> sink;
  };

  struct Wire {
    enum class Peer { forwarder, service, ue, control };
    Peer peer = Peer::control;
    std::string peer_id;
    FaceId peer_face = 0;
    std::vector<LinkId> path;  // physical hops from this vnf's node to the peer
  };

  struct ServiceEndpoint {
    std::string id;
    VnfKind kind = VnfKind::discovery_fn;
    NodeId node;
    Name slice_ns;
    std::string anchor_vnf;  // the forwarder this endpoint hangs off
    FaceId anchor_face = 0;
    std::vector<LinkId> path_to_anchor;
    // conference service state
    std::vector<RosterEntry> roster;
    // mobility slice state
    Nrs nrs;
    Msa msa;
    std::map<Name, Interest> msa_pending;  // app name -> waiting resolve interest
    std::uint64_t notify_counter = 0;
  };

  struct LinkState {
    LinkQueue ab;
    LinkQueue ba;
  };

  struct RadioState {
    LinkQueue up;
    LinkQueue down;
  };

  struct Attachment {
    NodeId poa;
    std::string bf_vnf;
    FaceId face = 0;
    std::uint64_t epoch = 0;
    RadioState radio;
  };

  struct ProducerSession {
    Name prefix;
    std::string media;
    std::uint32_t rate_cps = 1;
    std::uint32_t chunk_size = 1'200;
    std::uint64_t publish_count = 0;  // 0 = unbounded
    std::uint64_t next_seq = 0;
    Timestamp joined_at = 0;
    std::map<Name, Data> published;
    std::set<Name> pending;  // names requested before they were published
  };

  struct AppSession {
    Name slice_ns;
    std::string pid;
    bool discovery_done = false;
    bool discovery_pending = false;
    std::uint32_t discovery_rtx = 0;
    Timestamp discovery_first_sent = 0;
    std::uint64_t discovery_token = 0;
    std::optional<DiscoveryResponse> discovery;
    std::optional<ProducerSession> producer;
    std::vector<std::function<void()>> after_discovery;
  };

  struct Outstanding {
    Name name;
    std::uint64_t seq = 0;
    Timestamp first_sent = 0;
    std::uint32_t rtx = 0;
    std::uint64_t token = 0;
  };

  struct FetchFlow {
    UeId ue;
    Name slice_ns;
    std::string media;
    std::string target_pid;
    std::optional<Name> target_prefix;
    std::string flow_id;
    std::uint64_t next_seq = 0;
    std::uint64_t remaining = 0;
    bool endless = true;
    bool waiting_roster = false;
    bool done = false;
    std::optional<Outstanding> outstanding;
  };

  struct UeState {
    UeId id;
    std::optional<Attachment> attachment;
    std::map<Name, AppSession> apps;  // keyed by slice namespace
    std::vector<FetchFlow> flows;
  };

  struct PendingResolution {
    std::vector<std::pair<FaceId, Interest>> originals;
    std::uint64_t token = 0;
  };

  // --- trace helpers ---
  TraceRecord& trace_event(const std::string& node, const std::string& vnf, std::string kind);
  void trace_ctrl(const Name& slice_ns, const std::string& op, const std::string& vnf,
                  const std::vector<std::pair<std::string, std::string>>& extra = {});

  // --- packet movement ---
  void transmit_path(std::vector<LinkId> path, std::size_t idx, NodeId current, Packet packet,
                     std::size_t bytes, std::function<void()> deliver);
  void send_out(const std::string& vnf, FaceId face, Packet packet);
  void send_from_ue(const UeId& ue, Packet packet);
  void send_from_service(const std::string& service_id, Packet packet);
  void deliver_to_forwarder(const std::string& vnf, FaceId face, Packet packet);
  void deliver_to_service(const std::string& service_id, Packet packet);
  void deliver_to_ue(const UeId& ue, std::uint64_t epoch, Packet packet);
  void process_actions(const std::string& vnf, std::vector<ForwardAction> actions);

  // --- node agent (control face) ---
  void handle_invoke_resolution(const std::string& vnf, const InvokeResolution& act);
  void fail_pending_resolution(const std::string& vnf, const Name& resolve_name);
  void handle_control_packet(const std::string& vnf, const Packet& packet);
  void handle_control_interest(const std::string& vnf, const Interest& interest);
  void handle_control_data(const std::string& vnf, const Data& data);

  // --- service endpoints ---
  void service_handle_interest(ServiceEndpoint& svc, const Interest& interest);
  void service_handle_data(ServiceEndpoint& svc, const Data& data);
  void discovery_serve(ServiceEndpoint& svc, const Interest& interest);
  void conf_fn_serve(ServiceEndpoint& svc, const Interest& interest);
  void nrs_serve(ServiceEndpoint& svc, const Interest& interest);
  void msa_serve(ServiceEndpoint& svc, const Interest& interest);
  void reply_from_service(ServiceEndpoint& svc, const Name& name, Bytes payload);
  ServiceEndpoint* find_service(VnfKind kind);

  // --- UE / application layer ---
  void do_attach(const UeId& ue, const NodeId& poa);
  void do_detach(const UeId& ue);
  void do_join(const JoinConferenceAction& action);
  void do_start_fetch(const StartFetchAction& action);
  void start_discovery(const UeId& ue, const Name& slice_ns);
  void send_discovery_interest(const UeId& ue, const Name& slice_ns);
  void flow_begin(const UeId& ue, std::size_t flow_idx);
  void flow_send_roster_interest(const UeId& ue, std::size_t flow_idx);
  void flow_send_chunk(const UeId& ue, std::size_t flow_idx);
  void flow_send_transmission(const UeId& ue, std::size_t flow_idx);
  void flow_advance(const UeId& ue, std::size_t flow_idx);
  void ue_handle_interest(UeState& ue, const Interest& interest);
  void ue_handle_data(UeState& ue, const Data& data);
  void do_publish(const UeId& ue, const Name& slice_ns);
  std::string discovery_flow_id(const UeId& ue, const Name& slice_ns) const;
  bool ue_verifies(const UeState& ue, const Data& data) const;

  void apply_action(const TimelineItem& item);
  std::uint32_t draw_nonce();
  std::uint64_t next_token() { return ++token_counter_; }
  static std::string slice_tag(const Name& ns);
  const Name& infra_key() const;

  Scenario scenario_;
  Substrate substrate_;
  Engine engine_;
  TraceLog trace_;
  std::mt19937_64 rng_;
  std::unique_ptr<Orchestrator> orch_;
  bool ran_ = false;

  std::map<std::string, FwdInstance> forwarders_;
  std::map<std::string, ServiceEndpoint> services_;
  std::map<std::pair<std::string, FaceId>, Wire> wires_;
  std::map<LinkId, LinkState> link_state_;
  std::map<UeId, UeState> ues_;
  std::map<std::string, std::map<Name, PendingResolution>> pending_resolutions_;
  std::uint64_t token_counter_ = 0;
};

}  // namespace icnsim
