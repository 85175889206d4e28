#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "icnsim/name.hpp"
#include "icnsim/time.hpp"

namespace icnsim {

using NodeId = std::string;
using LinkId = std::string;
using UeId = std::string;

enum class NodeRole { icn_bs, icn_sr, core_router, cloud };

const char* to_string(NodeRole role);
std::optional<NodeRole> parse_node_role(const std::string& text);

/// True for roles a UE can attach to.
inline bool is_poa_role(NodeRole role) {
  return role == NodeRole::icn_bs || role == NodeRole::icn_sr;
}

struct PhysNode {
  NodeId id;
  NodeRole role = NodeRole::core_router;
  std::uint32_t cpu_capacity = 0;       // abstract compute units
  std::uint64_t storage_capacity = 0;   // bytes
  Name locator_prefix;                  // routable prefix, e.g. /poa/<id>
};

struct PhysLink {
  LinkId id;
  NodeId a;
  NodeId b;
  Duration latency_us = 0;
  std::uint64_t bandwidth_bps = 0;
  std::uint32_t queue_capacity = 0;  // packets, waiting + in service
};

/// Transmission time of size bytes at bandwidth_bps, in whole microseconds
/// (rounded up).
Duration serialization_delay_us(std::size_t bytes, std::uint64_t bandwidth_bps);

/// One direction of a link's FIFO: a single server (the wire) plus a bounded
/// queue counted in packets, tail-dropping when full.
class LinkQueue {
 public:
  struct Admitted {
    Timestamp serialize_done;  // when the queue slot frees up
    Timestamp arrival;         // serialize_done + propagation latency
  };

  /// Admits a packet at `now`, or returns nullopt on tail drop. The caller
  /// must invoke release() at serialize_done.
  std::optional<Admitted> admit(Timestamp now, Duration serialize_us, Duration latency_us,
                                std::uint32_t capacity);
  void release() { --queued_; }

  std::uint32_t queued() const { return queued_; }

 private:
  std::uint32_t queued_ = 0;
  Timestamp busy_until_ = 0;
};

struct PathInfo {
  std::vector<LinkId> links;
  Duration latency_us = 0;
  std::uint64_t bottleneck_bps = 0;
};

/// Static physical topology plus shortest-path queries. Radio links are not
/// part of the backbone; attachments are handled by the simulation layer.
class Substrate {
 public:
  void add_node(PhysNode node);
  void add_link(PhysLink link);

  const PhysNode* node(const NodeId& id) const;
  const PhysLink* link(const LinkId& id) const;
  const std::map<NodeId, PhysNode>& nodes() const { return nodes_; }
  const std::map<LinkId, PhysLink>& links() const { return links_; }

  std::vector<NodeId> poa_nodes() const;

  /// Shortest path by summed latency; deterministic tie-breaking by
  /// (node id, link id). Same-node paths are empty with zero latency.
  std::optional<PathInfo> shortest_path(const NodeId& from, const NodeId& to) const;
  std::optional<Duration> path_latency(const NodeId& from, const NodeId& to) const;

 private:
  std::map<NodeId, PhysNode> nodes_;
  std::map<LinkId, PhysLink> links_;
  std::map<NodeId, std::vector<LinkId>> adjacency_;
};

}  // namespace icnsim
