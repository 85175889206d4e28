#include "icnsim/substrate.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace icnsim {

const char* to_string(NodeRole role) {
  switch (role) {
    case NodeRole::icn_bs:
      return "icn_bs";
    case NodeRole::icn_sr:
      return "icn_sr";
    case NodeRole::core_router:
      return "core_router";
    case NodeRole::cloud:
      return "cloud";
  }
  return "?";
}

std::optional<NodeRole> parse_node_role(const std::string& text) {
  if (text == "icn_bs") return NodeRole::icn_bs;
  if (text == "icn_sr") return NodeRole::icn_sr;
  if (text == "core_router") return NodeRole::core_router;
  if (text == "cloud") return NodeRole::cloud;
  return std::nullopt;
}

Duration serialization_delay_us(std::size_t bytes, std::uint64_t bandwidth_bps) {
  if (bandwidth_bps == 0) {
    throw std::invalid_argument("bandwidth must be positive");
  }
  std::uint64_t bits = static_cast<std::uint64_t>(bytes) * 8;
  return (bits * 1'000'000 + bandwidth_bps - 1) / bandwidth_bps;
}

std::optional<LinkQueue::Admitted> LinkQueue::admit(Timestamp now, Duration serialize_us,
                                                    Duration latency_us,
                                                    std::uint32_t capacity) {
  if (queued_ >= capacity) {
    return std::nullopt;
  }
  ++queued_;
  Timestamp start = std::max(now, busy_until_);
  Timestamp done = start + serialize_us;
  busy_until_ = done;
  return Admitted{done, done + latency_us};
}

void Substrate::add_node(PhysNode node) {
  if (node.locator_prefix.empty()) {
    node.locator_prefix = Name{"poa", node.id};
  }
  adjacency_.try_emplace(node.id);
  nodes_[node.id] = std::move(node);
}

void Substrate::add_link(PhysLink link) {
  if (nodes_.count(link.a) == 0 || nodes_.count(link.b) == 0) {
    throw std::invalid_argument("link endpoints must be existing nodes: " + link.id);
  }
  if (link.latency_us == 0 || link.bandwidth_bps == 0) {
    throw std::invalid_argument("link latency and bandwidth must be positive: " + link.id);
  }
  adjacency_[link.a].push_back(link.id);
  adjacency_[link.b].push_back(link.id);
  links_[link.id] = std::move(link);
}

const PhysNode* Substrate::node(const NodeId& id) const {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second;
}

const PhysLink* Substrate::link(const LinkId& id) const {
  auto it = links_.find(id);
  return it == links_.end() ? nullptr : &it->second;
}

std::vector<NodeId> Substrate::poa_nodes() const {
  std::vector<NodeId> out;
  for (const auto& [id, node] : nodes_) {
    if (is_poa_role(node.role)) {
      out.push_back(id);
    }
  }
  return out;
}

std::optional<PathInfo> Substrate::shortest_path(const NodeId& from, const NodeId& to) const {
  if (nodes_.count(from) == 0 || nodes_.count(to) == 0) {
    return std::nullopt;
  }
  if (from == to) {
    return PathInfo{{}, 0, std::numeric_limits<std::uint64_t>::max()};
  }

  constexpr Duration kInf = std::numeric_limits<Duration>::max();
  std::map<NodeId, Duration> dist;
  std::map<NodeId, std::pair<NodeId, LinkId>> pred;
  std::set<NodeId> done;
  for (const auto& [id, _] : nodes_) {
    dist[id] = kInf;
  }
  dist[from] = 0;

  while (true) {
    // smallest (dist, id) not yet finalized; map order makes ties canonical
    const NodeId* current = nullptr;
    Duration best = kInf;
    for (const auto& [id, d] : dist) {
      if (done.count(id) == 0 && d < best) {
        best = d;
        current = &id;
      }
    }
    if (current == nullptr) {
      break;
    }
    if (*current == to) {
      break;
    }
    done.insert(*current);
    auto adj = adjacency_.find(*current);
    for (const auto& link_id : adj->second) {
      const PhysLink& l = links_.at(link_id);
      const NodeId& other = (l.a == *current) ? l.b : l.a;
      Duration cand = best + l.latency_us;
      if (cand < dist[other] ||
          (cand == dist[other] && dist[other] != kInf &&
           std::make_pair(*current, link_id) < pred[other])) {
        dist[other] = cand;
        pred[other] = {*current, link_id};
      }
    }
  }

  if (dist[to] == kInf) {
    return std::nullopt;
  }
  PathInfo info;
  info.latency_us = dist[to];
  info.bottleneck_bps = std::numeric_limits<std::uint64_t>::max();
  NodeId walk = to;
  while (walk != from) {
    const auto& [prev, link_id] = pred.at(walk);
    info.links.push_back(link_id);
    info.bottleneck_bps = std::min(info.bottleneck_bps, links_.at(link_id).bandwidth_bps);
    walk = prev;
  }
  std::reverse(info.links.begin(), info.links.end());
  return info;
}

std::optional<Duration> Substrate::path_latency(const NodeId& from, const NodeId& to) const {
  auto p = shortest_path(from, to);
  if (!p) {
    return std::nullopt;
  }
  return p->latency_us;
}

}  // namespace icnsim
