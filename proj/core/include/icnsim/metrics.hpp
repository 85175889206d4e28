#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "icnsim/trace.hpp"

namespace icnsim {

struct FlowMetrics {
  std::uint64_t interests_sent = 0;   // every transmission, retransmissions included
  std::uint64_t satisfied = 0;        // transmissions answered while pending
  std::uint64_t chunks_received = 0;
  std::uint64_t chunks_lost = 0;
  std::uint64_t timeouts = 0;
  std::uint64_t in_flight = 0;        // pending at scenario end
  std::uint64_t latency_mean_us = 0;
  std::uint64_t latency_p95_us = 0;
  std::vector<std::uint64_t> latencies_us;
};

struct SliceMetrics {
  std::int64_t vnfs = 0;              // up minus down, i.e. alive at end
  std::uint64_t control_messages = 0;
  std::int64_t fib_rules = 0;         // installed minus removed
};

struct NetworkMetrics {
  std::uint64_t cache_hits = 0;
  std::uint64_t aggregated_interests = 0;
  std::uint64_t redirected_interests = 0;
  std::uint64_t dropped_packets = 0;
  std::uint64_t nrs_messages = 0;
};

struct Conservation {
  std::uint64_t interests_sent = 0;
  std::uint64_t satisfied = 0;
  std::uint64_t timed_out = 0;
  std::uint64_t in_flight = 0;
  bool holds = true;
};

/// The run's aggregate view. Derived purely from trace records: rebuilding
/// from a saved trace file reproduces it byte for byte.
struct MetricsReport {
  std::map<std::string, FlowMetrics> flows;
  std::map<std::string, SliceMetrics> slices;
  NetworkMetrics network;
  Conservation conservation;

  std::string to_json() const;
};

MetricsReport build_report(std::span<const TraceRecord> records);

/// Structural invariants over a trace: monotone time and the Interest
/// conservation identity. Returns human-readable violations (empty = ok).
std::vector<std::string> check_trace_invariants(std::span<const TraceRecord> records);

}  // namespace icnsim
