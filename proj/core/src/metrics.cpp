#include "icnsim/metrics.hpp"

#include <algorithm>

#include <json.hpp>

namespace icnsim {

MetricsReport build_report(std::span<const TraceRecord> records) {
  MetricsReport report;
  for (const auto& rec : records) {
    if (rec.kind == "app_interest") {
      auto& flow = report.flows[*rec.field("flow")];
      ++flow.interests_sent;
    } else if (rec.kind == "app_data") {
      auto& flow = report.flows[*rec.field("flow")];
      ++flow.satisfied;
      ++flow.chunks_received;
      flow.latencies_us.push_back(rec.field_u64("latency_us"));
    } else if (rec.kind == "app_timeout") {
      ++report.flows[*rec.field("flow")].timeouts;
    } else if (rec.kind == "app_chunk_lost") {
      ++report.flows[*rec.field("flow")].chunks_lost;
    } else if (rec.kind == "ctrl") {
      auto& slice = report.slices[*rec.field("slice")];
      ++slice.control_messages;
      const std::string& op = *rec.field("op");
      if (op == "vnf_up") {
        ++slice.vnfs;
      } else if (op == "vnf_down") {
        --slice.vnfs;
      } else if (op == "fib_install") {
        ++slice.fib_rules;
      } else if (op == "fib_remove") {
        --slice.fib_rules;
      }
    } else if (rec.kind == "send_data") {
      if (rec.field_u64("cache") == 1) {
        ++report.network.cache_hits;
      }
    } else if (rec.kind == "aggregate") {
      ++report.network.aggregated_interests;
    } else if (rec.kind == "redirect") {
      ++report.network.redirected_interests;
    } else if (rec.kind == "drop" || rec.kind == "link_drop") {
      ++report.network.dropped_packets;
    } else if (rec.kind == "nrs_register" || rec.kind == "nrs_deregister" ||
               rec.kind == "nrs_resolve" || rec.kind == "msa_resolve") {
      ++report.network.nrs_messages;
    }
  }

  for (auto& [key, flow] : report.flows) {
    flow.in_flight = flow.interests_sent - std::min(flow.interests_sent,
                                                    flow.satisfied + flow.timeouts);
    if (!flow.latencies_us.empty()) {
      std::vector<std::uint64_t> sorted = flow.latencies_us;
      std::sort(sorted.begin(), sorted.end());
      std::uint64_t total = 0;
      for (auto v : sorted) {
        total += v;
      }
      flow.latency_mean_us = total / sorted.size();
      // nearest-rank percentile
      std::size_t rank = (sorted.size() * 95 + 99) / 100;
      flow.latency_p95_us = sorted[std::min(sorted.size() - 1, rank == 0 ? 0 : rank - 1)];
    }
    report.conservation.interests_sent += flow.interests_sent;
    report.conservation.satisfied += flow.satisfied;
    report.conservation.timed_out += flow.timeouts;
    report.conservation.in_flight += flow.in_flight;
    if (flow.satisfied + flow.timeouts + flow.in_flight != flow.interests_sent ||
        flow.in_flight > 1) {
      report.conservation.holds = false;
    }
  }
  return report;
}

std::string MetricsReport::to_json() const {
  nlohmann::json j;
  for (const auto& [key, flow] : flows) {
    j["flows"][key] = {
        {"interests_sent", flow.interests_sent},
        {"satisfied", flow.satisfied},
        {"chunks_received", flow.chunks_received},
        {"chunks_lost", flow.chunks_lost},
        {"timeouts", flow.timeouts},
        {"in_flight", flow.in_flight},
        {"latency_mean_us", flow.latency_mean_us},
        {"latency_p95_us", flow.latency_p95_us},
    };
  }
  if (flows.empty()) {
    j["flows"] = nlohmann::json::object();
  }
  for (const auto& [key, slice] : slices) {
    j["slices"][key] = {
        {"vnfs", slice.vnfs},
        {"control_messages", slice.control_messages},
        {"fib_rules", slice.fib_rules},
    };
  }
  if (slices.empty()) {
    j["slices"] = nlohmann::json::object();
  }
  j["network"] = {
      {"cache_hits", network.cache_hits},
      {"aggregated_interests", network.aggregated_interests},
      {"redirected_interests", network.redirected_interests},
      {"dropped_packets", network.dropped_packets},
      {"nrs_messages", network.nrs_messages},
  };
  j["conservation"] = {
      {"interests_sent", conservation.interests_sent},
      {"satisfied", conservation.satisfied},
      {"timed_out", conservation.timed_out},
      {"in_flight", conservation.in_flight},
      {"holds", conservation.holds},
  };
  return j.dump(2) + "\n";
}

std::vector<std::string> check_trace_invariants(std::span<const TraceRecord> records) {
  std::vector<std::string> problems;
  Timestamp prev = 0;
  for (const auto& rec : records) {
    if (rec.time < prev) {
      problems.push_back("trace time went backwards at t=" + std::to_string(rec.time));
    }
    prev = rec.time;
  }
  MetricsReport report = build_report(records);
  for (const auto& [key, flow] : report.flows) {
    if (flow.satisfied + flow.timeouts + flow.in_flight != flow.interests_sent) {
      problems.push_back("flow " + key + ": conservation identity violated");
    }
    if (flow.in_flight > 1) {
      problems.push_back("flow " + key + ": more than one interest in flight");
    }
    if (flow.chunks_received < flow.satisfied) {
      problems.push_back("flow " + key + ": satisfied exceeds received chunks");
    }
  }
  if (!report.conservation.holds) {
    problems.push_back("global conservation identity violated");
  }
  return problems;
}

}  // namespace icnsim
