#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "icnsim/time.hpp"

namespace icnsim {

/// One structured trace line: timestamp, node, emitting vnf (or "-"), event
/// kind, then ordered key=value fields. The metrics report is derived from
/// these records and nothing else, so a saved trace fully reproduces it.
struct TraceRecord {
  Timestamp time = 0;
  std::string node = "-";
  std::string vnf = "-";
  std::string kind;
  std::vector<std::pair<std::string, std::string>> fields;

  const std::string* field(const std::string& key) const;
  std::uint64_t field_u64(const std::string& key, std::uint64_t fallback = 0) const;

  std::string to_line() const;
  static TraceRecord from_line(const std::string& line);
};

std::string trace_escape(const std::string& raw);
std::string trace_unescape(const std::string& escaped);

class TraceLog {
 public:
  TraceRecord& append(Timestamp time, std::string node, std::string vnf, std::string kind);
  const std::vector<TraceRecord>& records() const { return records_; }
  std::string to_text() const;
  void clear() { records_.clear(); }

 private:
  std::vector<TraceRecord> records_;
};

std::vector<TraceRecord> parse_trace_text(const std::string& text);

}  // namespace icnsim
