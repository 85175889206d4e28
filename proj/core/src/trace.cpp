#include "icnsim/trace.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

namespace icnsim {

namespace {

bool needs_escape(char c) {
  return c == ' ' || c == '%' || c == '=' || c == '\n' || c == '\r' || c == '\t';
}

char hex_digit(unsigned v) { return v < 10 ? static_cast<char>('0' + v) : static_cast<char>('a' + v - 10); }

unsigned from_hex(char c) {
  if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
  if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
  if (c >= 'A' && c <= 'F') return static_cast<unsigned>(c - 'A' + 10);
  throw std::invalid_argument("bad hex digit in trace line");
}

}  // namespace

std::string trace_escape(const std::string& raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    if (needs_escape(c)) {
      out += '%';
      out += hex_digit((static_cast<unsigned char>(c) >> 4) & 0xF);
      out += hex_digit(static_cast<unsigned char>(c) & 0xF);
    } else {
      out += c;
    }
  }
  return out;
}

std::string trace_unescape(const std::string& escaped) {
  std::string out;
  out.reserve(escaped.size());
  for (std::size_t i = 0; i < escaped.size(); ++i) {
    if (escaped[i] == '%') {
      if (i + 2 >= escaped.size()) {
        throw std::invalid_argument("truncated escape in trace line");
      }
      out += static_cast<char>((from_hex(escaped[i + 1]) << 4) | from_hex(escaped[i + 2]));
      i += 2;
    } else {
      out += escaped[i];
    }
  }
  return out;
}

const std::string* TraceRecord::field(const std::string& key) const {
  for (const auto& [k, v] : fields) {
    if (k == key) {
      return &v;
    }
  }
  return nullptr;
}

std::uint64_t TraceRecord::field_u64(const std::string& key, std::uint64_t fallback) const {
  const std::string* v = field(key);
  if (v == nullptr) {
    return fallback;
  }
  std::uint64_t out = fallback;
  std::from_chars(v->data(), v->data() + v->size(), out);
  return out;
}

std::string TraceRecord::to_line() const {
  std::string line = "t=" + std::to_string(time);
  line += " node=" + trace_escape(node);
  line += " vnf=" + trace_escape(vnf);
  line += " ev=" + trace_escape(kind);
  for (const auto& [k, v] : fields) {
    line += ' ';
    line += k;
    line += '=';
    line += trace_escape(v);
  }
  return line;
}

TraceRecord TraceRecord::from_line(const std::string& line) {
  TraceRecord rec;
  std::istringstream in(line);
  std::string token;
  int idx = 0;
  while (in >> token) {
    auto eq = token.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("bad trace token: " + token);
    }
    std::string key = token.substr(0, eq);
    std::string value = trace_unescape(token.substr(eq + 1));
    switch (idx) {
      case 0:
        if (key != "t") throw std::invalid_argument("trace line must start with t=");
        rec.time = std::stoull(value);
        break;
      case 1:
        if (key != "node") throw std::invalid_argument("expected node= field");
        rec.node = value;
        break;
      case 2:
        if (key != "vnf") throw std::invalid_argument("expected vnf= field");
        rec.vnf = value;
        break;
      case 3:
        if (key != "ev") throw std::invalid_argument("expected ev= field");
        rec.kind = value;
        break;
      default:
        rec.fields.emplace_back(std::move(key), std::move(value));
        break;
    }
    ++idx;
  }
  if (idx < 4) {
    throw std::invalid_argument("truncated trace line: " + line);
  }
  return rec;
}

TraceRecord& TraceLog::append(Timestamp time, std::string node, std::string vnf,
                              std::string kind) {
  records_.push_back(TraceRecord{time, std::move(node), std::move(vnf), std::move(kind), {}});
  return records_.back();
}

std::string TraceLog::to_text() const {
  std::string out;
  for (const auto& rec : records_) {
    out += rec.to_line();
    out += '\n';
  }
  return out;
}

std::vector<TraceRecord> parse_trace_text(const std::string& text) {
  std::vector<TraceRecord> records;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) {
      eol = text.size();
    }
    std::string line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.empty()) {
      continue;
    }
    records.push_back(TraceRecord::from_line(line));
  }
  return records;
}

}  // namespace icnsim
