#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "icnsim/content_store.hpp"
#include "icnsim/dead_nonce_list.hpp"
#include "icnsim/fib.hpp"
#include "icnsim/packet.hpp"
#include "icnsim/pit.hpp"

namespace icnsim {

enum class DropReason {
  HopLimitExceeded,
  DuplicateNonce,
  NoRoute,
  ProvenanceFailed,
  Unsolicited,
};

const char* to_string(DropReason reason);

struct SendData {
  FaceId face = 0;
  Data data;
  bool from_cache = false;
};

struct SendInterest {
  FaceId face = 0;
  Interest interest;
};

/// The forwarder cannot satisfy or route the Interest itself; the mobility
/// machinery resolves the name and re-injects a hinted copy.
struct InvokeResolution {
  Interest interest;
  FaceId in_face = 0;
};

struct Drop {
  DropReason reason = DropReason::NoRoute;
  Name name;
  bool was_interest = true;
};

using ForwardAction = std::variant<SendData, SendInterest, InvokeResolution, Drop>;

/// Grace-period redirect held at a producer's previous point of attachment:
/// matching Interests are re-emitted with the new locator as forwarding hint.
struct RedirectEntry {
  Name name;
  Name new_locator;
  Timestamp expiry_us = 0;
};

/// Observer for table-internal events the action list does not carry.
class ForwarderEventSink {
 public:
  virtual ~ForwarderEventSink() = default;
  virtual void on_aggregated(const Name& name, FaceId in_face) {}
  virtual void on_cs_inserted(const Name& name, std::uint64_t bytes) {}
  virtual void on_cs_evicted(const Name& name) {}
  virtual void on_pit_expired(const Name& name) {}
  virtual void on_redirected(const Name& name, const Name& new_locator) {}
};

struct SimulationBug : std::logic_error {
  using std::logic_error::logic_error;
};

/// One virtual ICN forwarder: faces, FIB, PIT, content store, resolution
/// rules, trust anchors and the two forwarding pipelines. Single-threaded;
/// driven by the event engine.
class Forwarder {
 public:
  Forwarder(std::string id, Name locator, std::uint64_t cs_capacity_bytes,
            std::size_t dead_nonce_capacity = 1024)
      : id_(std::move(id)), locator_(std::move(locator)), cs_(cs_capacity_bytes),
        dnl_(dead_nonce_capacity) {}

  const std::string& id() const { return id_; }
  const Name& locator() const { return locator_; }

  // --- faces ---
  FaceId add_face();
  void remove_face(FaceId face);
  bool has_face(FaceId face) const { return faces_.count(face) > 0; }
  const std::set<FaceId>& faces() const { return faces_; }

  // --- pipelines ---
  std::vector<ForwardAction> on_interest(FaceId in_face, const Interest& interest, Timestamp now);
  std::vector<ForwardAction> on_data(FaceId in_face, const Data& data, Timestamp now);

  /// Removes every PIT entry with expiry <= now, remembering their nonces.
  std::vector<Name> expire_pit(Timestamp now);

  // --- rule management (driven by domain controllers) ---
  void install_fib(const Name& prefix, std::vector<NextHop> nexthops);
  bool remove_fib(const Name& prefix);
  void set_resolution_rule(const Name& prefix);
  bool unset_resolution_rule(const Name& prefix);
  void add_trust_anchor(const Name& anchor);
  bool remove_trust_anchor(const Name& anchor);
  void install_redirect(const Name& name, const Name& new_locator, Timestamp expiry_us);
  /// Drops redirects with expiry <= now; returns their names.
  std::vector<Name> sweep_redirects(Timestamp now);
  /// Drops every redirect whose name is under prefix; returns their names.
  std::vector<Name> remove_redirects_under(const Name& prefix);

  const Fib& fib() const { return fib_; }
  Fib& fib() { return fib_; }
  const Pit& pit() const { return pit_; }
  const ContentStore& cs() const { return cs_; }
  const std::set<Name>& resolution_rules() const { return resolution_rules_; }
  const std::set<Name>& trust_anchors() const { return trust_anchors_; }
  const std::map<Name, RedirectEntry>& redirects() const { return redirects_; }

  void set_event_sink(ForwarderEventSink* sink) { sink_ = sink; }

  /// Structural invariants; throws SimulationBug on violation.
  void check_invariants() const;

 private:
  bool hint_terminates_here(const Name& hint) const;
  const RedirectEntry* match_redirect(const Name& name, Timestamp now) const;
  bool matches_resolution_rule(const Name& name) const;

  std::string id_;
  Name locator_;  // routable prefix of the hosting node
  Fib fib_;
  Pit pit_;
  ContentStore cs_;
  DeadNonceList dnl_;
  std::set<FaceId> faces_;
  std::set<Name> resolution_rules_;
  std::set<Name> trust_anchors_;
  std::map<Name, RedirectEntry> redirects_;
  FaceId next_face_ = 1;
  ForwarderEventSink* sink_ = nullptr;
};

}  // namespace icnsim
