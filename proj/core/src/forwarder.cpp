#include "icnsim/forwarder.hpp"

#include <algorithm>

#include "icnsim/signature.hpp"

namespace icnsim {

const char* to_string(DropReason reason) {
  switch (reason) {
    case DropReason::HopLimitExceeded:
      return "HopLimitExceeded";
    case DropReason::DuplicateNonce:
      return "DuplicateNonce";
    case DropReason::NoRoute:
      return "NoRoute";
    case DropReason::ProvenanceFailed:
      return "ProvenanceFailed";
    case DropReason::Unsolicited:
      return "Unsolicited";
  }
  return "?";
}

FaceId Forwarder::add_face() {
  FaceId id = next_face_++;
  faces_.insert(id);
  return id;
}

void Forwarder::remove_face(FaceId face) {
  faces_.erase(face);
  pit_.remove_face(face);
  fib_.remove_face(face);
}

bool Forwarder::hint_terminates_here(const Name& hint) const {
  return !locator_.empty() && hint.is_prefix_of(locator_);
}

const RedirectEntry* Forwarder::match_redirect(const Name& name, Timestamp now) const {
  const RedirectEntry* best = nullptr;
  for (const auto& [prefix, entry] : redirects_) {
    if (entry.expiry_us > now && prefix.is_prefix_of(name)) {
      if (best == nullptr || prefix.size() > best->name.size()) {
        best = &entry;
      }
    }
  }
  return best;
}

bool Forwarder::matches_resolution_rule(const Name& name) const {
  return std::any_of(resolution_rules_.begin(), resolution_rules_.end(),
                     [&name](const Name& rule) { return rule.is_prefix_of(name); });
}

std::vector<ForwardAction> Forwarder::on_interest(FaceId in_face, const Interest& interest,
                                                  Timestamp now) {
  if (!has_face(in_face)) {
    throw SimulationBug(id_ + ": interest from unknown face " + std::to_string(in_face));
  }

  Interest in = interest;

  // 1. hop limit
  if (in.hop_limit == 0) {
    return {Drop{DropReason::HopLimitExceeded, in.name, true}};
  }
  --in.hop_limit;
  if (in.hop_limit == 0) {
    return {Drop{DropReason::HopLimitExceeded, in.name, true}};
  }

  // 2. loop suppression
  if (pit_.has_nonce(in.name, in.nonce) || dnl_.contains(in.name, in.nonce)) {
    return {Drop{DropReason::DuplicateNonce, in.name, true}};
  }

  // 3. content store
  if (const Data* cached = cs_.lookup(in.name, now)) {
    return {SendData{in_face, *cached, true}};
  }

  // 4. aggregation: a pending entry means someone upstream already owes us
  // this Data; record the new requester and stay quiet.
  if (PitEntry* entry = pit_.find(in.name)) {
    Pit::aggregate(*entry, InRecord{in_face, in.nonce});
    if (sink_ != nullptr) {
      sink_->on_aggregated(in.name, in_face);
    }
    return {};
  }

  // 4b. grace-period redirect at a stale point of attachment
  if (const RedirectEntry* redirect = match_redirect(in.name, now)) {
    if (!in.forwarding_hint || hint_terminates_here(*in.forwarding_hint)) {
      in.forwarding_hint = redirect->new_locator;
      if (sink_ != nullptr) {
        sink_->on_redirected(in.name, redirect->new_locator);
      }
    }
  }

  // 5. resolution trigger
  if (!in.forwarding_hint && matches_resolution_rule(in.name)) {
    return {InvokeResolution{in, in_face}};
  }

  // 6. FIB forwarding; a hint routes the packet until it terminates at the
  // hinted locator, where name routing resumes.
  const Name* key = &in.name;
  if (in.forwarding_hint && !hint_terminates_here(*in.forwarding_hint)) {
    key = &*in.forwarding_hint;
  }
  if (const FibEntry* route = fib_.lookup(*key)) {
    const NextHop* best = nullptr;
    for (const auto& hop : route->nexthops) {
      if (hop.face == in_face) {
        continue;
      }
      if (best == nullptr || hop.cost < best->cost ||
          (hop.cost == best->cost && hop.face < best->face)) {
        best = &hop;
      }
    }
    if (best != nullptr) {
      PitEntry& entry = pit_.create(in.name, InRecord{in_face, in.nonce},
                                    now + in.lifetime_us);
      entry.out_faces.insert(best->face);
      return {SendInterest{best->face, in}};
    }
  }

  // 7. nowhere to go
  return {Drop{DropReason::NoRoute, in.name, true}};
}

std::vector<ForwardAction> Forwarder::on_data(FaceId in_face, const Data& data, Timestamp now) {
  if (!has_face(in_face)) {
    throw SimulationBug(id_ + ": data from unknown face " + std::to_string(in_face));
  }

  // 1. provenance gate; failures are not cached
  if (!verify(data, trust_anchors_)) {
    return {Drop{DropReason::ProvenanceFailed, data.name, false}};
  }

  // 2. PIT match
  auto matches = pit_.match_data(data.name);
  if (matches.empty()) {
    return {Drop{DropReason::Unsolicited, data.name, false}};
  }

  // 3. cache
  auto evicted = cs_.insert(data, now);
  if (sink_ != nullptr) {
    for (const auto& name : evicted) {
      sink_->on_cs_evicted(name);
    }
    sink_->on_cs_inserted(data.name, data.payload.size());
  }

  // 4. deliver downstream and retire the entries
  std::vector<ForwardAction> actions;
  std::vector<Name> satisfied;
  for (PitEntry* entry : matches) {
    for (const auto& rec : entry->in_records) {
      actions.push_back(SendData{rec.face, data, false});
      dnl_.insert(entry->name, rec.nonce);
    }
    satisfied.push_back(entry->name);
  }
  for (const auto& name : satisfied) {
    pit_.erase(name);
  }
  return actions;
}

std::vector<Name> Forwarder::expire_pit(Timestamp now) {
  std::vector<std::pair<Name, std::uint32_t>> dead_pairs;
  auto expired = pit_.expire(now, dead_pairs);
  for (const auto& [name, nonce] : dead_pairs) {
    dnl_.insert(name, nonce);
  }
  if (sink_ != nullptr) {
    for (const auto& name : expired) {
      sink_->on_pit_expired(name);
    }
  }
  return expired;
}

void Forwarder::install_fib(const Name& prefix, std::vector<NextHop> nexthops) {
  fib_.install(prefix, std::move(nexthops));
}

bool Forwarder::remove_fib(const Name& prefix) { return fib_.remove(prefix); }

void Forwarder::set_resolution_rule(const Name& prefix) { resolution_rules_.insert(prefix); }

bool Forwarder::unset_resolution_rule(const Name& prefix) {
  return resolution_rules_.erase(prefix) > 0;
}

void Forwarder::add_trust_anchor(const Name& anchor) { trust_anchors_.insert(anchor); }

bool Forwarder::remove_trust_anchor(const Name& anchor) {
  return trust_anchors_.erase(anchor) > 0;
}

void Forwarder::install_redirect(const Name& name, const Name& new_locator, Timestamp expiry_us) {
  redirects_[name] = RedirectEntry{name, new_locator, expiry_us};
}

std::vector<Name> Forwarder::sweep_redirects(Timestamp now) {
  std::vector<Name> expired;
  for (auto it = redirects_.begin(); it != redirects_.end();) {
    if (it->second.expiry_us <= now) {
      expired.push_back(it->first);
      it = redirects_.erase(it);
    } else {
      ++it;
    }
  }
  return expired;
}

std::vector<Name> Forwarder::remove_redirects_under(const Name& prefix) {
  std::vector<Name> removed;
  for (auto it = redirects_.begin(); it != redirects_.end();) {
    if (prefix.is_prefix_of(it->first)) {
      removed.push_back(it->first);
      it = redirects_.erase(it);
    } else {
      ++it;
    }
  }
  return removed;
}

void Forwarder::check_invariants() const {
  if (cs_.used_bytes() > cs_.capacity_bytes()) {
    throw SimulationBug(id_ + ": content store over capacity");
  }
  for (const auto& [name, entry] : pit_.entries()) {
    if (entry.in_records.empty()) {
      throw SimulationBug(id_ + ": PIT entry with no in-records: " + name.to_string());
    }
  }
  for (const auto& [prefix, entry] : fib_.entries()) {
    if (entry.nexthops.empty()) {
      throw SimulationBug(id_ + ": FIB entry with no nexthops: " + prefix.to_string());
    }
    for (const auto& hop : entry.nexthops) {
      if (faces_.count(hop.face) == 0) {
        throw SimulationBug(id_ + ": FIB nexthop on unknown face");
      }
    }
  }
}

}  // namespace icnsim
