#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>

#include "icnsim/mobility.hpp"
#include "icnsim/nrs.hpp"

using namespace icnsim;

namespace {

// independent replayed-map oracle: applies the same monotone-seq semantics
// to a flat map, resolving by linear scan over all registered prefixes
struct OracleNrs {
  struct Rec {
    Name locator;
    std::uint64_t seq = 0;
    bool registered = false;
  };
  std::map<Name, Rec> map;

  bool apply_register(const Name& name, const Name& locator, std::uint64_t seq) {
    auto it = map.find(name);
    if (it != map.end() && seq <= it->second.seq) {
      return false;
    }
    map[name] = Rec{locator, seq, true};
    return true;
  }
  bool apply_deregister(const Name& name, std::uint64_t seq) {
    auto it = map.find(name);
    if (it != map.end() && seq <= it->second.seq) {
      return false;
    }
    auto& rec = map[name];
    rec.seq = seq;
    rec.registered = false;
    return true;
  }
  std::optional<Name> resolve(const Name& name) const {
    const Rec* best = nullptr;
    std::size_t best_len = 0;
    for (const auto& [prefix, rec] : map) {
      if (rec.registered && prefix.is_prefix_of(name) && prefix.size() >= best_len) {
        if (best == nullptr || prefix.size() > best_len) {
          best = &rec;
          best_len = prefix.size();
        }
      }
    }
    if (best == nullptr) {
      return std::nullopt;
    }
    return best->locator;
  }
};

Name mobile_name(std::mt19937& rng) {
  std::vector<std::string> parts{"conf"};
  std::size_t extra = 1 + rng() % 3;
  for (std::size_t i = 0; i < extra; ++i) {
    parts.push_back(std::string(1, static_cast<char>('a' + rng() % 5)));
  }
  return Name(parts);
}

Name locator_of(std::mt19937& rng) {
  return Name{"poa", std::string(1, static_cast<char>('A' + rng() % 6))};
}

}  // namespace

TEST_CASE("register, update, and stale rejection") {
  Nrs nrs;
  Name alice = Name::parse("/conf/alice");
  CHECK(nrs.register_name(alice, Name::parse("/poa/A"), 1) == NrsResult::Accepted);
  CHECK(*nrs.resolve(alice) == Name::parse("/poa/A"));

  CHECK(nrs.register_name(alice, Name::parse("/poa/B"), 2) == NrsResult::Accepted);
  const NrsRecord* rec = nrs.record(alice);
  REQUIRE(rec != nullptr);
  CHECK(rec->previous_locator.has_value());
  CHECK(*rec->previous_locator == Name::parse("/poa/A"));
  CHECK(*nrs.resolve(alice) == Name::parse("/poa/B"));

  // an old update must not regress the record
  CHECK(nrs.register_name(alice, Name::parse("/poa/A"), 1) == NrsResult::StaleSeq);
  CHECK(*nrs.resolve(alice) == Name::parse("/poa/B"));
  CHECK(nrs.record(alice)->seq == 2);
}

TEST_CASE("resolution uses the longest registered prefix") {
  Nrs nrs;
  nrs.register_name(Name::parse("/conf/alice"), Name::parse("/poa/B"), 1);
  CHECK(*nrs.resolve(Name::parse("/conf/alice/video/seg9")) == Name::parse("/poa/B"));
  CHECK(nrs.resolve(Name::parse("/conf/carol")) == std::nullopt);

  nrs.register_name(Name::parse("/conf/alice/video"), Name::parse("/poa/C"), 1);
  CHECK(*nrs.resolve(Name::parse("/conf/alice/video/seg9")) == Name::parse("/poa/C"));
  CHECK(*nrs.resolve(Name::parse("/conf/alice/audio/3")) == Name::parse("/poa/B"));
}

TEST_CASE("deregistration semantics and tombstones") {
  Nrs nrs;
  Name alice = Name::parse("/conf/alice");
  nrs.register_name(alice, Name::parse("/poa/A"), 2);
  CHECK(nrs.deregister_name(alice, 3) == NrsResult::Accepted);
  CHECK(nrs.resolve(alice) == std::nullopt);

  // deregister of an unknown name is an accepted tombstone
  CHECK(nrs.deregister_name(Name::parse("/conf/ghost"), 5) == NrsResult::Accepted);
  CHECK(nrs.resolve(Name::parse("/conf/ghost")) == std::nullopt);
  // and the tombstone's seq still gates later updates
  CHECK(nrs.register_name(Name::parse("/conf/ghost"), Name::parse("/poa/A"), 4) ==
        NrsResult::StaleSeq);

  // equal seq after an accepted update stays stale
  CHECK(nrs.deregister_name(alice, 3) == NrsResult::StaleSeq);
}

TEST_CASE("random operation streams agree with the replayed-map oracle") {
  std::mt19937 rng(2024);
  Nrs nrs;
  OracleNrs oracle;
  for (int i = 0; i < 5'000; ++i) {
    int op = rng() % 3;
    Name name = mobile_name(rng);
    if (op == 0) {
      std::uint64_t seq = rng() % 64;
      Name loc = locator_of(rng);
      bool accepted = nrs.register_name(name, loc, seq) == NrsResult::Accepted;
      CHECK(accepted == oracle.apply_register(name, loc, seq));
    } else if (op == 1) {
      std::uint64_t seq = rng() % 64;
      bool accepted = nrs.deregister_name(name, seq) == NrsResult::Accepted;
      CHECK(accepted == oracle.apply_deregister(name, seq));
    } else {
      CHECK(nrs.resolve(name) == oracle.resolve(name));
    }
  }
}

TEST_CASE("injected reorderings are rejected in full") {
  std::mt19937 rng(31337);
  Nrs nrs;
  int injected = 0;
  int rejected = 0;
  for (int i = 0; i < 1'000; ++i) {
    Name name = mobile_name(rng);
    std::uint64_t base = 1 + rng() % 100;
    nrs.register_name(name, locator_of(rng), base);
    std::uint64_t stored = nrs.record(name)->seq;
    // deliver an update that is at or behind the stored sequence
    std::uint64_t stale = stored - rng() % stored;
    Name old_locator = nrs.record(name)->locator;
    ++injected;
    if (nrs.register_name(name, Name::parse("/poa/STALE"), stale) == NrsResult::StaleSeq) {
      ++rejected;
      CHECK(nrs.record(name)->locator == old_locator);
    }
  }
  CHECK(injected == rejected);
}

TEST_CASE("msa resolution attaches the locator without touching the name") {
  Nrs nrs;
  nrs.register_name(Name::parse("/conf/alice"), Name::parse("/poa/B"), 1);
  Msa msa;
  Interest interest;
  interest.name = Name::parse("/conf/alice/seg1");
  interest.nonce = 42;

  auto result = msa.resolve(interest, nrs);
  const auto* hinted = std::get_if<Interest>(&result);
  REQUIRE(hinted != nullptr);
  CHECK(hinted->name == interest.name);
  CHECK(hinted->nonce == interest.nonce);
  REQUIRE(hinted->forwarding_hint.has_value());
  CHECK(*hinted->forwarding_hint == Name::parse("/poa/B"));

  Interest unknown;
  unknown.name = Name::parse("/conf/carol/seg1");
  CHECK(std::holds_alternative<ResolutionFailed>(msa.resolve(unknown, nrs)));

  Interest already = *hinted;
  CHECK_THROWS_AS(msa.resolve(already, nrs), std::logic_error);
}

TEST_CASE("mobility wire names round-trip the embedded application name") {
  Name app = Name::parse("/conf/alice/video/7");
  Name wire = mobility_wire::make_msa_resolve_name(app);
  auto parsed = mobility_wire::parse_msa_resolve_name(wire);
  REQUIRE(parsed.has_value());
  CHECK(*parsed == app);
  CHECK(mobility_wire::parse_msa_resolve_name(Name::parse("/conf/x")) == std::nullopt);

  auto payload = mobility_wire::encode_locator_payload(Name::parse("/poa/B"));
  CHECK(*mobility_wire::decode_locator_payload(payload) == Name::parse("/poa/B"));
  auto miss = mobility_wire::encode_locator_payload(std::nullopt);
  CHECK(mobility_wire::decode_locator_payload(miss) == std::nullopt);
}
