#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "icnsim/forwarder.hpp"
#include "icnsim/signature.hpp"

using namespace icnsim;

namespace {

struct Fixture {
  Forwarder fwd{"fwd-1", Name::parse("/poa/n1"), 100'000};
  FaceId f1, f2, f3;

  Fixture() {
    f1 = fwd.add_face();
    f2 = fwd.add_face();
    f3 = fwd.add_face();
    fwd.add_trust_anchor(Name::parse("/conf"));
  }
};

Interest make_interest(const std::string& name, std::uint32_t nonce, std::uint8_t hops = 8,
                       Duration lifetime = 1'000'000) {
  Interest in;
  in.name = Name::parse(name);
  in.nonce = nonce;
  in.lifetime_us = lifetime;
  in.hop_limit = hops;
  return in;
}

Data make_data(const std::string& name, std::size_t bytes = 100) {
  Name n = Name::parse(name);
  return make_signed_data(n, Bytes(bytes, 0x42), 1'000'000, Name::parse("/conf/key"));
}

template <typename T>
const T* only(const std::vector<ForwardAction>& actions) {
  REQUIRE(actions.size() == 1);
  return std::get_if<T>(&actions[0]);
}

}  // namespace

TEST_CASE("hop limit: decrement then drop at zero") {
  Fixture fx;
  fx.fwd.install_fib(Name::parse("/conf"), {NextHop{fx.f2, 0}});

  auto actions = fx.fwd.on_interest(fx.f1, make_interest("/conf/a", 1, 1), 0);
  const auto* drop = only<Drop>(actions);
  REQUIRE(drop != nullptr);
  CHECK(drop->reason == DropReason::HopLimitExceeded);

  actions = fx.fwd.on_interest(fx.f1, make_interest("/conf/a", 2, 2), 0);
  const auto* send = only<SendInterest>(actions);
  REQUIRE(send != nullptr);
  CHECK(send->interest.hop_limit == 1);
}

TEST_CASE("duplicate nonces are dropped via PIT and dead-nonce log") {
  Fixture fx;
  fx.fwd.install_fib(Name::parse("/conf"), {NextHop{fx.f2, 0}});
  fx.fwd.on_interest(fx.f1, make_interest("/conf/a", 7), 0);

  auto actions = fx.fwd.on_interest(fx.f3, make_interest("/conf/a", 7), 1);
  const auto* drop = only<Drop>(actions);
  REQUIRE(drop != nullptr);
  CHECK(drop->reason == DropReason::DuplicateNonce);

  // after the entry dies, the dead-nonce log still suppresses the nonce
  fx.fwd.expire_pit(2'000'000);
  actions = fx.fwd.on_interest(fx.f3, make_interest("/conf/a", 7), 2'000'001);
  const auto* drop2 = only<Drop>(actions);
  REQUIRE(drop2 != nullptr);
  CHECK(drop2->reason == DropReason::DuplicateNonce);
}

TEST_CASE("cache hit answers on the arrival face without touching the PIT") {
  Fixture fx;
  fx.fwd.install_fib(Name::parse("/conf"), {NextHop{fx.f2, 0}});
  Data data = make_data("/conf/a/1");
  fx.fwd.on_interest(fx.f1, make_interest("/conf/a/1", 1), 0);
  fx.fwd.on_data(fx.f2, data, 10);
  REQUIRE(fx.fwd.pit().size() == 0);

  auto actions = fx.fwd.on_interest(fx.f3, make_interest("/conf/a/1", 2), 20);
  const auto* send = only<SendData>(actions);
  REQUIRE(send != nullptr);
  CHECK(send->face == fx.f3);
  CHECK(send->from_cache);
  CHECK(fx.fwd.pit().size() == 0);
}

TEST_CASE("aggregation: one upstream send, N downstream deliveries") {
  Fixture fx;
  fx.fwd.install_fib(Name::parse("/conf"), {NextHop{fx.f3, 0}});

  auto first = fx.fwd.on_interest(fx.f1, make_interest("/conf/x", 1), 0);
  CHECK(only<SendInterest>(first) != nullptr);
  auto second = fx.fwd.on_interest(fx.f2, make_interest("/conf/x", 2), 1);
  CHECK(second.empty());  // aggregated, no upstream copy

  const PitEntry* entry = fx.fwd.pit().find(Name::parse("/conf/x"));
  REQUIRE(entry != nullptr);
  CHECK(entry->in_records.size() == 2);

  auto deliveries = fx.fwd.on_data(fx.f3, make_data("/conf/x"), 5);
  REQUIRE(deliveries.size() == 2);
  CHECK(std::get<SendData>(deliveries[0]).face == fx.f1);
  CHECK(std::get<SendData>(deliveries[1]).face == fx.f2);
  CHECK(fx.fwd.pit().size() == 0);
}

TEST_CASE("aggregation property: any interleaving yields 1 upstream and N downstream") {
  std::mt19937 rng(11);
  for (int round = 0; round < 40; ++round) {
    Forwarder fwd("fwd", Name::parse("/poa/x"), 100'000);
    FaceId up = fwd.add_face();
    fwd.add_trust_anchor(Name::parse("/conf"));
    fwd.install_fib(Name::parse("/conf"), {NextHop{up, 0}});
    std::size_t n = 1 + rng() % 12;
    std::vector<FaceId> faces;
    for (std::size_t i = 0; i < n; ++i) {
      faces.push_back(fwd.add_face());
    }
    std::size_t upstream = 0;
    for (std::size_t i = 0; i < n; ++i) {
      auto actions = fwd.on_interest(faces[i], make_interest("/conf/x", 1000 + i), i);
      for (const auto& a : actions) {
        if (std::holds_alternative<SendInterest>(a)) {
          ++upstream;
        }
      }
    }
    CHECK(upstream == 1);
    auto deliveries = fwd.on_data(up, make_data("/conf/x"), 100);
    CHECK(deliveries.size() == n);
  }
}

TEST_CASE("resolution trigger fires only for rule-matched, hint-less interests") {
  Fixture fx;
  fx.fwd.install_fib(Name::parse("/conf"), {NextHop{fx.f2, 0}});
  fx.fwd.install_fib(Name::parse("/poa/n2"), {NextHop{fx.f3, 0}});
  fx.fwd.set_resolution_rule(Name::parse("/conf/alice"));

  auto actions = fx.fwd.on_interest(fx.f1, make_interest("/conf/alice/seg1", 1), 0);
  const auto* invoke = only<InvokeResolution>(actions);
  REQUIRE(invoke != nullptr);
  CHECK(invoke->interest.name == Name::parse("/conf/alice/seg1"));
  CHECK(invoke->in_face == fx.f1);

  // hinted copy re-entering the pipeline routes by the hint instead
  Interest hinted = make_interest("/conf/alice/seg1", 2);
  hinted.forwarding_hint = Name::parse("/poa/n2");
  actions = fx.fwd.on_interest(fx.f1, hinted, 1);
  const auto* send = only<SendInterest>(actions);
  REQUIRE(send != nullptr);
  CHECK(send->face == fx.f3);
  CHECK(send->interest.name == Name::parse("/conf/alice/seg1"));

  // other names under the slice are untouched by the rule
  actions = fx.fwd.on_interest(fx.f1, make_interest("/conf/bob/seg1", 3), 2);
  CHECK(only<SendInterest>(actions) != nullptr);

  // switching the rule off restores plain forwarding
  CHECK(fx.fwd.unset_resolution_rule(Name::parse("/conf/alice")));
  actions = fx.fwd.on_interest(fx.f1, make_interest("/conf/alice/seg2", 4), 3);
  CHECK(only<SendInterest>(actions) != nullptr);
}

TEST_CASE("a terminating hint resumes name-based forwarding") {
  Fixture fx;
  fx.fwd.install_fib(Name::parse("/conf/alice"), {NextHop{fx.f2, 0}});
  Interest hinted = make_interest("/conf/alice/seg1", 1);
  hinted.forwarding_hint = Name::parse("/poa/n1");  // this node's locator
  auto actions = fx.fwd.on_interest(fx.f1, hinted, 0);
  const auto* send = only<SendInterest>(actions);
  REQUIRE(send != nullptr);
  CHECK(send->face == fx.f2);
}

TEST_CASE("no route and same-face-only routes drop") {
  Fixture fx;
  auto actions = fx.fwd.on_interest(fx.f1, make_interest("/nowhere/x", 1), 0);
  const auto* drop = only<Drop>(actions);
  REQUIRE(drop != nullptr);
  CHECK(drop->reason == DropReason::NoRoute);

  // the only nexthop is the arrival face: never reflect an interest
  fx.fwd.install_fib(Name::parse("/conf"), {NextHop{fx.f1, 0}});
  actions = fx.fwd.on_interest(fx.f1, make_interest("/conf/a", 2), 1);
  const auto* drop2 = only<Drop>(actions);
  REQUIRE(drop2 != nullptr);
  CHECK(drop2->reason == DropReason::NoRoute);
}

TEST_CASE("nexthop selection: lowest cost, then lowest face id") {
  Forwarder fwd("fwd", Name::parse("/poa/x"), 1'000);
  FaceId in = fwd.add_face();
  FaceId a = fwd.add_face();
  FaceId b = fwd.add_face();
  FaceId c = fwd.add_face();
  fwd.install_fib(Name::parse("/conf"), {NextHop{c, 5}, NextHop{b, 2}, NextHop{a, 2}});
  auto actions = fwd.on_interest(in, make_interest("/conf/a", 1), 0);
  const auto* send = only<SendInterest>(actions);
  REQUIRE(send != nullptr);
  CHECK(send->face == a);
}

TEST_CASE("provenance gate: unanchored or tampered data is dropped uncached") {
  // two configurations of the same forwarder: with and without the anchor
  for (bool anchored : {true, false}) {
    Forwarder fwd("fwd", Name::parse("/poa/x"), 100'000);
    FaceId consumer = fwd.add_face();
    FaceId producer = fwd.add_face();
    if (anchored) {
      fwd.add_trust_anchor(Name::parse("/conf"));
    }
    fwd.install_fib(Name::parse("/conf"), {NextHop{producer, 0}});
    fwd.on_interest(consumer, make_interest("/conf/a", 1), 0);
    auto actions = fwd.on_data(producer, make_data("/conf/a"), 1);
    if (anchored) {
      REQUIRE(actions.size() == 1);
      CHECK(std::get_if<SendData>(&actions[0]) != nullptr);
      CHECK(fwd.cs().contains(Name::parse("/conf/a")));
    } else {
      const auto* drop = only<Drop>(actions);
      REQUIRE(drop != nullptr);
      CHECK(drop->reason == DropReason::ProvenanceFailed);
      CHECK(fwd.cs().size() == 0);
      CHECK(fwd.pit().size() == 1);  // still pending; nothing was consumed
    }
  }
}

TEST_CASE("unsolicited data is dropped and never cached") {
  Fixture fx;
  auto actions = fx.fwd.on_data(fx.f1, make_data("/conf/zzz"), 0);
  const auto* drop = only<Drop>(actions);
  REQUIRE(drop != nullptr);
  CHECK(drop->reason == DropReason::Unsolicited);
  CHECK(fx.fwd.cs().size() == 0);
}

TEST_CASE("redirect entries re-emit matching interests with the new locator") {
  Fixture fx;
  fx.fwd.install_fib(Name::parse("/poa/n2"), {NextHop{fx.f2, 0}});
  fx.fwd.install_redirect(Name::parse("/conf/alice"), Name::parse("/poa/n2"), 100);

  auto actions = fx.fwd.on_interest(fx.f1, make_interest("/conf/alice/seg9", 1), 10);
  const auto* send = only<SendInterest>(actions);
  REQUIRE(send != nullptr);
  CHECK(send->face == fx.f2);
  REQUIRE(send->interest.forwarding_hint.has_value());
  CHECK(*send->interest.forwarding_hint == Name::parse("/poa/n2"));

  // after expiry the redirect is inert
  fx.fwd.sweep_redirects(100);
  actions = fx.fwd.on_interest(fx.f1, make_interest("/conf/alice/seg10", 2), 101);
  const auto* drop = only<Drop>(actions);
  REQUIRE(drop != nullptr);
  CHECK(drop->reason == DropReason::NoRoute);
}

TEST_CASE("face removal prunes PIT in-records and FIB nexthops") {
  Fixture fx;
  fx.fwd.install_fib(Name::parse("/conf"), {NextHop{fx.f3, 0}});
  fx.fwd.on_interest(fx.f1, make_interest("/conf/a", 1), 0);
  fx.fwd.on_interest(fx.f2, make_interest("/conf/a", 2), 1);
  fx.fwd.remove_face(fx.f1);
  const PitEntry* entry = fx.fwd.pit().find(Name::parse("/conf/a"));
  REQUIRE(entry != nullptr);
  CHECK(entry->in_records.size() == 1);
  fx.fwd.remove_face(fx.f2);
  CHECK(fx.fwd.pit().size() == 0);
  fx.fwd.remove_face(fx.f3);
  CHECK(fx.fwd.fib().size() == 0);
  CHECK_THROWS_AS(fx.fwd.on_interest(fx.f1, make_interest("/conf/a", 3), 2), SimulationBug);
}

TEST_CASE("pipeline determinism: identical inputs give identical action sequences") {
  auto run = [] {
    Forwarder fwd("fwd", Name::parse("/poa/x"), 10'000);
    FaceId a = fwd.add_face();
    FaceId b = fwd.add_face();
    fwd.add_trust_anchor(Name::parse("/conf"));
    fwd.install_fib(Name::parse("/conf"), {NextHop{b, 1}});
    std::vector<std::string> log;
    auto record = [&log](const std::vector<ForwardAction>& actions) {
      for (const auto& act : actions) {
        if (const auto* s = std::get_if<SendInterest>(&act)) {
          log.push_back("I:" + s->interest.name.to_string() + ":" + std::to_string(s->face));
        } else if (const auto* d = std::get_if<SendData>(&act)) {
          log.push_back("D:" + d->data.name.to_string() + ":" + std::to_string(d->face));
        } else if (std::get_if<InvokeResolution>(&act) != nullptr) {
          log.push_back("R");
        } else {
          log.push_back("X");
        }
      }
    };
    for (std::uint32_t i = 0; i < 20; ++i) {
      record(fwd.on_interest(a, make_interest("/conf/seg" + std::to_string(i % 5), i), i));
    }
    record(fwd.on_data(b, make_data("/conf/seg1"), 30));
    return log;
  };
  CHECK(run() == run());
}
