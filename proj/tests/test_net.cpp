#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "icnsim/engine.hpp"
#include "icnsim/substrate.hpp"

using namespace icnsim;

namespace {

Substrate line_topology() {
  Substrate s;
  s.add_node(PhysNode{"bs-a", NodeRole::icn_bs, 8, 1'000'000, {}});
  s.add_node(PhysNode{"mid", NodeRole::icn_sr, 8, 1'000'000, {}});
  s.add_node(PhysNode{"bs-b", NodeRole::icn_bs, 8, 1'000'000, {}});
  s.add_node(PhysNode{"island", NodeRole::cloud, 8, 1'000'000, {}});
  s.add_link(PhysLink{"l1", "bs-a", "mid", 1'000, 8'000'000, 8});
  s.add_link(PhysLink{"l2", "mid", "bs-b", 2'000, 8'000'000, 8});
  return s;
}

}  // namespace

TEST_CASE("engine processes events in time order with insertion-order ties") {
  Engine engine;
  std::vector<int> order;
  engine.schedule(10, EventKind::TimerFire, [&] { order.push_back(1); });
  engine.schedule(5, EventKind::TimerFire, [&] { order.push_back(2); });
  engine.schedule(10, EventKind::TimerFire, [&] { order.push_back(3); });
  engine.schedule(10, EventKind::TimerFire, [&] { order.push_back(4); });
  auto processed = engine.run_until(10);
  CHECK(processed == 4);
  CHECK(order == std::vector<int>{2, 1, 3, 4});
  CHECK(engine.now() == 10);
}

TEST_CASE("engine with nothing to do returns immediately") {
  Engine engine;
  CHECK(engine.run_until(1'000) == 0);
  CHECK(engine.now() == 1'000);
}

TEST_CASE("run_until leaves later events queued") {
  Engine engine;
  int fired = 0;
  engine.schedule(10, EventKind::TimerFire, [&] { ++fired; });
  engine.schedule(20, EventKind::TimerFire, [&] { ++fired; });
  engine.run_until(15);
  CHECK(fired == 1);
  CHECK(engine.pending() == 1);
  engine.run_until(25);
  CHECK(fired == 2);
}

TEST_CASE("scheduling into the past is a simulation bug") {
  Engine engine;
  engine.schedule(10, EventKind::TimerFire, [] {});
  engine.run_until(10);
  CHECK_THROWS_AS(engine.schedule(5, EventKind::TimerFire, [] {}), SimulationBug);
}

TEST_CASE("events scheduled during execution run in the same sweep") {
  Engine engine;
  std::vector<int> order;
  engine.schedule(10, EventKind::TimerFire, [&] {
    order.push_back(1);
    engine.schedule(10, EventKind::TimerFire, [&] { order.push_back(2); });
  });
  engine.run_until(10);
  CHECK(order == std::vector<int>{1, 2});
}

TEST_CASE("serialization delay matches the bits-over-bandwidth arithmetic") {
  // 1000 bytes at 8 Mbit/s is exactly 1000 us on the wire
  CHECK(serialization_delay_us(1'000, 8'000'000) == 1'000);
  CHECK(serialization_delay_us(0, 8'000'000) == 0);
  CHECK(serialization_delay_us(1, 8'000'000) == 1);  // rounded up
}

TEST_CASE("link admission: latency plus serialization, tail drop when full") {
  LinkQueue q;
  // idle link: arrival = now + serialization + latency
  auto a = q.admit(0, 1'000, 1'000, 1);
  REQUIRE(a.has_value());
  CHECK(a->serialize_done == 1'000);
  CHECK(a->arrival == 2'000);
  // capacity 1 and the first packet still serializing: tail drop
  CHECK_FALSE(q.admit(0, 1'000, 1'000, 1).has_value());
  q.release();
  // a queued second packet waits for the wire
  auto b = q.admit(500, 1'000, 1'000, 2);
  REQUIRE(b.has_value());
  CHECK(b->serialize_done == 2'000);
  CHECK(b->arrival == 3'000);
}

TEST_CASE("tiny control packets are latency-dominated") {
  LinkQueue q;
  auto a = q.admit(0, serialization_delay_us(8, 8'000'000), 1'000, 4);
  REQUIRE(a.has_value());
  CHECK(a->arrival == 1'000 + 8);
}

TEST_CASE("shortest path sums latencies and reports the bottleneck") {
  Substrate s = line_topology();
  auto path = s.shortest_path("bs-a", "bs-b");
  REQUIRE(path.has_value());
  CHECK(path->links == std::vector<LinkId>{"l1", "l2"});
  CHECK(path->latency_us == 3'000);
  CHECK(path->bottleneck_bps == 8'000'000);
  CHECK(s.shortest_path("bs-a", "island") == std::nullopt);
  auto self = s.shortest_path("mid", "mid");
  REQUIRE(self.has_value());
  CHECK(self->links.empty());
  CHECK(self->latency_us == 0);
}

TEST_CASE("shortest path tie-break is deterministic") {
  Substrate s;
  s.add_node(PhysNode{"a", NodeRole::icn_bs, 1, 1, {}});
  s.add_node(PhysNode{"b", NodeRole::icn_bs, 1, 1, {}});
  s.add_node(PhysNode{"u", NodeRole::icn_sr, 1, 1, {}});
  s.add_node(PhysNode{"v", NodeRole::icn_sr, 1, 1, {}});
  s.add_link(PhysLink{"a-u", "a", "u", 1'000, 1'000'000, 4});
  s.add_link(PhysLink{"a-v", "a", "v", 1'000, 1'000'000, 4});
  s.add_link(PhysLink{"u-b", "u", "b", 1'000, 1'000'000, 4});
  s.add_link(PhysLink{"v-b", "v", "b", 1'000, 1'000'000, 4});
  auto p1 = s.shortest_path("a", "b");
  auto p2 = s.shortest_path("a", "b");
  REQUIRE(p1.has_value());
  CHECK(p1->links == p2->links);
  CHECK(p1->latency_us == 2'000);
}

TEST_CASE("locator prefixes default to /poa/<id>") {
  Substrate s = line_topology();
  CHECK(s.node("bs-a")->locator_prefix == Name::parse("/poa/bs-a"));
  CHECK(s.poa_nodes() == std::vector<NodeId>{"bs-a", "bs-b", "mid"});
}
