#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

#include "icnsim/forwarder.hpp"
#include "icnsim/time.hpp"

namespace icnsim {

enum class EventKind {
  PacketArrival,
  TimerFire,
  UeAttach,
  UeDetach,
  ScenarioAction,
};

/// Deterministic discrete-event queue. Events run in nondecreasing time
/// order; ties break by insertion sequence number.
class Engine {
 public:
  Timestamp now() const { return now_; }

  void schedule(Timestamp at, EventKind kind, std::function<void()> fn);
  void schedule_in(Duration delay, EventKind kind, std::function<void()> fn) {
    schedule(now_ + delay, kind, fn);
  }

  /// Processes every event with time <= t_end. Returns the number of events
  /// processed. Time never runs backwards; afterwards now() == t_end.
  std::uint64_t run_until(Timestamp t_end);

  bool empty() const { return queue_.empty(); }
  std::size_t pending() const { return queue_.size(); }

 private:
  struct Event {
    Timestamp time;
    std::uint64_t seq;
    EventKind kind;
    std::function<void()> fn;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) {
        return a.time > b.time;
      }
      return a.seq > b.seq;
    }
  };

  Timestamp now_ = 0;
  std::uint64_t next_seq_ = 0;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
};

}  // namespace icnsim
