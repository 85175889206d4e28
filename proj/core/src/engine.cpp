#include "icnsim/engine.hpp"

namespace icnsim {

void Engine::schedule(Timestamp at, EventKind kind, std::function<void()> fn) {
  if (at < now_) {
    throw SimulationBug("event scheduled in the past");
  }
  queue_.push(Event{at, next_seq_++, kind, std::move(fn)});
}

std::uint64_t Engine::run_until(Timestamp t_end) {
  std::uint64_t processed = 0;
  while (!queue_.empty() && queue_.top().time <= t_end) {
    Event ev = queue_.top();
    queue_.pop();
    now_ = ev.time;
    ev.fn();
    ++processed;
  }
  now_ = t_end;
  return processed;
}

}  // namespace icnsim
