#include "cbrp/event_queue.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace cbrp {

bool has_duplicates(const std::vector<NodeId>& path) {
  std::vector<NodeId> sorted = path;
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

EventHandle EventQueue::schedule(double time, EventKind kind) {
  if (time < now_)
    throw std::logic_error("event scheduled in the past: t=" + std::to_string(time) +
                           " now=" + std::to_string(now_));
  const EventHandle seq = next_seq_++;
  heap_.push(Event{time, seq, std::move(kind)});
  live_.insert(seq);
  return seq;
}

void EventQueue::cancel(EventHandle handle) { live_.erase(handle); }

std::optional<Event> EventQueue::pop_until(double limit) {
  while (!heap_.empty()) {
    const Event& top = heap_.top();
    if (!live_.contains(top.seq)) {
      heap_.pop();
      continue;
    }
    if (top.time > limit) return std::nullopt;
    Event ev = top;
    heap_.pop();
    live_.erase(ev.seq);
    now_ = ev.time;
    return ev;
  }
  return std::nullopt;
}

void EventQueue::advance_to(double time) { now_ = std::max(now_, time); }

}  // namespace cbrp
