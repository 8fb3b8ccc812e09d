#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <queue>
#include <unordered_set>
#include <variant>
#include <vector>

#include "cbrp/message.hpp"

namespace cbrp {

struct DeliverEvent {
  NodeId sender = 0;
  NodeId receiver = 0;
  std::shared_ptr<const Message> message;
};

enum class TimerKind : std::uint8_t { Startup, Hello, Undecided, RouteRetry };

struct TimerEvent {
  NodeId node = 0;
  TimerKind kind = TimerKind::Hello;
  std::uint64_t tag = 0;
};

struct MobilityTick {};
struct MaintenanceTick {};
struct TrafficEvent {
  std::size_t flow = 0;
};
// Scripted node failure (battery pulled).
struct FailureEvent {
  NodeId node = 0;
};

using EventKind = std::variant<DeliverEvent, TimerEvent, MobilityTick, MaintenanceTick,
                               TrafficEvent, FailureEvent>;

struct Event {
  double time = 0.0;
  std::uint64_t seq = 0;
  EventKind kind;
};

using EventHandle = std::uint64_t;

// Time-ordered queue plus the simulation clock. Events at equal times fire
// in insertion order.
class EventQueue {
 public:
  double now() const { return now_; }

  // Throws std::logic_error when `time` lies in the past.
  EventHandle schedule(double time, EventKind kind);
  void cancel(EventHandle handle);

  // Removes and returns the next live event with time <= limit, advancing
  // the clock to its time.
  std::optional<Event> pop_until(double limit);

  // Moves the clock forward without firing anything (end of a run).
  void advance_to(double time);

  std::size_t pending() const { return live_.size(); }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.seq > b.seq;
    }
  };

  double now_ = 0.0;
  std::uint64_t next_seq_ = 0;
  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::unordered_set<EventHandle> live_;
};

}  // namespace cbrp
