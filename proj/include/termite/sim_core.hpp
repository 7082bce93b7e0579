// Discrete-event core: a single-threaded event queue with a strict total
// dispatch order, plus independently seeded random streams.
#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

namespace termite {

using NodeId = int;
inline constexpr NodeId kBroadcast = -1;

// One stream per consumer subsystem (radio, protocol, traffic, world, ...).
// Streams with the same seed but different ids are independent: consuming
// from one never perturbs another, which keeps paired-seed comparisons
// honest when protocols draw different amounts of randomness.
class RngStream {
 public:
  RngStream() : RngStream(0, "default") {}
  RngStream(uint64_t seed, std::string_view stream_id);

  double uniform();                          // [0, 1)
  int64_t uniform_int(int64_t lo, int64_t hi);  // both bounds included
  bool bernoulli(double p);

 private:
  uint64_t next_u64();
  uint64_t s_[4];
};

enum class EventKind {
  PacketArrival,
  DecayTick,
  TrafficTick,
  SinkMoveTick,
  WorldStep,
  MetricSample,
  IdleTick,
  ProtocolTimer,
};

struct SimEvent {
  double fire_time;
  uint64_t sequence;  // assigned at schedule time, breaks fire_time ties
  int target;         // node id, or -1 for run-global events
  EventKind kind;
  std::function<void()> action;
};

// Events fire in (fire_time, sequence) order. Scheduling into the past is a
// programming error and aborts the run via std::logic_error.
class Simulator {
 public:
  double now() const { return clock_; }
  void schedule(double fire_time, int target, EventKind kind,
                std::function<void()> action);
  // Dispatches every event with fire_time <= until, then advances the clock
  // to until. Returns the clock.
  double run(double until);
  std::size_t pending() const { return events_.size(); }
  uint64_t dispatch_count() const { return dispatched_; }

 private:
  struct AfterCmp {
    bool operator()(const SimEvent& a, const SimEvent& b) const {
      if (a.fire_time != b.fire_time) return a.fire_time > b.fire_time;
      return a.sequence > b.sequence;
    }
  };
  double clock_ = 0.0;
  uint64_t next_sequence_ = 0;
  uint64_t dispatched_ = 0;
  std::vector<SimEvent> events_;  // min-heap under AfterCmp
};

}  // namespace termite
