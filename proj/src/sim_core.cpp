#include "termite/sim_core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace termite {

namespace {

inline uint64_t rotl64(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

inline uint64_t splitmix64(uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

RngStream::RngStream(uint64_t seed, std::string_view stream_id) {
  // xoshiro256** seeded through splitmix64 from (seed, stream id hash).
  uint64_t st = seed ^ (fnv1a64(stream_id) * 0x2545f4914f6cdd1dULL);
  for (auto& w : s_) w = splitmix64(st);
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

uint64_t RngStream::next_u64() {
  uint64_t result = rotl64(s_[1] * 5, 7) * 9;
  uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl64(s_[3], 45);
  return result;
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

int64_t RngStream::uniform_int(int64_t lo, int64_t hi) {
  if (lo > hi) throw std::invalid_argument("uniform_int: empty range");
  uint64_t span = static_cast<uint64_t>(hi) - static_cast<uint64_t>(lo) + 1;
  if (span == 0) return static_cast<int64_t>(next_u64());  // full 64-bit range
  uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return lo + static_cast<int64_t>(x % span);
}

bool RngStream::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("bernoulli: p outside [0, 1]");
  return uniform() < p;
}

void Simulator::schedule(double fire_time, int target, EventKind kind,
                         std::function<void()> action) {
  if (!(fire_time >= clock_))
    throw std::logic_error("schedule: event fires in the past");
  events_.push_back(
      SimEvent{fire_time, next_sequence_++, target, kind, std::move(action)});
  std::push_heap(events_.begin(), events_.end(), AfterCmp{});
}

double Simulator::run(double until) {
  while (!events_.empty() && events_.front().fire_time <= until) {
    std::pop_heap(events_.begin(), events_.end(), AfterCmp{});
    SimEvent ev = std::move(events_.back());
    events_.pop_back();
    clock_ = ev.fire_time;
    ++dispatched_;
    ev.action();
  }
  if (until > clock_) clock_ = until;
  return clock_;
}

}  // namespace termite
