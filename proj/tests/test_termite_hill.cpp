#include <cmath>
#include <memory>
#include <utility>
#include <vector>

#include "doctest.h"
#include "termite/termite_hill.hpp"

using namespace termite;

namespace {

// Five nodes, two node-disjoint routes to the sink (node 4):
//   0 -- 1 -- 4        short, full energy
//   0 -- 2 -- 3 -- 4   long, nodes 2 and 3 drained to 2 J
// With 10 J nodes and 5 in the network, the reward ranking is
// 5/9 (short) vs 15/31 (long); discovery must install the short path.
struct HillRig {
  Simulator sim;
  RngStream radio{7, "radio"};
  RngStream prot{7, "protocol"};
  TraceLog trace;
  NetModel net;
  ProtocolParams pp;
  std::vector<uint64_t> delivered;
  std::unique_ptr<TermiteHill> hill;

  HillRig(NetParams np, const std::vector<std::pair<double, double>>& pos,
          NodeId sink_id)
      : net(sim, radio, trace, np) {
    for (auto [x, y] : pos) net.add_node(x, y);
    RoutingProtocol::Deps d;
    d.sim = &sim;
    d.net = &net;
    d.rng = &prot;
    d.trace = &trace;
    d.params = &pp;
    d.sink = sink_id;
    d.n_nodes = net.node_count();
    d.deliver = [this](const AppEvent& ev) { delivered.push_back(ev.id); };
    hill = std::make_unique<TermiteHill>(std::move(d));
  }

  AppEvent make_event(uint64_t id) const {
    AppEvent e;
    e.id = id;
    e.origin = 0;
    e.created_at = sim.now();
    e.payload_bits = 320;
    return e;
  }
};

NetParams lossless(double energy_j, double range_m) {
  NetParams np;
  np.range_m = range_m;
  np.delivery_prob = 1.0;
  np.initial_energy_j = energy_j;
  return np;
}

std::unique_ptr<HillRig> two_route_rig() {
  auto rig = std::make_unique<HillRig>(
      lossless(10.0, 10.0),
      std::vector<std::pair<double, double>>{
          {0, 2}, {8, 0}, {4.5, 10}, {14, 11}, {16, 2}},
      4);
  rig->net.charge(2, 8.0, "drain");
  rig->net.charge(3, 8.0, "drain");
  return rig;
}

}  // namespace

TEST_CASE("discovery installs the highest-reward path") {
  auto rig = two_route_rig();
  rig->hill->start();
  rig->hill->on_app_event(0, rig->make_event(1));
  rig->sim.run(0.5);  // before the first decay period

  CHECK(rig->delivered == std::vector<uint64_t>{1});

  const uint64_t path = make_path_id(0, 0);
  CHECK(rig->hill->state(0).forwarding.at(path) == 1);
  CHECK(rig->hill->state(1).forwarding.at(path) == 4);
  CHECK(rig->hill->state(0).own_paths.count(path) == 1);
  CHECK(rig->hill->state(0).discovery_pending == false);
  CHECK(rig->hill->state(0).event_cache.empty());

  // reward lands on the short path's first hop only (relay energies shift
  // by a few rx charges, hence the loose epsilon)
  CHECK(rig->hill->state(0).table.value(1, 4) ==
        doctest::Approx(1.0 + 5.0 / 9.0).epsilon(1e-4));
  CHECK(rig->hill->state(0).table.value(2, 4) == 1.0);
  CHECK_FALSE(rig->hill->state(0).table.has_neighbor(2));
  CHECK(rig->hill->reward_clamps() == 0);

  // the sink answered exactly one copy of the soldier
  const auto& sink_cache = rig->hill->state(4).soldier_cache;
  REQUIRE(sink_cache.size() == 1);
  const auto& entry = sink_cache.begin()->second;
  CHECK(entry.replied);
  CHECK(entry.n_j == 2);
  CHECK(entry.from == 1);
}

TEST_CASE("the source beacon is adopted by routeless neighbors only") {
  auto rig = two_route_rig();
  rig->hill->start();
  rig->hill->on_app_event(0, rig->make_event(1));
  rig->sim.run(0.5);

  const uint64_t path = make_path_id(0, 0);
  // node 2 heard the beacon and had nothing: it adopts a route through 0
  CHECK(rig->hill->state(2).own_paths.count(path) == 1);
  CHECK(rig->hill->state(2).forwarding.at(path) == 0);
  // node 1 relays this very path; the beacon must not bend it back
  CHECK(rig->hill->state(1).forwarding.at(path) == 4);
  CHECK(rig->hill->state(1).own_paths.empty());

  // a later beacon bounces off nodes that already own a route
  rig->hill->on_packet(
      2, Frame{3, kBroadcast, 96, PathBeacon{4, make_path_id(9, 9)}});
  CHECK(rig->hill->state(2).forwarding.count(make_path_id(9, 9)) == 0);
}

TEST_CASE("follow-up events reuse the route without new discoveries") {
  auto rig = two_route_rig();
  rig->hill->start();
  rig->hill->on_app_event(0, rig->make_event(1));
  rig->sim.run(0.5);
  rig->hill->on_app_event(0, rig->make_event(2));
  rig->hill->on_app_event(0, rig->make_event(3));
  rig->sim.run(10.0);

  CHECK(rig->delivered == std::vector<uint64_t>{1, 2, 3});
  CHECK(rig->hill->state(0).next_soldier == 1);  // still the first discovery
}

TEST_CASE("with the short relay dead, discovery settles on the long path") {
  auto rig = two_route_rig();
  rig->net.charge(1, 20.0, "kill");
  rig->hill->start();
  rig->hill->on_app_event(0, rig->make_event(1));
  rig->sim.run(0.5);

  CHECK(rig->delivered == std::vector<uint64_t>{1});
  const uint64_t path = make_path_id(0, 0);
  CHECK(rig->hill->state(0).forwarding.at(path) == 2);
  CHECK(rig->hill->state(2).forwarding.at(path) == 3);
  CHECK(rig->hill->state(3).forwarding.at(path) == 4);
  CHECK(rig->hill->state(0).table.value(2, 4) ==
        doctest::Approx(1.0 + 15.0 / 31.0).epsilon(1e-4));
}

TEST_CASE("a transmit failure tears down the path, salvages and rediscovers") {
  auto rig = two_route_rig();
  rig->hill->start();
  rig->hill->on_app_event(0, rig->make_event(1));
  rig->sim.run(0.5);
  REQUIRE(rig->delivered == std::vector<uint64_t>{1});

  rig->net.charge(1, 20.0, "kill");
  rig->hill->on_app_event(0, rig->make_event(2));
  rig->sim.run(1.0);

  CHECK(rig->delivered == std::vector<uint64_t>{1, 2});
  CHECK(rig->hill->state(0).next_soldier == 2);  // one repair discovery
  CHECK_FALSE(rig->hill->state(0).table.has_neighbor(1));

  const uint64_t old_path = make_path_id(0, 0);
  const uint64_t new_path = make_path_id(0, 1);
  CHECK(rig->hill->state(0).forwarding.count(old_path) == 0);
  CHECK(rig->hill->state(0).own_paths.count(old_path) == 0);
  CHECK(rig->hill->state(0).forwarding.at(new_path) == 2);
  CHECK(rig->hill->state(0).table.value(2, 4) > 1.0);
}

TEST_CASE("workers on unknown paths re-enter as local traffic") {
  auto rig = two_route_rig();
  rig->hill->start();
  rig->hill->on_app_event(0, rig->make_event(1));
  rig->sim.run(0.5);

  // node 2 holds an adopted route through 0; hand it a worker whose path
  // nobody knows, carrying a fresh payload
  Worker stray;
  stray.path = make_path_id(7, 9);
  stray.payload = rig->make_event(42);
  stray.source = 0;
  rig->hill->on_packet(2, Frame{0, 2, 320, stray});
  rig->sim.run(1.0);

  CHECK(rig->delivered == std::vector<uint64_t>{1, 42});
  CHECK(rig->hill->state(2).next_soldier == 0);  // the adopted route sufficed
}

TEST_CASE("a repeat soldier sighting with better reward redirects the reply") {
  // diamond with a tail: 0 -> {1, 2} -> 3 -> 4, node 1 drained; the flood
  // reaches 3 through 1 first, but the copy through 2 scores higher, so
  // the reply must thread 4 -> 3 -> 2 -> 0.
  HillRig rig(lossless(10.0, 7.5),
              {{0, 0}, {6, 3}, {6, -3}, {12, 0}, {19, 0}}, 4);
  rig.net.charge(1, 8.0, "drain");
  rig.hill->start();
  rig.hill->on_app_event(0, rig.make_event(1));
  rig.sim.run(0.5);

  CHECK(rig.delivered == std::vector<uint64_t>{1});
  const uint64_t path = make_path_id(0, 0);
  CHECK(rig.hill->state(0).forwarding.at(path) == 2);
  CHECK(rig.hill->state(2).forwarding.at(path) == 3);
  CHECK(rig.hill->state(3).forwarding.at(path) == 4);
  CHECK(rig.hill->state(0).table.value(2, 4) > 1.0);
  CHECK(rig.hill->state(0).table.value(1, 4) == 1.0);
}

TEST_CASE("a singular reward denominator falls back to the clamp") {
  // two nodes at 1 J: E = 1 makes the raw denominator non-positive
  HillRig rig(lossless(1.0, 10.0), {{0, 0}, {5, 0}}, 1);
  rig.hill->start();
  rig.hill->on_app_event(0, rig.make_event(1));
  rig.sim.run(0.5);

  CHECK(rig.delivered == std::vector<uint64_t>{1});
  CHECK(rig.hill->reward_clamps() == 1);
  // gamma_max = 10 N / E = 20, clipped to the ceiling on deposit
  CHECK(rig.hill->state(0).table.value(1, 1) == 10.0);
}

TEST_CASE("event cache is bounded and drops the oldest") {
  HillRig rig(lossless(10.0, 10.0), {{0, 0}, {1000, 0}}, 1);
  rig.pp.event_cache_max = 2;
  rig.hill->start();
  rig.hill->on_app_event(0, rig.make_event(1));
  rig.hill->on_app_event(0, rig.make_event(2));
  rig.hill->on_app_event(0, rig.make_event(3));

  const auto& st = rig.hill->state(0);
  CHECK(st.event_cache.size() == 2);
  CHECK(st.event_cache.front().id == 2);
  CHECK(st.event_cache.back().id == 3);
  CHECK(st.cache_drops == 1);
  CHECK(st.discovery_pending);

  // the sink is unreachable: retries keep relaunching for queued events
  rig.sim.run(10.0);
  CHECK(rig.delivered.empty());
  CHECK(rig.hill->state(0).next_soldier > 1);
  CHECK(rig.hill->state(0).discovery_pending);
}

TEST_CASE("deposits decay by the closed-form law and prune at the floor") {
  auto rig = two_route_rig();
  rig->hill->start();
  rig->hill->on_app_event(0, rig->make_event(1));
  rig->sim.run(0.5);

  const double t0 = rig->hill->state(0).table.value(1, 4);
  REQUIRE(t0 > 1.0);
  rig->sim.run(10.0);  // ten decay periods at rho = 0.1
  CHECK(rig->hill->state(0).table.value(1, 4) ==
        doctest::Approx(t0 * std::exp(-1.0)).epsilon(1e-9));

  rig->sim.run(60.0);  // far past the floor: the column gets pruned
  CHECK_FALSE(rig->hill->state(0).table.has_destination(4));
  CHECK(rig->hill->state(0).table.has_neighbor(1));
}

TEST_CASE("identical seeds replay the identical run") {
  auto run_once = [](uint64_t seed) {
    NetParams np = lossless(10.0, 10.0);
    np.delivery_prob = 0.9;
    HillRig rig(np, {{0, 2}, {8, 0}, {4.5, 10}, {14, 11}, {16, 2}}, 4);
    rig.radio = RngStream(seed, "radio");
    rig.prot = RngStream(seed, "protocol");
    rig.hill->start();
    for (uint64_t id = 1; id <= 5; ++id) {
      rig.hill->on_app_event(0, rig.make_event(id));
      rig.sim.run(rig.sim.now() + 1.0);
    }
    rig.sim.run(20.0);
    return std::make_pair(rig.delivered, rig.net.total_energy_consumed());
  };
  const auto a = run_once(11);
  const auto b = run_once(11);
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);
  const auto c = run_once(12);
  (void)c;  // different seed must still terminate; outcome may differ
}
