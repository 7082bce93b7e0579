// Deliberately small comparator protocols behind the shared interface:
// a data-carrying flood with reverse-path reinforcement, a cost-gradient
// forwarder seeded by sink floods, and an on-demand distance-vector scheme.
#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <utility>

#include "termite/protocol.hpp"

namespace termite {

// Floods every event as an ant that records its path; the sink reinforces
// the reverse path, which shrinks the flood TTL near the best known route.
class FloodedForward : public RoutingProtocol {
 public:
  struct NodeState {
    std::set<std::pair<NodeId, uint32_t>> seen;  // (origin, seq)
    uint32_t next_seq = 0;
    int best_hops = 0;          // hops to sink along last reinforced path
    double best_stamp = -1.0;   // when that estimate was learned
  };

  explicit FloodedForward(Deps d);
  std::string name() const override { return "ff"; }
  void on_app_event(NodeId node, const AppEvent& ev) override;
  void on_packet(NodeId node, const Frame& frame) override;

  const NodeState& state(NodeId id) const { return nodes_[id]; }

 private:
  int ttl_for(NodeId node) const;
  std::vector<NodeState> nodes_;
};

// Every node learns its neighbors' hop cost to the sink from periodic
// sink-rooted announcement waves, then forwards data to a neighbor sampled
// with weight 1/(1 + cost).
class SensorCost : public RoutingProtocol {
 public:
  struct NodeState {
    uint32_t wave = 0;                    // freshest wave heard
    int own_cost = -1;                    // -1: unknown this wave
    std::map<NodeId, int> neighbor_cost;  // neighbor -> its announced cost
  };

  explicit SensorCost(Deps d);
  std::string name() const override { return "sc"; }
  void on_app_event(NodeId node, const AppEvent& ev) override;
  void on_packet(NodeId node, const Frame& frame) override;
  void on_mac_failure(NodeId node, const Frame& frame) override;

  const NodeState& state(NodeId id) const { return nodes_[id]; }

 protected:
  void on_start() override;

 private:
  void start_wave();
  void forward_data(NodeId node, const ScData& data);
  void adopt_cost(NodeId node, uint32_t wave, NodeId from, int cost);
  std::vector<NodeState> nodes_;
  uint32_t next_wave_ = 0;
};

// Request/reply route discovery with hop-count routes, a bounded send
// buffer, and a discovery timeout that drops waiting traffic.
class AodvLite : public RoutingProtocol {
 public:
  struct RouteEntry {
    NodeId next_hop = 0;
    int hops = 0;
    bool valid = false;
  };
  struct NodeState {
    std::map<NodeId, RouteEntry> routes;  // destination -> entry
    std::set<std::pair<NodeId, uint32_t>> seen;  // (origin, rreq id)
    std::deque<AppEvent> buffer;
    bool pending = false;
    uint32_t next_rreq = 0;
    uint64_t timeout_drops = 0;
  };

  explicit AodvLite(Deps d);
  std::string name() const override { return "aodv"; }
  void on_app_event(NodeId node, const AppEvent& ev) override;
  void on_packet(NodeId node, const Frame& frame) override;
  void on_mac_failure(NodeId node, const Frame& frame) override;

  const NodeState& state(NodeId id) const { return nodes_[id]; }

 private:
  void start_discovery(NodeId node);
  std::vector<NodeState> nodes_;
};

}  // namespace termite
