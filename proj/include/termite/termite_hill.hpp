// The pheromone routing protocol: soldier-based route discovery, reward
// deposits, probabilistic path assignment at sources, and table-driven
// relay forwarding.
#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <utility>

#include "termite/protocol.hpp"

namespace termite {

// path_id encodes (source, per-source discovery counter) so every reply
// installs globally unique forwarding state.
inline uint64_t make_path_id(NodeId source, uint32_t soldier) {
  return (static_cast<uint64_t>(static_cast<uint32_t>(source)) << 32) |
         soldier;
}
inline NodeId path_source(uint64_t path) {
  return static_cast<NodeId>(path >> 32);
}

class TermiteHill : public RoutingProtocol {
 public:
  struct SoldierCacheEntry {
    NodeId from = 0;       // previous hop, toward the source
    bool bflag = false;    // this node rebroadcast the request
    double reward = 0.0;   // best reward seen for this soldier
    int n_j = 0;
    bool replied = false;  // sink only: reply already sent
  };

  struct NodeState {
    PheromoneTable table;
    // keyed by (source, soldier)
    std::map<std::pair<NodeId, uint32_t>, SoldierCacheEntry> soldier_cache;
    std::map<uint64_t, NodeId> forwarding;  // path_id -> next hop to sink
    std::set<uint64_t> own_paths;           // paths rooted or adopted here
    std::deque<AppEvent> event_cache;
    bool discovery_pending = false;
    uint32_t next_soldier = 0;
    uint64_t cache_drops = 0;

    explicit NodeState(PheromoneConfig cfg) : table(cfg) {}
  };

  explicit TermiteHill(Deps d);

  std::string name() const override { return "termite-hill"; }
  void on_app_event(NodeId node, const AppEvent& ev) override;
  void on_packet(NodeId node, const Frame& frame) override;
  void on_mac_failure(NodeId node, const Frame& frame) override;

  // Test introspection.
  const NodeState& state(NodeId id) const { return nodes_[id]; }
  uint64_t reward_clamps() const { return reward_clamps_; }

 protected:
  void on_start() override;

 private:
  void launch_discovery(NodeId node);
  void handle_forward_soldier(NodeId node, const Frame& frame);
  void handle_backward_soldier(NodeId node, const Frame& frame);
  void handle_worker(NodeId node, const Frame& frame);
  void handle_beacon(NodeId node, const Frame& frame);
  void send_worker(NodeId node, const AppEvent& ev);
  bool has_route(const NodeState& st) const { return !st.own_paths.empty(); }
  double reward_for(const ForwardSoldier& fs, int n_j);
  void schedule_decay();
  void schedule_discovery_retry(NodeId node);

  std::vector<NodeState> nodes_;
  uint64_t reward_clamps_ = 0;
};

}  // namespace termite
