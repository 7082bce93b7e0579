// Radio, topology and energy model. Unit-disk connectivity over fixed node
// positions, per-frame Bernoulli delivery, simple retransmit-with-ack
// unicast, and per-bit energy accounting with hard node death.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "termite/packets.hpp"
#include "termite/sim_core.hpp"
#include "termite/trace.hpp"

namespace termite {

struct NetParams {
  double range_m = 35.0;        // unit-disk radio range
  double delivery_prob = 0.95;  // per-frame delivery probability
  int max_retransmits = 3;      // unicast: attempts beyond the first
  double bit_rate_bps = 250000.0;
  double per_hop_latency_s = 0.001;  // fixed MAC/processing delay per frame
  double ack_timeout_s = 0.005;      // wait before a retransmit attempt
  double tx_j_per_bit = 2.0e-7;
  double rx_j_per_bit = 2.2e-7;
  double initial_energy_j = 1.0;
};

// Over-the-air frame. dest == kBroadcast means every neighbour may hear it.
struct Frame {
  NodeId sender = 0;
  NodeId dest = 0;
  int size_bits = 0;
  PacketBody body;
};

enum class SendOutcome { Delivered, Failed };

class NetModel {
 public:
  using ReceiveHandler =
      std::function<void(NodeId self, const Frame& frame)>;
  // Fired after every unicast attempt budget is exhausted.
  using FailureHandler =
      std::function<void(NodeId self, const Frame& frame)>;

  NetModel(Simulator& sim, RngStream& rng, TraceLog& trace, NetParams params);

  // Topology setup. Node ids are dense 0..n-1; call before any traffic.
  void add_node(double x, double y);
  int node_count() const { return static_cast<int>(nodes_.size()); }

  void set_receive_handler(ReceiveHandler h) { on_receive_ = std::move(h); }
  void set_failure_handler(FailureHandler h) { on_failure_ = std::move(h); }

  // Alive neighbours within radio range, ascending id. Excludes self.
  std::vector<NodeId> neighbors_of(NodeId id) const;
  bool in_range(NodeId a, NodeId b) const;

  // Unicast with acknowledgement: up to 1 + max_retransmits attempts, each
  // charged to the sender. On success the frame is handed to the receiver
  // after latency + serialisation for however many attempts were used.
  // On failure the failure handler fires after the full attempt budget.
  void unicast(NodeId from, NodeId to, int size_bits, PacketBody body);

  // Broadcast: one transmission charge, each alive neighbour independently
  // receives with delivery_prob. No acknowledgements, no retransmits.
  void broadcast(NodeId from, int size_bits, PacketBody body);

  bool alive(NodeId id) const { return nodes_[id].alive; }
  double energy(NodeId id) const {
    return nodes_[id].alive ? nodes_[id].remaining : 0.0;
  }
  double consumed(NodeId id) const { return nodes_[id].consumed; }
  double total_energy_consumed() const;
  int alive_count() const;

  double x_of(NodeId id) const { return nodes_[id].x; }
  double y_of(NodeId id) const { return nodes_[id].y; }
  void move_node(NodeId id, double x, double y);

  const NetParams& params() const { return params_; }

  // Direct energy draw, used by protocol-level listening costs if enabled.
  void charge(NodeId id, double joules, const char* why);

 private:
  struct NodeState {
    double x = 0.0, y = 0.0;
    double remaining = 0.0;
    double consumed = 0.0;
    bool alive = true;
  };

  void deliver(NodeId to, Frame frame);

  Simulator& sim_;
  RngStream& rng_;
  TraceLog& trace_;
  NetParams params_;
  std::vector<NodeState> nodes_;
  ReceiveHandler on_receive_;
  FailureHandler on_failure_;
};

}  // namespace termite
