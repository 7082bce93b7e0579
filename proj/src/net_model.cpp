#include "termite/net_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace termite {

const char* packet_kind_name(const PacketBody& body) {
  struct Namer {
    const char* operator()(const ForwardSoldier&) { return "fs"; }
    const char* operator()(const BackwardSoldier&) { return "bs"; }
    const char* operator()(const Worker&) { return "worker"; }
    const char* operator()(const PathBeacon&) { return "beacon"; }
    const char* operator()(const FloodAnt&) { return "flood_ant"; }
    const char* operator()(const PathReinforce&) { return "reinforce"; }
    const char* operator()(const CostAnnounce&) { return "cost"; }
    const char* operator()(const ScData&) { return "sc_data"; }
    const char* operator()(const RouteRequest&) { return "rreq"; }
    const char* operator()(const RouteReply&) { return "rrep"; }
    const char* operator()(const AodvData&) { return "aodv_data"; }
  };
  return std::visit(Namer{}, body);
}

NetModel::NetModel(Simulator& sim, RngStream& rng, TraceLog& trace,
                   NetParams params)
    : sim_(sim), rng_(rng), trace_(trace), params_(params) {}

void NetModel::add_node(double x, double y) {
  NodeState st;
  st.x = x;
  st.y = y;
  st.remaining = params_.initial_energy_j;
  nodes_.push_back(st);
}

bool NetModel::in_range(NodeId a, NodeId b) const {
  const double dx = nodes_[a].x - nodes_[b].x;
  const double dy = nodes_[a].y - nodes_[b].y;
  return dx * dx + dy * dy <= params_.range_m * params_.range_m;
}

std::vector<NodeId> NetModel::neighbors_of(NodeId id) const {
  std::vector<NodeId> out;
  for (NodeId other = 0; other < node_count(); ++other) {
    if (other == id || !nodes_[other].alive) continue;
    if (in_range(id, other)) out.push_back(other);
  }
  return out;
}

void NetModel::charge(NodeId id, double joules, const char* why) {
  NodeState& st = nodes_[id];
  if (!st.alive) return;
  const double applied = std::min(joules, st.remaining);
  st.remaining -= applied;
  st.consumed += applied;
  if (applied < joules || st.remaining <= 0.0) {
    st.alive = false;
    st.remaining = 0.0;
  }
  if (trace_.enabled()) {
    trace_.record(sim_.now(), "charge", id,
                  strf("why=%s j=%.17g alive=%d", why, applied,
                       st.alive ? 1 : 0));
  }
}

double NetModel::total_energy_consumed() const {
  double total = 0.0;
  for (const NodeState& st : nodes_) total += st.consumed;
  return total;
}

int NetModel::alive_count() const {
  int n = 0;
  for (const NodeState& st : nodes_)
    if (st.alive) ++n;
  return n;
}

void NetModel::move_node(NodeId id, double x, double y) {
  nodes_[id].x = x;
  nodes_[id].y = y;
}

void NetModel::deliver(NodeId to, Frame frame) {
  if (!nodes_[to].alive) return;
  charge(to, params_.rx_j_per_bit * frame.size_bits, "rx");
  if (!nodes_[to].alive) return;  // reception drained the node
  if (trace_.enabled()) {
    trace_.record(sim_.now(), "rx", to,
                  strf("from=%d kind=%s bits=%d", frame.sender,
                       packet_kind_name(frame.body), frame.size_bits));
  }
  if (on_receive_) on_receive_(to, frame);
}

void NetModel::unicast(NodeId from, NodeId to, int size_bits,
                       PacketBody body) {
  if (!nodes_[from].alive) return;
  Frame frame{from, to, size_bits, std::move(body)};
  const bool reachable = nodes_[to].alive && in_range(from, to);
  const int attempts_allowed = 1 + params_.max_retransmits;

  int attempts = 0;
  bool delivered = false;
  for (; attempts < attempts_allowed; ++attempts) {
    charge(from, params_.tx_j_per_bit * size_bits, "tx");
    if (!nodes_[from].alive) break;  // died transmitting
    if (reachable && rng_.bernoulli(params_.delivery_prob)) {
      delivered = true;
      ++attempts;
      break;
    }
  }

  const double serialisation = size_bits / params_.bit_rate_bps;
  if (delivered) {
    const double when = sim_.now() + params_.per_hop_latency_s +
                        serialisation +
                        (attempts - 1) * params_.ack_timeout_s;
    if (trace_.enabled()) {
      trace_.record(sim_.now(), "tx", from,
                    strf("to=%d kind=%s bits=%d tries=%d ok=1", to,
                         packet_kind_name(frame.body), size_bits, attempts));
    }
    sim_.schedule(when, to, EventKind::PacketArrival,
                  [this, to, frame = std::move(frame)]() mutable {
                    deliver(to, std::move(frame));
                  });
  } else {
    const double when = sim_.now() + params_.per_hop_latency_s +
                        serialisation +
                        attempts * params_.ack_timeout_s;
    if (trace_.enabled()) {
      trace_.record(sim_.now(), "tx", from,
                    strf("to=%d kind=%s bits=%d tries=%d ok=0", to,
                         packet_kind_name(frame.body), size_bits, attempts));
    }
    sim_.schedule(when, from, EventKind::PacketArrival,
                  [this, from, frame = std::move(frame)]() mutable {
                    if (on_failure_ && nodes_[from].alive)
                      on_failure_(from, frame);
                  });
  }
}

void NetModel::broadcast(NodeId from, int size_bits, PacketBody body) {
  if (!nodes_[from].alive) return;
  charge(from, params_.tx_j_per_bit * size_bits, "tx");
  if (!nodes_[from].alive) return;
  if (trace_.enabled()) {
    trace_.record(sim_.now(), "tx", from,
                  strf("to=* kind=%s bits=%d", packet_kind_name(body),
                       size_bits));
  }
  const double when =
      sim_.now() + params_.per_hop_latency_s + size_bits / params_.bit_rate_bps;
  // Neighbour list and delivery draws happen now, in id order, so the
  // outcome is independent of how delivery events interleave later.
  for (NodeId nb : neighbors_of(from)) {
    if (!rng_.bernoulli(params_.delivery_prob)) continue;
    Frame frame{from, kBroadcast, size_bits, body};
    sim_.schedule(when, nb, EventKind::PacketArrival,
                  [this, nb, frame = std::move(frame)]() mutable {
                    deliver(nb, std::move(frame));
                  });
  }
}

}  // namespace termite
