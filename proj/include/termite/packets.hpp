// Routing-layer packet bodies carried inside radio frames. All protocols
// share one variant so the network layer stays payload-agnostic.
#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "termite/sim_core.hpp"

namespace termite {

// An application event handed to the routing layer at a source node.
struct AppEvent {
  uint64_t id = 0;
  NodeId origin = 0;
  double created_at = 0.0;
  int payload_bits = 0;
};

// Route-request agent. Floods source -> sink accumulating path statistics:
// hops visited, minimum energy seen, and running average energy (kept as a
// sum/count pair so relays can fold themselves in exactly).
struct ForwardSoldier {
  NodeId source = 0;
  uint32_t soldier = 0;  // per-source sequence number
  NodeId from = 0;       // previous hop, rewritten at each rebroadcast
  int hops = 0;
  double min_energy = 0.0;
  double energy_sum = 0.0;
  int energy_count = 0;
  double avg_energy() const {
    return energy_count > 0 ? energy_sum / energy_count : 0.0;
  }
};

// Route reply. Walks the reverse path of the winning soldier, installing
// per-path forwarding entries; the reward is deposited once, at the source.
struct BackwardSoldier {
  NodeId sink = 0;
  NodeId source = 0;
  uint32_t soldier = 0;
  uint64_t path = 0;
  double reward = 0.0;
  NodeId from = 0;
};

// Data packet. Relays forward it by path id lookup only.
struct Worker {
  uint64_t path = 0;
  AppEvent payload;
  NodeId source = 0;  // origin of the payload
};

// One-hop route announcement emitted by a node that just installed a path.
// Informational: hearing it installs no pheromone.
struct PathBeacon {
  NodeId sink = 0;
  uint64_t path = 0;
};

// --- flooded-forward comparator ---

struct FloodAnt {
  NodeId origin = 0;
  uint32_t seq = 0;
  AppEvent payload;
  int hops = 0;
  int ttl = 0;
  std::vector<NodeId> visited;  // reverse path for reinforcement
};

struct PathReinforce {
  NodeId sink = 0;
  std::vector<NodeId> visited;
  int index = 0;  // next recipient position in visited
  int hops_from_sink = 0;
};

// --- sensor-driven cost-aware comparator ---

struct CostAnnounce {
  uint32_t wave = 0;
  int hops = 0;
};

struct ScData {
  AppEvent payload;
  int ttl = 0;
  NodeId prev = 0;
};

// --- on-demand distance-vector comparator ---

struct RouteRequest {
  NodeId origin = 0;
  uint32_t id = 0;
  int hops = 0;
};

struct RouteReply {
  NodeId sink = 0;
  NodeId origin = 0;
  int hops = 0;
};

struct AodvData {
  AppEvent payload;
  NodeId dest = 0;
};

using PacketBody =
    std::variant<ForwardSoldier, BackwardSoldier, Worker, PathBeacon, FloodAnt,
                 PathReinforce, CostAnnounce, ScData, RouteRequest, RouteReply,
                 AodvData>;

const char* packet_kind_name(const PacketBody& body);

}  // namespace termite
