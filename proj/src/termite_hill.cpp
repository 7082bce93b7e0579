#include "termite/termite_hill.hpp"

#include <algorithm>

namespace termite {

TermiteHill::TermiteHill(Deps d) : RoutingProtocol(std::move(d)) {
  nodes_.reserve(net().node_count());
  for (int i = 0; i < net().node_count(); ++i)
    nodes_.emplace_back(params().pheromone);
}

void TermiteHill::on_start() { schedule_decay(); }

void TermiteHill::schedule_decay() {
  const double when = sim().now() + params().decay_period_s;
  sim().schedule(when, 0, EventKind::DecayTick, [this] {
    const bool linear = params().decay_mode == "linear";
    for (int id = 0; id < net().node_count(); ++id) {
      if (!net().alive(id)) continue;
      if (linear)
        nodes_[id].table.evaporate_linear(params().linear_x);
      else
        nodes_[id].table.evaporate_exponential(params().rho);
      nodes_[id].table.prune();
    }
    schedule_decay();
  });
}

double TermiteHill::reward_for(const ForwardSoldier& fs, int n_j) {
  const double n = n_nodes();
  const double e = net().params().initial_energy_j;
  const double gamma_max = 10.0 * n / e;
  const RewardResult r =
      compute_reward(n, e, fs.min_energy, fs.avg_energy(), n_j, gamma_max);
  if (r.clamped) {
    ++reward_clamps_;
    if (trace().enabled())
      trace().record(sim().now(), "reward_clamp", fs.source,
                     strf("soldier=%u", fs.soldier));
  }
  return r.gamma;
}

void TermiteHill::on_app_event(NodeId node, const AppEvent& ev) {
  if (node == sink()) {
    deliver_at_sink(ev);
    return;
  }
  NodeState& st = nodes_[node];
  if (has_route(st)) {
    send_worker(node, ev);
    return;
  }
  if (static_cast<int>(st.event_cache.size()) >= params().event_cache_max) {
    st.event_cache.pop_front();  // oldest event gives way, stays undelivered
    ++st.cache_drops;
  }
  st.event_cache.push_back(ev);
  if (!st.discovery_pending) launch_discovery(node);
}

void TermiteHill::launch_discovery(NodeId node) {
  NodeState& st = nodes_[node];
  const uint32_t soldier = st.next_soldier++;
  const double e = net().energy(node);
  ForwardSoldier fs;
  fs.source = node;
  fs.soldier = soldier;
  fs.from = node;
  fs.hops = 0;
  fs.min_energy = e;
  fs.energy_sum = e;
  fs.energy_count = 1;
  st.discovery_pending = true;
  if (trace().enabled())
    trace().record(sim().now(), "discovery", node, strf("soldier=%u", soldier));
  net().broadcast(node, params().fs_bits, fs);
  schedule_discovery_retry(node);
}

void TermiteHill::schedule_discovery_retry(NodeId node) {
  const double when = sim().now() + params().discovery_retry_s;
  sim().schedule(when, node, EventKind::ProtocolTimer, [this, node] {
    NodeState& st = nodes_[node];
    if (!st.discovery_pending) return;
    if (st.event_cache.empty()) {
      // Repair discovery that found nothing and has nothing queued: give
      // up; the next application event starts afresh.
      st.discovery_pending = false;
      return;
    }
    if (net().alive(node)) launch_discovery(node);
  });
}

void TermiteHill::on_packet(NodeId node, const Frame& frame) {
  if (std::holds_alternative<ForwardSoldier>(frame.body))
    handle_forward_soldier(node, frame);
  else if (std::holds_alternative<BackwardSoldier>(frame.body))
    handle_backward_soldier(node, frame);
  else if (std::holds_alternative<Worker>(frame.body))
    handle_worker(node, frame);
  else if (std::holds_alternative<PathBeacon>(frame.body))
    handle_beacon(node, frame);
}

void TermiteHill::handle_forward_soldier(NodeId node, const Frame& frame) {
  const auto& fs = std::get<ForwardSoldier>(frame.body);
  if (node == fs.source) return;  // own flood echoed back
  NodeState& st = nodes_[node];
  const auto key = std::make_pair(fs.source, fs.soldier);

  // Fold this node into the path statistics before judging the path.
  ForwardSoldier folded = fs;
  const double e = net().energy(node);
  folded.min_energy = std::min(folded.min_energy, e);
  folded.energy_sum += e;
  folded.energy_count += 1;
  const int n_j = fs.hops + 1;

  if (node == sink()) {
    auto [it, first] = st.soldier_cache.try_emplace(key);
    if (!first) return;  // reply already sent for this soldier
    const double gamma = reward_for(folded, n_j);
    it->second = SoldierCacheEntry{fs.from, false, gamma, n_j, true};
    const uint64_t path = make_path_id(fs.source, fs.soldier);
    st.forwarding[path] = node;  // terminal entry: deliver here
    BackwardSoldier bs;
    bs.sink = node;
    bs.source = fs.source;
    bs.soldier = fs.soldier;
    bs.path = path;
    bs.reward = gamma;
    bs.from = node;
    if (trace().enabled())
      trace().record(sim().now(), "reply", node,
                     strf("source=%d soldier=%u reward=%.9g", fs.source,
                          fs.soldier, gamma));
    net().unicast(node, fs.from, params().bs_bits, bs);
    return;
  }

  auto it = st.soldier_cache.find(key);
  if (it == st.soldier_cache.end()) {
    // First sighting: decide whether to keep the flood going.
    bool bflag = fs.hops <= params().hmax;
    if (!bflag) bflag = rng().bernoulli(params().p_sf);
    const double gamma = reward_for(folded, n_j);
    st.soldier_cache.emplace(key,
                             SoldierCacheEntry{fs.from, bflag, gamma, n_j, false});
    if (bflag) {
      ForwardSoldier out = folded;
      out.from = node;
      out.hops = fs.hops + 1;
      net().broadcast(node, params().fs_bits, out);
    }
    return;
  }
  // Repeat sighting: keep whichever arrival scores strictly better.
  const double gamma = reward_for(folded, n_j);
  if (gamma > it->second.reward) {
    it->second.from = fs.from;
    it->second.reward = gamma;
    it->second.n_j = n_j;
  }
}

void TermiteHill::handle_backward_soldier(NodeId node, const Frame& frame) {
  const auto& bs = std::get<BackwardSoldier>(frame.body);
  NodeState& st = nodes_[node];

  if (node == bs.source) {
    st.table.deposit(frame.sender, bs.sink, bs.reward);
    st.forwarding[bs.path] = frame.sender;
    st.own_paths.insert(bs.path);
    st.discovery_pending = false;
    if (trace().enabled())
      trace().record(sim().now(), "route", node,
                     strf("path=%llu head=%d reward=%.9g",
                          static_cast<unsigned long long>(bs.path),
                          frame.sender, bs.reward));
    net().broadcast(node, params().beacon_bits, PathBeacon{bs.sink, bs.path});
    while (!st.event_cache.empty() && has_route(st)) {
      AppEvent ev = st.event_cache.front();
      st.event_cache.pop_front();
      send_worker(node, ev);
    }
    return;
  }

  const auto key = std::make_pair(bs.source, bs.soldier);
  auto it = st.soldier_cache.find(key);
  if (it == st.soldier_cache.end()) return;  // no cache match: drop reply
  st.forwarding[bs.path] = frame.sender;
  BackwardSoldier out = bs;
  out.from = node;
  net().unicast(node, it->second.from, params().bs_bits, out);
  st.soldier_cache.erase(it);
}

void TermiteHill::send_worker(NodeId node, const AppEvent& ev) {
  NodeState& st = nodes_[node];
  // Candidate next hops: heads of installed paths; the newest path wins
  // among several through one head.
  std::map<NodeId, uint64_t> heads;
  for (auto path_it = st.own_paths.begin(); path_it != st.own_paths.end();) {
    auto fwd = st.forwarding.find(*path_it);
    if (fwd == st.forwarding.end()) {
      path_it = st.own_paths.erase(path_it);  // invalidated by a failure
      continue;
    }
    auto [head_it, inserted] = heads.try_emplace(fwd->second, *path_it);
    if (!inserted) head_it->second = std::max(head_it->second, *path_it);
    ++path_it;
  }
  if (heads.empty()) {
    on_app_event(node, ev);  // every path was stale: queue and rediscover
    return;
  }
  std::vector<double> values;
  values.reserve(heads.size());
  for (const auto& [head, path] : heads)
    values.push_back(st.table.value(head, sink()));
  const std::vector<double> probs =
      selection_probabilities(values, params().alpha, params().beta);
  std::vector<std::pair<NodeId, double>> row;
  row.reserve(heads.size());
  size_t i = 0;
  for (const auto& [head, path] : heads) row.emplace_back(head, probs[i++]);
  const NodeId chosen = sample_neighbor(row, rng());
  Worker w;
  w.path = heads[chosen];
  w.payload = ev;
  w.source = node;
  net().unicast(node, chosen, params().worker_bits, w);
}

void TermiteHill::handle_worker(NodeId node, const Frame& frame) {
  const auto& w = std::get<Worker>(frame.body);
  NodeState& st = nodes_[node];
  if (node == sink()) {
    deliver_at_sink(w.payload);
    return;
  }
  auto it = st.forwarding.find(w.path);
  if (it != st.forwarding.end()) {
    Worker out = w;
    net().unicast(node, it->second, params().worker_bits, out);
    return;
  }
  // Unknown path: the stale worker dies here, the payload re-enters as
  // locally sourced traffic over whatever route this node can find.
  if (trace().enabled())
    trace().record(sim().now(), "route_miss", node,
                   strf("path=%llu", static_cast<unsigned long long>(w.path)));
  on_app_event(node, w.payload);
}

void TermiteHill::handle_beacon(NodeId node, const Frame& frame) {
  const auto& b = std::get<PathBeacon>(frame.body);
  if (node == sink()) return;
  NodeState& st = nodes_[node];
  if (has_route(st)) return;  // a node with routes keeps its own
  // A relay already carrying this path must not shadow its entry with the
  // announcer; that would point the path back where it came from.
  if (st.forwarding.count(b.path)) return;
  st.forwarding[b.path] = frame.sender;
  st.own_paths.insert(b.path);
  if (trace().enabled())
    trace().record(sim().now(), "adopt", node,
                   strf("path=%llu head=%d",
                        static_cast<unsigned long long>(b.path), frame.sender));
  if (st.discovery_pending) st.discovery_pending = false;
  while (!st.event_cache.empty() && has_route(st)) {
    AppEvent ev = st.event_cache.front();
    st.event_cache.pop_front();
    send_worker(node, ev);
  }
}

void TermiteHill::on_mac_failure(NodeId node, const Frame& frame) {
  NodeState& st = nodes_[node];
  const NodeId lost = frame.dest;
  if (trace().enabled())
    trace().record(sim().now(), "mac_fail", node,
                   strf("dest=%d kind=%s", lost, packet_kind_name(frame.body)));
  for (auto it = st.forwarding.begin(); it != st.forwarding.end();) {
    if (it->second == lost) {
      st.own_paths.erase(it->first);
      it = st.forwarding.erase(it);
    } else {
      ++it;
    }
  }
  st.table.remove_neighbor(lost);
  if (const Worker* w = std::get_if<Worker>(&frame.body))
    on_app_event(node, w->payload);
}

}  // namespace termite
