#include "termite/baselines.hpp"

#include <algorithm>

namespace termite {

// --- flooded forward ---

FloodedForward::FloodedForward(Deps d) : RoutingProtocol(std::move(d)) {
  nodes_.resize(net().node_count());
}

int FloodedForward::ttl_for(NodeId node) const {
  const NodeState& st = nodes_[node];
  if (st.best_stamp >= 0.0 &&
      d_.sim->now() - st.best_stamp <= params().ff_best_freshness_s)
    return st.best_hops + params().ff_ttl_slack;
  return params().ff_initial_ttl;
}

void FloodedForward::on_app_event(NodeId node, const AppEvent& ev) {
  if (node == sink()) {
    deliver_at_sink(ev);
    return;
  }
  NodeState& st = nodes_[node];
  FloodAnt ant;
  ant.origin = node;
  ant.seq = st.next_seq++;
  ant.payload = ev;
  ant.hops = 0;
  ant.ttl = ttl_for(node);
  ant.visited = {node};
  st.seen.insert({node, ant.seq});  // never re-forward the own flood
  net().broadcast(node, params().ff_ant_bits, ant);
}

void FloodedForward::on_packet(NodeId node, const Frame& frame) {
  NodeState& st = nodes_[node];
  if (const auto* ant = std::get_if<FloodAnt>(&frame.body)) {
    if (!st.seen.insert({ant->origin, ant->seq}).second) return;
    if (node == sink()) {
      deliver_at_sink(ant->payload);
      // Walk the recorded path backwards so every hop learns its distance.
      if (!ant->visited.empty()) {
        PathReinforce r;
        r.sink = node;
        r.visited = ant->visited;
        r.index = static_cast<int>(ant->visited.size()) - 1;
        r.hops_from_sink = 1;
        net().unicast(node, r.visited[r.index], params().ff_reinforce_bits,
                      r);
      }
      return;
    }
    if (ant->ttl <= 1) return;  // scope exhausted
    FloodAnt out = *ant;
    out.hops += 1;
    out.ttl -= 1;
    out.visited.push_back(node);
    net().broadcast(node, params().ff_ant_bits, out);
    return;
  }
  if (const auto* r = std::get_if<PathReinforce>(&frame.body)) {
    st.best_hops = r->hops_from_sink;
    st.best_stamp = d_.sim->now();
    if (r->index > 0) {
      PathReinforce out = *r;
      out.index -= 1;
      out.hops_from_sink += 1;
      net().unicast(node, out.visited[out.index], params().ff_reinforce_bits,
                    out);
    }
  }
}

// --- sensor cost ---

SensorCost::SensorCost(Deps d) : RoutingProtocol(std::move(d)) {
  nodes_.resize(net().node_count());
}

void SensorCost::on_start() { start_wave(); }

void SensorCost::start_wave() {
  const uint32_t wave = next_wave_++;
  NodeState& st = nodes_[sink()];
  st.wave = wave;
  st.own_cost = 0;
  if (net().alive(sink()))
    net().broadcast(sink(), params().sc_cost_bits, CostAnnounce{wave, 0});
  sim().schedule(sim().now() + params().sc_refresh_period_s, sink(),
                 EventKind::ProtocolTimer, [this] { start_wave(); });
}

void SensorCost::adopt_cost(NodeId node, uint32_t wave, NodeId from,
                            int cost) {
  NodeState& st = nodes_[node];
  if (wave > st.wave) {  // a fresh wave obsoletes everything known
    st.wave = wave;
    st.own_cost = -1;
    st.neighbor_cost.clear();
  } else if (wave < st.wave) {
    return;
  }
  auto [it, inserted] = st.neighbor_cost.try_emplace(from, cost);
  if (!inserted) it->second = std::min(it->second, cost);
  const int via = cost + 1;
  if (st.own_cost < 0 || via < st.own_cost) {
    st.own_cost = via;
    net().broadcast(node, params().sc_cost_bits,
                    CostAnnounce{wave, st.own_cost});
  }
}

void SensorCost::forward_data(NodeId node, const ScData& data) {
  if (node == sink()) {
    deliver_at_sink(data.payload);
    return;
  }
  if (data.ttl <= 0) return;
  NodeState& st = nodes_[node];
  std::vector<std::pair<NodeId, double>> row;
  for (const auto& [nb, cost] : st.neighbor_cost) {
    if (nb == data.prev) continue;  // no immediate backtracking
    row.emplace_back(nb, 1.0 / (1.0 + cost));
  }
  if (row.empty() && st.neighbor_cost.count(data.prev))
    row.emplace_back(data.prev, 1.0);  // dead end: backtrack is all we have
  if (row.empty()) {
    if (trace().enabled())
      trace().record(sim().now(), "no_cost_route", node, "");
    return;
  }
  double sum = 0.0;
  for (auto& [nb, w] : row) sum += w;
  for (auto& [nb, w] : row) w /= sum;
  const NodeId chosen = sample_neighbor(row, rng());
  ScData out = data;
  out.ttl -= 1;
  out.prev = node;
  net().unicast(node, chosen, params().sc_data_bits, out);
}

void SensorCost::on_app_event(NodeId node, const AppEvent& ev) {
  ScData data;
  data.payload = ev;
  data.ttl = params().sc_ttl;
  data.prev = node;  // self: never excluded from the candidate row
  forward_data(node, data);
}

void SensorCost::on_packet(NodeId node, const Frame& frame) {
  if (const auto* c = std::get_if<CostAnnounce>(&frame.body)) {
    adopt_cost(node, c->wave, frame.sender, c->hops);
    return;
  }
  if (const auto* data = std::get_if<ScData>(&frame.body))
    forward_data(node, *data);
}

void SensorCost::on_mac_failure(NodeId node, const Frame& frame) {
  nodes_[node].neighbor_cost.erase(frame.dest);  // cost now unknown
}

// --- on-demand distance vector ---

AodvLite::AodvLite(Deps d) : RoutingProtocol(std::move(d)) {
  nodes_.resize(net().node_count());
}

void AodvLite::on_app_event(NodeId node, const AppEvent& ev) {
  if (node == sink()) {
    deliver_at_sink(ev);
    return;
  }
  NodeState& st = nodes_[node];
  auto it = st.routes.find(sink());
  if (it != st.routes.end() && it->second.valid) {
    net().unicast(node, it->second.next_hop, params().aodv_data_bits,
                  AodvData{ev, sink()});
    return;
  }
  if (static_cast<int>(st.buffer.size()) >= params().aodv_buffer_max) {
    st.buffer.pop_front();
    ++st.timeout_drops;
  }
  st.buffer.push_back(ev);
  if (!st.pending) start_discovery(node);
}

void AodvLite::start_discovery(NodeId node) {
  NodeState& st = nodes_[node];
  st.pending = true;
  const uint32_t id = st.next_rreq++;
  st.seen.insert({node, id});
  net().broadcast(node, params().aodv_rreq_bits, RouteRequest{node, id, 0});
  sim().schedule(sim().now() + params().aodv_timeout_s, node,
                 EventKind::ProtocolTimer, [this, node, id] {
                   NodeState& s = nodes_[node];
                   if (!s.pending || s.next_rreq != id + 1) return;
                   auto r = s.routes.find(sink());
                   if (r != s.routes.end() && r->second.valid) return;
                   // Discovery failed: waiting traffic is abandoned.
                   s.timeout_drops += s.buffer.size();
                   s.buffer.clear();
                   s.pending = false;
                 });
}

void AodvLite::on_packet(NodeId node, const Frame& frame) {
  NodeState& st = nodes_[node];
  if (const auto* rreq = std::get_if<RouteRequest>(&frame.body)) {
    if (!st.seen.insert({rreq->origin, rreq->id}).second) return;
    // Reverse route back to the requester, learned for free.
    RouteEntry& rev = st.routes[rreq->origin];
    rev = RouteEntry{frame.sender, rreq->hops + 1, true};
    if (node == sink()) {
      net().unicast(node, frame.sender, params().aodv_rrep_bits,
                    RouteReply{node, rreq->origin, 0});
      return;
    }
    net().broadcast(node, params().aodv_rreq_bits,
                    RouteRequest{rreq->origin, rreq->id, rreq->hops + 1});
    return;
  }
  if (const auto* rrep = std::get_if<RouteReply>(&frame.body)) {
    st.routes[rrep->sink] = RouteEntry{frame.sender, rrep->hops + 1, true};
    if (node == rrep->origin) {
      st.pending = false;
      while (!st.buffer.empty()) {
        AppEvent ev = st.buffer.front();
        st.buffer.pop_front();
        auto r = st.routes.find(sink());
        if (r == st.routes.end() || !r->second.valid) {
          st.buffer.push_front(ev);
          break;
        }
        net().unicast(node, r->second.next_hop, params().aodv_data_bits,
                      AodvData{ev, sink()});
      }
      return;
    }
    auto back = st.routes.find(rrep->origin);
    if (back == st.routes.end() || !back->second.valid) return;
    net().unicast(node, back->second.next_hop, params().aodv_rrep_bits,
                  RouteReply{rrep->sink, rrep->origin, rrep->hops + 1});
    return;
  }
  if (const auto* data = std::get_if<AodvData>(&frame.body)) {
    if (node == data->dest) {
      deliver_at_sink(data->payload);
      return;
    }
    auto r = st.routes.find(data->dest);
    if (r != st.routes.end() && r->second.valid) {
      net().unicast(node, r->second.next_hop, params().aodv_data_bits, *data);
    } else if (trace().enabled()) {
      trace().record(sim().now(), "no_route_drop", node,
                     strf("dest=%d", data->dest));
    }
  }
}

void AodvLite::on_mac_failure(NodeId node, const Frame& frame) {
  NodeState& st = nodes_[node];
  for (auto& [dest, entry] : st.routes)
    if (entry.next_hop == frame.dest) entry.valid = false;
  // In-flight data on the broken link is lost; the next application event
  // at a source with no valid route triggers a fresh discovery.
}

}  // namespace termite
