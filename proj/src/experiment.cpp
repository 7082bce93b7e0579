#include "termite/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace termite {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt_metric(double v) {
  if (std::isnan(v)) return "na";
  return strf("%.6g", v);
}

// Mean / sample stddev that skip NaN entries (e.g. latency of an all-loss
// run); all-NaN input stays NaN.
double nan_mean(const std::vector<double>& xs) {
  double sum = 0.0;
  int n = 0;
  for (double x : xs)
    if (!std::isnan(x)) sum += x, ++n;
  return n > 0 ? sum / n : kNaN;
}

double nan_stddev(const std::vector<double>& xs) {
  const double mu = nan_mean(xs);
  if (std::isnan(mu)) return kNaN;
  double ss = 0.0;
  int n = 0;
  for (double x : xs)
    if (!std::isnan(x)) ss += (x - mu) * (x - mu), ++n;
  return n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
}

}  // namespace

RunResult run_single(const Scenario& scn, int run_index, uint64_t seed,
                     TraceLog* trace) {
  Simulator sim;
  TraceLog null_trace;
  TraceLog& tl = trace ? *trace : null_trace;

  RngStream placement_rng(seed, "placement");
  RngStream radio_rng(seed, "radio");
  RngStream protocol_rng(seed, "protocol");
  RngStream traffic_rng(seed, "traffic");
  RngStream sink_rng(seed, "sink-motion");

  NetModel net(sim, radio_rng, tl, net_params(scn));
  net.add_node(scn.sink_x, scn.sink_y);  // node 0 is the sink
  for (int i = 1; i < scn.nodes; ++i) {
    const double x = placement_rng.uniform() * scn.area_width;
    const double y = placement_rng.uniform() * scn.area_height;
    net.add_node(x, y);
  }

  RunResult rr;
  rr.run = run_index;
  rr.seed = seed;
  std::set<uint64_t> delivered_ids;
  double latency_sum = 0.0;

  RoutingProtocol::Deps deps;
  deps.sim = &sim;
  deps.net = &net;
  deps.rng = &protocol_rng;
  deps.trace = &tl;
  deps.params = &scn.proto;
  deps.sink = 0;
  deps.n_nodes = scn.nodes;
  deps.deliver = [&](const AppEvent& ev) {
    if (!delivered_ids.insert(ev.id).second) return;
    ++rr.delivered;
    latency_sum += sim.now() - ev.created_at;
    if (tl.enabled())
      tl.record(sim.now(), "delivered", 0,
                strf("event=%llu origin=%d",
                     static_cast<unsigned long long>(ev.id), ev.origin));
  };

  auto proto = make_protocol(scn.protocol, deps);
  if (!proto) throw ScenarioError("unknown protocol: " + scn.protocol);
  proto->start();

  // CBR traffic, one stream per source, phase drawn in node order so the
  // generation schedule depends on the seed alone (not on the protocol).
  uint64_t next_event_id = 0;
  const double period = 1.0 / scn.traffic_rate;
  struct TickFn {
    Simulator* sim;
    NetModel* net;
    RoutingProtocol* proto;
    Scenario const* scn;
    RunResult* rr;
    uint64_t* next_id;
    double period;

    void fire(NodeId src) const {
      if (net->alive(src)) {
        AppEvent ev;
        ev.id = (*next_id)++;
        ev.origin = src;
        ev.created_at = sim->now();
        ev.payload_bits = scn->payload_bits;
        ++rr->generated;
        proto->on_app_event(src, ev);
      }
      const double next = sim->now() + period;
      if (next <= scn->duration)
        sim->schedule(next, src, EventKind::TrafficTick,
                      [copy = *this, src] { copy.fire(src); });
    }
  };
  TickFn tick{&sim, &net, proto.get(), &scn, &rr, &next_event_id, period};
  for (NodeId src = 1; src < scn.nodes; ++src) {
    // Phase in (0, period]: rate r over duration d gives floor(r*d) events.
    const double phase = (1.0 - traffic_rng.uniform()) * period;
    if (phase <= scn.duration)
      sim.schedule(phase, src, EventKind::TrafficTick,
                   [tick, src] { tick.fire(src); });
  }

  if (scn.sink_mode == "dynamic") {
    struct MoveFn {
      Simulator* sim;
      NetModel* net;
      RngStream* rng;
      TraceLog* tl;
      Scenario const* scn;
      void fire() const {
        const double x = rng->uniform() * scn->area_width;
        const double y = rng->uniform() * scn->area_height;
        net->move_node(0, x, y);
        if (tl->enabled())
          tl->record(sim->now(), "sink_move", 0, strf("x=%.6g y=%.6g", x, y));
        const double next = sim->now() + scn->t_change;
        if (next <= scn->duration)
          sim->schedule(next, 0, EventKind::SinkMoveTick,
                        [copy = *this] { copy.fire(); });
      }
    };
    MoveFn mover{&sim, &net, &sink_rng, &tl, &scn};
    sim.schedule(scn.t_change, 0, EventKind::SinkMoveTick,
                 [mover] { mover.fire(); });
  }

  sim.run(scn.duration);

  rr.energy_j = net.total_energy_consumed();
  rr.success_rate_pct =
      rr.generated > 0 ? 100.0 * rr.delivered / rr.generated : kNaN;
  rr.efficiency_kbits_per_j =
      rr.energy_j > 0.0
          ? (rr.delivered * scn.payload_bits / 1000.0) / rr.energy_j
          : kNaN;
  rr.latency_s = rr.delivered > 0 ? latency_sum / rr.delivered : kNaN;
  return rr;
}

ExperimentOutput run_experiment(const Scenario& scn,
                                const std::string& trace_run0_path) {
  ExperimentOutput out;
  out.protocol = scn.protocol;
  out.scenario = scn.name;
  out.n_nodes = scn.nodes;

  for (int k = 0; k < scn.replications; ++k) {
    const uint64_t seed = scn.base_seed + static_cast<uint64_t>(k);
    TraceLog trace;
    if (k == 0 && !trace_run0_path.empty()) trace.open_file(trace_run0_path);
    RunResult rr;
    try {
      rr = run_single(scn, k, seed, &trace);
    } catch (const std::exception&) {
      rr.run = k;
      rr.seed = seed;
      rr.ok = false;
      out.partial = true;
    }
    out.runs.push_back(rr);
  }

  std::vector<double> gen, del, succ, energy, eff, lat;
  for (const RunResult& r : out.runs) {
    if (!r.ok) continue;
    gen.push_back(static_cast<double>(r.generated));
    del.push_back(static_cast<double>(r.delivered));
    succ.push_back(r.success_rate_pct);
    energy.push_back(r.energy_j);
    eff.push_back(r.efficiency_kbits_per_j);
    lat.push_back(r.latency_s);
  }
  out.aggregated = static_cast<int>(gen.size());
  out.mean.success_rate_pct = nan_mean(succ);
  out.mean.energy_j = nan_mean(energy);
  out.mean.efficiency_kbits_per_j = nan_mean(eff);
  out.mean.latency_s = nan_mean(lat);
  out.stddev.success_rate_pct = nan_stddev(succ);
  out.stddev.energy_j = nan_stddev(energy);
  out.stddev.efficiency_kbits_per_j = nan_stddev(eff);
  out.stddev.latency_s = nan_stddev(lat);
  return out;
}

std::vector<ExperimentOutput> density_sweep(
    const Scenario& scn, const std::vector<int>& node_counts,
    const std::vector<std::string>& protocols) {
  if (node_counts.empty())
    throw ScenarioError("density sweep needs at least one node count");
  std::vector<ExperimentOutput> outs;
  for (const std::string& p : protocols) {
    for (int n : node_counts) {
      Scenario s = scn;
      s.protocol = p;
      s.nodes = n;
      validate_scenario(s);
      outs.push_back(run_experiment(s));
    }
  }
  std::sort(outs.begin(), outs.end(),
            [](const ExperimentOutput& a, const ExperimentOutput& b) {
              if (a.protocol != b.protocol) return a.protocol < b.protocol;
              return a.n_nodes < b.n_nodes;
            });
  return outs;
}

std::string csv_header() {
  return "protocol,scenario,n_nodes,run,seed,generated,delivered,"
         "success_rate_pct,energy_j,efficiency_kbits_per_j,latency_s";
}

void append_csv_rows(std::vector<std::string>& lines,
                     const ExperimentOutput& out) {
  double gen_mean = 0.0, del_mean = 0.0;
  int n_ok = 0;
  for (const RunResult& r : out.runs) {
    if (r.ok) {
      gen_mean += static_cast<double>(r.generated);
      del_mean += static_cast<double>(r.delivered);
      ++n_ok;
    }
  }
  if (n_ok > 0) {
    gen_mean /= n_ok;
    del_mean /= n_ok;
  }
  for (const RunResult& r : out.runs) {
    if (!r.ok) {
      lines.push_back(strf("%s,%s,%d,%d,%llu,na,na,na,na,na,na",
                           out.protocol.c_str(), out.scenario.c_str(),
                           out.n_nodes, r.run,
                           static_cast<unsigned long long>(r.seed)));
      continue;
    }
    lines.push_back(strf(
        "%s,%s,%d,%d,%llu,%lld,%lld,%s,%s,%s,%s", out.protocol.c_str(),
        out.scenario.c_str(), out.n_nodes, r.run,
        static_cast<unsigned long long>(r.seed),
        static_cast<long long>(r.generated),
        static_cast<long long>(r.delivered),
        fmt_metric(r.success_rate_pct).c_str(), fmt_metric(r.energy_j).c_str(),
        fmt_metric(r.efficiency_kbits_per_j).c_str(),
        fmt_metric(r.latency_s).c_str()));
  }
  lines.push_back(strf(
      "%s,%s,%d,aggregate,na,%s,%s,%s,%s,%s,%s", out.protocol.c_str(),
      out.scenario.c_str(), out.n_nodes,
      n_ok > 0 ? fmt_metric(gen_mean).c_str() : "na",
      n_ok > 0 ? fmt_metric(del_mean).c_str() : "na",
      fmt_metric(out.mean.success_rate_pct).c_str(),
      fmt_metric(out.mean.energy_j).c_str(),
      fmt_metric(out.mean.efficiency_kbits_per_j).c_str(),
      fmt_metric(out.mean.latency_s).c_str()));
}

std::string results_csv(const std::vector<ExperimentOutput>& outputs) {
  std::vector<std::string> lines;
  lines.push_back(csv_header());
  for (const ExperimentOutput& out : outputs) append_csv_rows(lines, out);
  std::string joined;
  for (const std::string& l : lines) {
    joined += l;
    joined += '\n';
  }
  return joined;
}

}  // namespace termite
