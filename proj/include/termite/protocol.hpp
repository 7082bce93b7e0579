// Protocol-agnostic plumbing: the parameter block every protocol reads from
// the scenario file, the callback interface the harness drives, and the
// by-name factory.
#pragma once

#include <functional>
#include <memory>
#include <string>

#include "termite/net_model.hpp"
#include "termite/pheromone.hpp"

namespace termite {

struct ProtocolParams {
  // Frame sizes in bits. The request/reply agents are small control frames;
  // data frames carry the application payload.
  int fs_bits = 160;      // 20 bytes
  int bs_bits = 160;      // 20 bytes
  int worker_bits = 320;  // 40 bytes
  int beacon_bits = 96;   // 12 bytes

  // Route selection (exponents of the selection rule).
  double alpha = 0.0;
  double beta = 2.0;

  // Pheromone decay. Exponential is the default mode.
  std::string decay_mode = "exponential";
  double rho = 0.1;        // exponential rate per decay period
  double linear_x = 0.1;   // linear fraction per decay period
  double decay_period_s = 1.0;

  PheromoneConfig pheromone;

  // Discovery shaping.
  int hmax = 10;        // always-rebroadcast hop budget
  double p_sf = 0.5;    // rebroadcast probability beyond hmax
  int event_cache_max = 64;
  double discovery_retry_s = 2.0;  // relaunch if no route arrived

  // Flooded-data comparator.
  int ff_ant_bits = 320;
  int ff_reinforce_bits = 160;
  int ff_initial_ttl = 32;
  int ff_ttl_slack = 2;
  double ff_best_freshness_s = 10.0;

  // Cost-gradient comparator.
  int sc_cost_bits = 96;
  int sc_data_bits = 320;
  int sc_ttl = 64;
  double sc_refresh_period_s = 30.0;

  // On-demand distance-vector comparator.
  int aodv_rreq_bits = 160;
  int aodv_rrep_bits = 160;
  int aodv_data_bits = 320;
  int aodv_buffer_max = 64;
  double aodv_timeout_s = 2.0;
};

// A routing protocol sees the world through these hooks. All per-node state
// lives inside the protocol object; the harness only routes callbacks.
class RoutingProtocol {
 public:
  struct Deps {
    Simulator* sim = nullptr;
    NetModel* net = nullptr;
    RngStream* rng = nullptr;   // protocol decisions only
    TraceLog* trace = nullptr;
    const ProtocolParams* params = nullptr;
    NodeId sink = 0;
    int n_nodes = 0;
    // Called once per worker/data frame reaching the sink; the harness
    // de-duplicates by event id.
    std::function<void(const AppEvent&)> deliver;
  };

  explicit RoutingProtocol(Deps d) : d_(std::move(d)) {}
  virtual ~RoutingProtocol() = default;

  // Wires the radio handlers and schedules protocol timers. Call once,
  // before any traffic.
  void start();

  virtual std::string name() const = 0;
  virtual void on_app_event(NodeId node, const AppEvent& ev) = 0;
  virtual void on_packet(NodeId node, const Frame& frame) = 0;
  virtual void on_mac_failure(NodeId node, const Frame& frame) { (void)node, (void)frame; }

 protected:
  // Called from start(); protocols schedule their recurring timers here.
  virtual void on_start() {}

  Simulator& sim() { return *d_.sim; }
  NetModel& net() { return *d_.net; }
  RngStream& rng() { return *d_.rng; }
  TraceLog& trace() { return *d_.trace; }
  const ProtocolParams& params() const { return *d_.params; }
  NodeId sink() const { return d_.sink; }
  int n_nodes() const { return d_.n_nodes; }
  void deliver_at_sink(const AppEvent& ev) {
    if (d_.deliver) d_.deliver(ev);
  }

  Deps d_;
};

// nullptr when the name is unknown. Valid names: termite-hill, ff, sc, aodv.
std::unique_ptr<RoutingProtocol> make_protocol(const std::string& name,
                                               RoutingProtocol::Deps deps);

}  // namespace termite
