// Scenario files: flat `key = value` text with `#` comments plus a
// [protocol] section for protocol parameters. Parsing is strict; unknown
// keys and out-of-range values are configuration errors.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "termite/net_model.hpp"
#include "termite/protocol.hpp"

namespace termite {

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Scenario {
  std::string name = "scenario";
  std::string protocol = "termite-hill";

  double area_width = 100.0;
  double area_height = 100.0;
  int nodes = 100;

  double range = 35.0;
  double delivery_prob = 0.95;
  double bit_rate = 250000.0;
  int max_retransmits = 3;
  double per_hop_latency = 0.001;
  double ack_timeout = 0.005;
  double tx_j_per_bit = 2.0e-7;
  double rx_j_per_bit = 2.2e-7;
  double initial_energy = 1.0;

  // Every non-sink node is a source emitting CBR events.
  double traffic_rate = 0.1;  // events per second per source
  int payload_bits = 320;

  double duration = 360.0;
  int replications = 10;
  uint64_t base_seed = 1;

  std::string sink_mode = "static";  // static | dynamic
  double sink_x = 50.0;
  double sink_y = 50.0;
  double t_change = 2.0;  // dynamic mode: relocation period

  ProtocolParams proto;
};

// Throws ScenarioError with a line-numbered message on any problem.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(std::istream& in, const std::string& name);
void validate_scenario(const Scenario& scn);

NetParams net_params(const Scenario& scn);

}  // namespace termite
