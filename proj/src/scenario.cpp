#include "termite/scenario.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "termite/trace.hpp"

namespace termite {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw ScenarioError(strf("scenario line %d: %s", line, what.c_str()));
}

double to_double(const std::string& v, int line) {
  try {
    size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) fail(line, "trailing junk in number '" + v + "'");
    return x;
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::exception&) {
    fail(line, "not a number: '" + v + "'");
  }
}

int to_int(const std::string& v, int line) {
  const double x = to_double(v, line);
  const int i = static_cast<int>(x);
  if (static_cast<double>(i) != x) fail(line, "not an integer: '" + v + "'");
  return i;
}

uint64_t to_u64(const std::string& v, int line) {
  try {
    size_t used = 0;
    const unsigned long long x = std::stoull(v, &used);
    if (used != v.size()) fail(line, "trailing junk in number '" + v + "'");
    return x;
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::exception&) {
    fail(line, "not a non-negative integer: '" + v + "'");
  }
}

bool apply_scenario_key(Scenario& s, const std::string& k,
                        const std::string& v, int line) {
  if (k == "protocol") s.protocol = v;
  else if (k == "area_width") s.area_width = to_double(v, line);
  else if (k == "area_height") s.area_height = to_double(v, line);
  else if (k == "nodes") s.nodes = to_int(v, line);
  else if (k == "range") s.range = to_double(v, line);
  else if (k == "delivery_prob") s.delivery_prob = to_double(v, line);
  else if (k == "bit_rate") s.bit_rate = to_double(v, line);
  else if (k == "max_retransmits") s.max_retransmits = to_int(v, line);
  else if (k == "per_hop_latency") s.per_hop_latency = to_double(v, line);
  else if (k == "ack_timeout") s.ack_timeout = to_double(v, line);
  else if (k == "tx_j_per_bit") s.tx_j_per_bit = to_double(v, line);
  else if (k == "rx_j_per_bit") s.rx_j_per_bit = to_double(v, line);
  else if (k == "initial_energy") s.initial_energy = to_double(v, line);
  else if (k == "traffic_rate") s.traffic_rate = to_double(v, line);
  else if (k == "payload_bits") s.payload_bits = to_int(v, line);
  else if (k == "duration") s.duration = to_double(v, line);
  else if (k == "replications") s.replications = to_int(v, line);
  else if (k == "base_seed") s.base_seed = to_u64(v, line);
  else if (k == "sink_mode") s.sink_mode = v;
  else if (k == "sink_x") s.sink_x = to_double(v, line);
  else if (k == "sink_y") s.sink_y = to_double(v, line);
  else if (k == "t_change") s.t_change = to_double(v, line);
  else return false;
  return true;
}

bool apply_protocol_key(ProtocolParams& p, const std::string& k,
                        const std::string& v, int line) {
  if (k == "alpha") p.alpha = to_double(v, line);
  else if (k == "beta") p.beta = to_double(v, line);
  else if (k == "decay_mode") p.decay_mode = v;
  else if (k == "rho") p.rho = to_double(v, line);
  else if (k == "linear_x") p.linear_x = to_double(v, line);
  else if (k == "decay_period") p.decay_period_s = to_double(v, line);
  else if (k == "hmax") p.hmax = to_int(v, line);
  else if (k == "p_sf") p.p_sf = to_double(v, line);
  else if (k == "pheromone_initial") p.pheromone.initial = to_double(v, line);
  else if (k == "pheromone_floor") p.pheromone.floor = to_double(v, line);
  else if (k == "pheromone_ceiling") p.pheromone.ceiling = to_double(v, line);
  else if (k == "event_cache") p.event_cache_max = to_int(v, line);
  else if (k == "discovery_retry") p.discovery_retry_s = to_double(v, line);
  else if (k == "fs_bits") p.fs_bits = to_int(v, line);
  else if (k == "bs_bits") p.bs_bits = to_int(v, line);
  else if (k == "worker_bits") p.worker_bits = to_int(v, line);
  else if (k == "beacon_bits") p.beacon_bits = to_int(v, line);
  else if (k == "ff_ant_bits") p.ff_ant_bits = to_int(v, line);
  else if (k == "ff_reinforce_bits") p.ff_reinforce_bits = to_int(v, line);
  else if (k == "ff_initial_ttl") p.ff_initial_ttl = to_int(v, line);
  else if (k == "ff_ttl_slack") p.ff_ttl_slack = to_int(v, line);
  else if (k == "ff_best_freshness") p.ff_best_freshness_s = to_double(v, line);
  else if (k == "sc_cost_bits") p.sc_cost_bits = to_int(v, line);
  else if (k == "sc_data_bits") p.sc_data_bits = to_int(v, line);
  else if (k == "sc_ttl") p.sc_ttl = to_int(v, line);
  else if (k == "sc_refresh_period") p.sc_refresh_period_s = to_double(v, line);
  else if (k == "aodv_rreq_bits") p.aodv_rreq_bits = to_int(v, line);
  else if (k == "aodv_rrep_bits") p.aodv_rrep_bits = to_int(v, line);
  else if (k == "aodv_data_bits") p.aodv_data_bits = to_int(v, line);
  else if (k == "aodv_buffer_max") p.aodv_buffer_max = to_int(v, line);
  else if (k == "aodv_timeout") p.aodv_timeout_s = to_double(v, line);
  else return false;
  return true;
}

}  // namespace

Scenario parse_scenario(std::istream& in, const std::string& name) {
  Scenario s;
  s.name = name;
  std::string raw;
  int line = 0;
  bool in_protocol = false;
  while (std::getline(in, raw)) {
    ++line;
    const size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string text = trim(raw);
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text == "[protocol]") {
        in_protocol = true;
        continue;
      }
      fail(line, "unknown section " + text);
    }
    const size_t eq = text.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty() || value.empty()) fail(line, "expected key = value");
    const bool known = in_protocol
                           ? apply_protocol_key(s.proto, key, value, line)
                           : apply_scenario_key(s, key, value, line);
    if (!known) fail(line, "unknown key '" + key + "'");
  }
  validate_scenario(s);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file: " + path);
  std::string name = path;
  const size_t slash = name.find_last_of("/\\");
  if (slash != std::string::npos) name.erase(0, slash + 1);
  const size_t dot = name.find_last_of('.');
  if (dot != std::string::npos && dot > 0) name.erase(dot);
  return parse_scenario(in, name);
}

void validate_scenario(const Scenario& s) {
  const auto bad = [](const std::string& what) {
    throw ScenarioError("invalid scenario: " + what);
  };
  if (s.protocol != "termite-hill" && s.protocol != "ff" &&
      s.protocol != "sc" && s.protocol != "aodv")
    bad("unknown protocol '" + s.protocol +
        "' (expected termite-hill, ff, sc or aodv)");
  if (!(s.nodes >= 2)) bad("nodes must be >= 2");
  if (!(s.duration > 0)) bad("duration must be > 0");
  if (!(s.replications >= 1)) bad("replications must be >= 1");
  if (!(s.area_width > 0 && s.area_height > 0)) bad("area must be positive");
  if (!(s.range > 0)) bad("range must be > 0");
  if (!(s.delivery_prob >= 0 && s.delivery_prob <= 1))
    bad("delivery_prob must be in [0, 1]");
  if (!(s.bit_rate > 0)) bad("bit_rate must be > 0");
  if (s.max_retransmits < 0) bad("max_retransmits must be >= 0");
  if (!(s.per_hop_latency >= 0)) bad("per_hop_latency must be >= 0");
  if (!(s.ack_timeout >= 0)) bad("ack_timeout must be >= 0");
  if (!(s.tx_j_per_bit >= 0 && s.rx_j_per_bit >= 0))
    bad("energy per bit must be >= 0");
  if (!(s.initial_energy > 0)) bad("initial_energy must be > 0");
  if (!(s.traffic_rate > 0)) bad("traffic_rate must be > 0");
  if (!(s.payload_bits > 0)) bad("payload_bits must be > 0");
  if (s.sink_mode != "static" && s.sink_mode != "dynamic")
    bad("sink_mode must be static or dynamic");
  if (s.sink_mode == "dynamic" && !(s.t_change > 0))
    bad("t_change must be > 0 in dynamic mode");
  if (!(s.sink_x >= 0 && s.sink_x <= s.area_width && s.sink_y >= 0 &&
        s.sink_y <= s.area_height))
    bad("sink position must lie inside the area");

  const ProtocolParams& p = s.proto;
  if (!(p.alpha >= 0)) bad("alpha must be >= 0");
  if (!(p.beta >= 0)) bad("beta must be >= 0");
  if (p.decay_mode != "exponential" && p.decay_mode != "linear")
    bad("decay_mode must be exponential or linear");
  if (!(p.rho >= 0)) bad("rho must be >= 0");
  if (!(p.linear_x >= 0 && p.linear_x <= 1)) bad("linear_x must be in [0, 1]");
  if (!(p.decay_period_s > 0)) bad("decay_period must be > 0");
  if (p.hmax < 0) bad("hmax must be >= 0");
  if (!(p.p_sf >= 0 && p.p_sf <= 1)) bad("p_sf must be in [0, 1]");
  if (!(p.pheromone.floor > 0 && p.pheromone.floor <= p.pheromone.initial &&
        p.pheromone.initial <= p.pheromone.ceiling))
    bad("pheromone limits must satisfy 0 < floor <= initial <= ceiling");
  if (!(p.event_cache_max >= 1)) bad("event_cache must be >= 1");
  if (!(p.discovery_retry_s > 0)) bad("discovery_retry must be > 0");
  for (int bits : {p.fs_bits, p.bs_bits, p.worker_bits, p.beacon_bits,
                   p.ff_ant_bits, p.ff_reinforce_bits, p.sc_cost_bits,
                   p.sc_data_bits, p.aodv_rreq_bits, p.aodv_rrep_bits,
                   p.aodv_data_bits})
    if (bits <= 0) bad("frame sizes must be positive");
  if (p.ff_initial_ttl < 1) bad("ff_initial_ttl must be >= 1");
  if (p.ff_ttl_slack < 0) bad("ff_ttl_slack must be >= 0");
  if (!(p.ff_best_freshness_s > 0)) bad("ff_best_freshness must be > 0");
  if (p.sc_ttl < 1) bad("sc_ttl must be >= 1");
  if (!(p.sc_refresh_period_s > 0)) bad("sc_refresh_period must be > 0");
  if (p.aodv_buffer_max < 1) bad("aodv_buffer_max must be >= 1");
  if (!(p.aodv_timeout_s > 0)) bad("aodv_timeout must be > 0");
}

NetParams net_params(const Scenario& s) {
  NetParams np;
  np.range_m = s.range;
  np.delivery_prob = s.delivery_prob;
  np.max_retransmits = s.max_retransmits;
  np.bit_rate_bps = s.bit_rate;
  np.per_hop_latency_s = s.per_hop_latency;
  np.ack_timeout_s = s.ack_timeout;
  np.tx_j_per_bit = s.tx_j_per_bit;
  np.rx_j_per_bit = s.rx_j_per_bit;
  np.initial_energy_j = s.initial_energy;
  return np;
}

}  // namespace termite
