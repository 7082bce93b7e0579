#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "termite/experiment.hpp"

using namespace termite;

namespace {

Scenario tiny_scenario() {
  Scenario s;
  s.name = "tiny";
  s.protocol = "ff";
  s.area_width = 40.0;
  s.area_height = 40.0;
  s.nodes = 5;
  s.range = 35.0;
  s.delivery_prob = 1.0;
  s.initial_energy = 5.0;
  s.traffic_rate = 0.5;
  s.duration = 20.0;
  s.replications = 3;
  s.base_seed = 100;
  s.sink_x = 20.0;
  s.sink_y = 20.0;
  return s;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("scenario text parses with comments, sections and defaults") {
  std::istringstream in(
      "# leading comment\n"
      "protocol = sc\n"
      "nodes = 12  # inline comment\n"
      "\n"
      "   range   =   20.5\n"
      "base_seed = 9000\n"
      "[protocol]\n"
      "beta = 1.5\n"
      "sc_ttl = 7\n");
  const Scenario s = parse_scenario(in, "mini");
  CHECK(s.name == "mini");
  CHECK(s.protocol == "sc");
  CHECK(s.nodes == 12);
  CHECK(s.range == 20.5);
  CHECK(s.base_seed == 9000);
  CHECK(s.proto.beta == 1.5);
  CHECK(s.proto.sc_ttl == 7);
  CHECK(s.duration == 360.0);  // untouched default
}

TEST_CASE("parse errors carry the line number") {
  auto parse = [](const char* text) {
    std::istringstream in(text);
    return parse_scenario(in, "bad");
  };
  CHECK_THROWS_WITH_AS(parse("# c\nnope = 1\n"),
                       "scenario line 2: unknown key 'nope'", ScenarioError);
  CHECK_THROWS_WITH_AS(parse("protocol termite-hill\n"),
                       "scenario line 1: expected key = value", ScenarioError);
  CHECK_THROWS_WITH_AS(parse("nodes = \n"),
                       "scenario line 1: expected key = value", ScenarioError);
  CHECK_THROWS_WITH_AS(parse("nodes = twelve\n"),
                       "scenario line 1: not a number: 'twelve'",
                       ScenarioError);
  CHECK_THROWS_WITH_AS(parse("range = 35m\n"),
                       "scenario line 1: trailing junk in number '35m'",
                       ScenarioError);
  CHECK_THROWS_WITH_AS(parse("nodes = 2.5\n"),
                       "scenario line 1: not an integer: '2.5'", ScenarioError);
  CHECK_THROWS_WITH_AS(parse("[radio]\n"),
                       "scenario line 1: unknown section [radio]",
                       ScenarioError);
  // protocol keys are rejected outside their section
  CHECK_THROWS_AS(parse("beta = 2\n"), ScenarioError);
}

TEST_CASE("validation rejects out-of-range settings") {
  auto broken = [](auto&& tweak) {
    Scenario s = tiny_scenario();
    tweak(s);
    return s;
  };
  CHECK_THROWS_WITH_AS(
      validate_scenario(broken([](Scenario& s) { s.nodes = 1; })),
      "invalid scenario: nodes must be >= 2", ScenarioError);
  CHECK_THROWS_AS(
      validate_scenario(broken([](Scenario& s) { s.protocol = "dsr"; })),
      ScenarioError);
  CHECK_THROWS_AS(
      validate_scenario(broken([](Scenario& s) { s.delivery_prob = 1.5; })),
      ScenarioError);
  CHECK_THROWS_AS(
      validate_scenario(broken([](Scenario& s) { s.sink_x = 200.0; })),
      ScenarioError);
  CHECK_THROWS_AS(validate_scenario(broken([](Scenario& s) {
                    s.sink_mode = "dynamic";
                    s.t_change = 0.0;
                  })),
                  ScenarioError);
  CHECK_THROWS_AS(validate_scenario(broken([](Scenario& s) {
                    s.proto.pheromone.floor = 0.0;
                  })),
                  ScenarioError);
  CHECK_THROWS_AS(
      validate_scenario(broken([](Scenario& s) { s.proto.sc_ttl = 0; })),
      ScenarioError);
  // delivery_prob == 0 is a legal (if bleak) radio
  Scenario dead_air = tiny_scenario();
  dead_air.delivery_prob = 0.0;
  CHECK_NOTHROW(validate_scenario(dead_air));
}

TEST_CASE("radio settings map through to the network model") {
  Scenario s = tiny_scenario();
  s.range = 21.0;
  s.delivery_prob = 0.5;
  s.max_retransmits = 7;
  s.bit_rate = 1000.0;
  s.per_hop_latency = 0.25;
  s.ack_timeout = 0.75;
  s.tx_j_per_bit = 1e-6;
  s.rx_j_per_bit = 2e-6;
  s.initial_energy = 3.5;
  const NetParams np = net_params(s);
  CHECK(np.range_m == 21.0);
  CHECK(np.delivery_prob == 0.5);
  CHECK(np.max_retransmits == 7);
  CHECK(np.bit_rate_bps == 1000.0);
  CHECK(np.per_hop_latency_s == 0.25);
  CHECK(np.ack_timeout_s == 0.75);
  CHECK(np.tx_j_per_bit == 1e-6);
  CHECK(np.rx_j_per_bit == 2e-6);
  CHECK(np.initial_energy_j == 3.5);
}

TEST_CASE("the bundled scenario files load") {
  const Scenario s = load_scenario(SCENARIO_DIR "/table1-static.scn");
  CHECK(s.name == "table1-static");
  CHECK(s.protocol == "termite-hill");
  CHECK(s.nodes == 100);
  CHECK(s.replications == 10);
  CHECK(s.sink_mode == "static");

  const Scenario d = load_scenario(SCENARIO_DIR "/table1-dynamic.scn");
  CHECK(d.name == "table1-dynamic");
  CHECK(d.sink_mode == "dynamic");
  CHECK(d.t_change > 0.0);

  CHECK_THROWS_AS(load_scenario(SCENARIO_DIR "/does-not-exist.scn"),
                  ScenarioError);
}

TEST_CASE("a run's metrics are consistent with its counters") {
  const Scenario s = tiny_scenario();
  const RunResult rr = run_single(s, 0, 99, nullptr);
  CHECK(rr.ok);
  // phase lies in (0, period]: every source fires rate*duration times
  CHECK(rr.generated == 4 * 10);
  CHECK(rr.delivered <= rr.generated);
  CHECK(rr.energy_j > 0.0);
  CHECK(rr.success_rate_pct ==
        doctest::Approx(100.0 * rr.delivered / rr.generated).epsilon(1e-12));
  CHECK(rr.efficiency_kbits_per_j ==
        doctest::Approx(rr.delivered * s.payload_bits / 1000.0 / rr.energy_j)
            .epsilon(1e-12));
  if (rr.delivered > 0) CHECK(rr.latency_s > 0.0);
}

TEST_CASE("traffic generation is pinned by the seed, not the protocol") {
  Scenario s = tiny_scenario();
  s.nodes = 8;
  s.area_width = s.area_height = 60.0;
  s.delivery_prob = 0.9;
  int64_t first_gen = -1;
  for (const char* proto : {"termite-hill", "ff", "sc", "aodv"}) {
    s.protocol = proto;
    const RunResult rr = run_single(s, 0, 777, nullptr);
    if (first_gen < 0) first_gen = rr.generated;
    CHECK(rr.generated == first_gen);
    CHECK(rr.delivered <= rr.generated);
  }
}

TEST_CASE("an idle network reports na metrics") {
  Scenario s = tiny_scenario();
  s.protocol = "termite-hill";
  s.traffic_rate = 1e-9;  // first tick far beyond the horizon
  s.replications = 1;
  const RunResult rr = run_single(s, 0, 5, nullptr);
  CHECK(rr.generated == 0);
  CHECK(rr.delivered == 0);
  CHECK(std::isnan(rr.success_rate_pct));
  CHECK(std::isnan(rr.efficiency_kbits_per_j));  // nothing transmitted
  CHECK(std::isnan(rr.latency_s));

  const std::string csv = results_csv({run_experiment(s)});
  const auto lines = split_lines(csv);
  REQUIRE(lines.size() == 3);  // header, one run, aggregate
  // energy is a plain sum (0 when idle); the ratios are the na columns
  CHECK(lines[1] == "termite-hill,tiny,5,0,100,0,0,na,0,na,na");
  CHECK(lines[2] == "termite-hill,tiny,5,aggregate,na,0,0,na,0,na,na");
}

TEST_CASE("replications aggregate over the per-run metrics") {
  const Scenario s = tiny_scenario();
  const ExperimentOutput out = run_experiment(s);
  CHECK(out.protocol == "ff");
  CHECK(out.scenario == "tiny");
  CHECK(out.n_nodes == 5);
  REQUIRE(out.runs.size() == 3);
  CHECK(out.aggregated == 3);
  CHECK_FALSE(out.partial);
  double succ_sum = 0.0;
  for (int k = 0; k < 3; ++k) {
    CHECK(out.runs[k].run == k);
    CHECK(out.runs[k].seed == s.base_seed + static_cast<uint64_t>(k));
    CHECK(out.runs[k].ok);
    succ_sum += out.runs[k].success_rate_pct;
  }
  CHECK(out.mean.success_rate_pct ==
        doctest::Approx(succ_sum / 3.0).epsilon(1e-12));
}

TEST_CASE("the results table has a fixed shape") {
  const Scenario s = tiny_scenario();
  const std::string csv = results_csv({run_experiment(s)});
  const auto lines = split_lines(csv);
  REQUIRE(lines.size() == 1 + 3 + 1);
  CHECK(lines[0] ==
        "protocol,scenario,n_nodes,run,seed,generated,delivered,"
        "success_rate_pct,energy_j,efficiency_kbits_per_j,latency_s");
  for (const std::string& line : lines)
    CHECK(std::count(line.begin(), line.end(), ',') == 10);
  CHECK(lines[4].find("ff,tiny,5,aggregate,na,") == 0);
}

TEST_CASE("identical configurations emit byte-identical tables") {
  Scenario s = tiny_scenario();
  s.protocol = "sc";
  s.replications = 2;
  const std::string a = results_csv({run_experiment(s)});
  const std::string b = results_csv({run_experiment(s)});
  CHECK(a == b);
  CHECK_FALSE(a.empty());
  CHECK(a.back() == '\n');
}

TEST_CASE("a broken replication yields na rows, the rest aggregate") {
  Scenario s = tiny_scenario();
  s.protocol = "nonesuch";  // run_single rejects it; run_experiment survives
  const ExperimentOutput out = run_experiment(s);
  CHECK(out.partial);
  CHECK(out.aggregated == 0);
  REQUIRE(out.runs.size() == 3);
  CHECK_FALSE(out.runs[0].ok);

  const auto lines = split_lines(results_csv({out}));
  REQUIRE(lines.size() == 5);
  CHECK(lines[1] == "nonesuch,tiny,5,0,100,na,na,na,na,na,na");
  CHECK(lines[4] == "nonesuch,tiny,5,aggregate,na,na,na,na,na,na,na");
}

TEST_CASE("density sweeps cover the grid and sort their output") {
  Scenario s = tiny_scenario();
  s.duration = 10.0;
  s.replications = 2;
  const auto outs = density_sweep(s, {9, 4}, {"ff", "aodv"});
  REQUIRE(outs.size() == 4);
  CHECK(outs[0].protocol == "aodv");
  CHECK(outs[0].n_nodes == 4);
  CHECK(outs[1].protocol == "aodv");
  CHECK(outs[1].n_nodes == 9);
  CHECK(outs[2].protocol == "ff");
  CHECK(outs[2].n_nodes == 4);
  CHECK(outs[3].protocol == "ff");
  CHECK(outs[3].n_nodes == 9);
  for (const auto& out : outs) CHECK(out.runs.size() == 2);

  CHECK_THROWS_AS(density_sweep(s, {}, {"ff"}), ScenarioError);
  // sweep entries are validated before running
  CHECK_THROWS_AS(density_sweep(s, {1}, {"ff"}), ScenarioError);
}

TEST_CASE("a trace stream captures the run") {
  Scenario s = tiny_scenario();
  s.nodes = 4;
  s.area_width = s.area_height = 30.0;
  s.range = 50.0;  // everyone hears everyone
  s.replications = 1;
  TraceLog tl;
  std::ostringstream os;
  tl.attach(&os);
  const RunResult rr = run_single(s, 0, 42, &tl);
  CHECK(rr.delivered > 0);
  const std::string text = os.str();
  CHECK_FALSE(text.empty());
  CHECK(text.find("delivered") != std::string::npos);
}
