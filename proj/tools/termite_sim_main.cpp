// Command-line front end: run experiments, sweep densities, run the
// wood-piling world, validate scenario files.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "termite/experiment.hpp"
#include "termite/termite_world.hpp"

namespace {

using termite::Scenario;

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<int> split_ints(const std::string& csv) {
  std::vector<int> out;
  for (const std::string& s : split_list(csv)) out.push_back(std::stoi(s));
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << content;
  if (!f) throw std::runtime_error("short write to " + path);
}

void print_summary(const termite::ExperimentOutput& out) {
  std::printf(
      "%s %s n=%d runs=%d%s success=%s%% energy=%s J efficiency=%s Kbits/J "
      "latency=%s s\n",
      out.protocol.c_str(), out.scenario.c_str(), out.n_nodes, out.aggregated,
      out.partial ? " (partial)" : "",
      termite::strf("%.6g", out.mean.success_rate_pct).c_str(),
      termite::strf("%.6g", out.mean.energy_j).c_str(),
      termite::strf("%.6g", out.mean.efficiency_kbits_per_j).c_str(),
      termite::strf("%.6g", out.mean.latency_s).c_str());
}

int cmd_run(const std::string& scenario_path, const std::string& out_dir,
            uint64_t* seed, std::string* protocol, int* nodes, bool trace) {
  Scenario scn = termite::load_scenario(scenario_path);
  if (seed) scn.base_seed = *seed;
  if (protocol) scn.protocol = *protocol;
  if (nodes) scn.nodes = *nodes;
  termite::validate_scenario(scn);

  std::filesystem::create_directories(out_dir);
  const std::string trace_path =
      trace ? out_dir + "/trace_run0.txt" : std::string();
  termite::ExperimentOutput out = termite::run_experiment(scn, trace_path);
  write_file(out_dir + "/results.csv", termite::results_csv({out}));
  print_summary(out);
  std::printf("wrote %s/results.csv\n", out_dir.c_str());
  if (trace) std::printf("wrote %s\n", trace_path.c_str());
  return out.partial ? 2 : 0;
}

int cmd_sweep(const std::string& scenario_path, const std::string& out_dir,
              const std::string& nodes_csv, const std::string& protocols_csv) {
  Scenario scn = termite::load_scenario(scenario_path);
  const std::vector<int> counts = split_ints(nodes_csv);
  const std::vector<std::string> protocols = split_list(protocols_csv);
  if (counts.empty()) throw termite::ScenarioError("--nodes list is empty");
  if (protocols.empty())
    throw termite::ScenarioError("--protocols list is empty");

  std::filesystem::create_directories(out_dir);
  const std::vector<termite::ExperimentOutput> outs =
      termite::density_sweep(scn, counts, protocols);
  write_file(out_dir + "/sweep.csv", termite::results_csv(outs));
  for (const auto& out : outs) print_summary(out);
  std::printf("wrote %s/sweep.csv\n", out_dir.c_str());
  for (const auto& out : outs)
    if (out.partial) return 2;
  return 0;
}

int cmd_world(int termites, int woods, int size, int64_t steps, int seeds,
              uint64_t base_seed, int sample, const std::string& out_dir) {
  if (termites < 0 || woods < 0 || size <= 0 || steps < 0 || seeds < 1 ||
      sample < 1)
    throw termite::ScenarioError("world: counts must be positive");
  std::filesystem::create_directories(out_dir);
  std::string csv = "seed,time,live_piles,woods_in_piles,carried\n";
  for (int k = 0; k < seeds; ++k) {
    const uint64_t seed = base_seed + static_cast<uint64_t>(k);
    termite::TermiteWorld world(woods, termites, size, size,
                                termite::RngStream(seed, "world"));
    auto emit = [&] {
      const termite::WorldMetrics m = world.metrics();
      csv += termite::strf("%llu,%lld,%d,%d,%d\n",
                           static_cast<unsigned long long>(seed),
                           static_cast<long long>(world.steps_taken()),
                           m.live_piles, m.woods_in_piles, m.carried);
    };
    emit();
    while (world.steps_taken() < steps) {
      const int64_t chunk =
          std::min<int64_t>(sample, steps - world.steps_taken());
      world.run(chunk);
      emit();
    }
    const termite::WorldMetrics m = world.metrics();
    std::printf("seed=%llu steps=%lld live_piles=%d woods_in_piles=%d "
                "gathered=%.1f%%\n",
                static_cast<unsigned long long>(seed),
                static_cast<long long>(steps), m.live_piles, m.woods_in_piles,
                m.gathered_percent);
  }
  write_file(out_dir + "/world.csv", csv);
  std::printf("wrote %s/world.csv\n", out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-event simulator for pheromone-based sensor routing"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = "out";
  uint64_t seed = 0;
  bool seed_set = false;
  std::string protocol;
  int nodes = 0;
  bool no_trace = false;

  CLI::App* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("scenario", scenario_path, "Scenario file")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--seed", seed, "Base seed override")
      ->each([&](const std::string&) { seed_set = true; });
  run->add_option("--protocol", protocol, "Protocol override");
  run->add_option("--nodes", nodes, "Node count override");
  run->add_flag("--no-trace", no_trace, "Skip the replication-0 trace file");

  std::string nodes_csv = "9,25,49,81,100";
  std::string protocols_csv = "termite-hill,ff,sc,aodv";
  CLI::App* sweep = app.add_subcommand("sweep", "Density sweep");
  sweep->add_option("scenario", scenario_path, "Scenario file")->required();
  sweep->add_option("--out", out_dir, "Output directory");
  sweep->add_option("--nodes", nodes_csv, "Comma-separated node counts");
  sweep->add_option("--protocols", protocols_csv,
                    "Comma-separated protocol names");

  int w_termites = 200, w_woods = 100, w_size = 200, w_seeds = 5,
      w_sample = 10;
  int64_t w_steps = 7000;
  uint64_t w_seed = 1;
  CLI::App* world = app.add_subcommand("world", "Wood-piling agent world");
  world->add_option("--termites", w_termites, "Number of agents");
  world->add_option("--woods", w_woods, "Number of wood chips");
  world->add_option("--size", w_size, "Grid side length");
  world->add_option("--steps", w_steps, "Steps to simulate");
  world->add_option("--seeds", w_seeds, "Number of seeds");
  world->add_option("--seed", w_seed, "First seed");
  world->add_option("--sample", w_sample, "Sampling stride for the series");
  world->add_option("--out", out_dir, "Output directory");

  CLI::App* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("scenario", scenario_path, "Scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed())
      return cmd_run(scenario_path, out_dir, seed_set ? &seed : nullptr,
                     protocol.empty() ? nullptr : &protocol,
                     nodes > 0 ? &nodes : nullptr, !no_trace);
    if (sweep->parsed())
      return cmd_sweep(scenario_path, out_dir, nodes_csv, protocols_csv);
    if (world->parsed())
      return cmd_world(w_termites, w_woods, w_size, w_steps, w_seeds, w_seed,
                       w_sample, out_dir);
    if (validate->parsed()) {
      termite::load_scenario(scenario_path);
      std::printf("ok\n");
      return 0;
    }
  } catch (const termite::ScenarioError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
