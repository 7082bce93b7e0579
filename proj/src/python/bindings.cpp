// Python module exposing the main operations: reward and selection math,
// the wood-piling world, scenario loading and experiment execution.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "termite/experiment.hpp"
#include "termite/termite_world.hpp"

namespace py = pybind11;
using namespace termite;

namespace {

py::dict run_result_dict(const RunResult& r) {
  py::dict d;
  d["run"] = r.run;
  d["seed"] = r.seed;
  d["generated"] = r.generated;
  d["delivered"] = r.delivered;
  d["success_rate_pct"] = r.success_rate_pct;
  d["energy_j"] = r.energy_j;
  d["efficiency_kbits_per_j"] = r.efficiency_kbits_per_j;
  d["latency_s"] = r.latency_s;
  d["ok"] = r.ok;
  return d;
}

py::dict experiment_dict(const ExperimentOutput& out) {
  py::dict d;
  d["protocol"] = out.protocol;
  d["scenario"] = out.scenario;
  d["n_nodes"] = out.n_nodes;
  py::list runs;
  for (const RunResult& r : out.runs) runs.append(run_result_dict(r));
  d["runs"] = runs;
  d["mean"] = run_result_dict(out.mean);
  d["stddev"] = run_result_dict(out.stddev);
  d["aggregated"] = out.aggregated;
  d["partial"] = out.partial;
  return d;
}

}  // namespace

PYBIND11_MODULE(termitesim, m) {
  m.doc() = "Sensor-network routing simulator with a pheromone protocol, "
            "comparators, and a wood-piling agent world";
  m.attr("__version__") = "0.1.0";

  m.def(
      "compute_reward",
      [](double n_nodes, double initial_energy, double e_min, double e_av,
         double n_j, double gamma_max) {
        const RewardResult r = compute_reward(n_nodes, initial_energy, e_min,
                                              e_av, n_j, gamma_max);
        return py::make_tuple(r.gamma, r.clamped);
      },
      py::arg("n_nodes"), py::arg("initial_energy"), py::arg("e_min"),
      py::arg("e_av"), py::arg("n_j"), py::arg("gamma_max"),
      "Path reward; returns (gamma, clamped)");

  m.def("selection_probabilities", &selection_probabilities,
        py::arg("values"), py::arg("alpha"), py::arg("beta"),
        "Normalized next-hop selection weights for one pheromone row");

  py::class_<WorldMetrics>(m, "WorldMetrics")
      .def_readonly("live_piles", &WorldMetrics::live_piles)
      .def_readonly("woods_in_piles", &WorldMetrics::woods_in_piles)
      .def_readonly("carried", &WorldMetrics::carried)
      .def_readonly("gathered_percent", &WorldMetrics::gathered_percent);

  py::class_<TermiteWorld>(m, "World")
      .def(py::init([](int woods, int termites, int width, int height,
                       uint64_t seed) {
             return TermiteWorld(woods, termites, width, height,
                                 RngStream(seed, "world"));
           }),
           py::arg("woods"), py::arg("termites"), py::arg("width"),
           py::arg("height"), py::arg("seed"))
      .def("step", &TermiteWorld::step)
      .def("run", &TermiteWorld::run, py::arg("steps"))
      .def("metrics", &TermiteWorld::metrics)
      .def_property_readonly("steps_taken", &TermiteWorld::steps_taken)
      .def_property_readonly("width", &TermiteWorld::width)
      .def_property_readonly("height", &TermiteWorld::height)
      .def("piles",
           [](const TermiteWorld& w) {
             py::list out;
             for (const auto& [id, pile] : w.piles())
               out.append(py::make_tuple(id, pile.x, pile.y, pile.count));
             return out;
           })
      .def("termites", [](const TermiteWorld& w) {
        py::list out;
        for (const Termite& t : w.termites())
          out.append(py::make_tuple(t.x, t.y, t.carrying));
        return out;
      });

  py::class_<Scenario>(m, "Scenario")
      .def_readwrite("protocol", &Scenario::protocol)
      .def_readwrite("nodes", &Scenario::nodes)
      .def_readwrite("duration", &Scenario::duration)
      .def_readwrite("replications", &Scenario::replications)
      .def_readwrite("base_seed", &Scenario::base_seed)
      .def_readwrite("traffic_rate", &Scenario::traffic_rate)
      .def_readwrite("sink_mode", &Scenario::sink_mode)
      .def_readwrite("t_change", &Scenario::t_change)
      .def_property_readonly("name",
                             [](const Scenario& s) { return s.name; });

  m.def("load_scenario", &load_scenario, py::arg("path"));
  m.def(
      "run_experiment",
      [](const Scenario& scn, const std::string& trace_path) {
        validate_scenario(scn);
        return experiment_dict(run_experiment(scn, trace_path));
      },
      py::arg("scenario"), py::arg("trace_path") = std::string());
  m.def(
      "density_sweep",
      [](const Scenario& scn, const std::vector<int>& counts,
         const std::vector<std::string>& protocols) {
        py::list out;
        for (const ExperimentOutput& e : density_sweep(scn, counts, protocols))
          out.append(experiment_dict(e));
        return out;
      },
      py::arg("scenario"), py::arg("node_counts"), py::arg("protocols"));
  m.def(
      "results_csv",
      [](const Scenario& scn) {
        validate_scenario(scn);
        return results_csv({run_experiment(scn)});
      },
      py::arg("scenario"), "Run an experiment and render its CSV text");
}
