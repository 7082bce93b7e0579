// Per-node pheromone state: a dense matrix T[neighbor, destination] with
// floor/ceiling clamping, periodic evaporation and decay-based pruning,
// plus the reward and route-selection math used by the routing layer.
#pragma once

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "termite/sim_core.hpp"

namespace termite {

struct PheromoneConfig {
  double initial = 1.0;
  double floor = 0.05;
  double ceiling = 10.0;
};

struct RewardResult {
  double gamma = 0.0;
  bool clamped = false;  // singular or non-positive denominator
};

// Path reward. n_nodes and initial_energy describe the network; e_min and
// e_av are the minimum and average residual energy seen along the path and
// n_j the hop count at the evaluating node. A vanishing or non-positive
// denominator yields gamma_max instead of the raw formula value.
RewardResult compute_reward(double n_nodes, double initial_energy,
                            double e_min, double e_av, double n_j,
                            double gamma_max);

// Normalized selection weights for one pheromone row: w_i ∝ (T_i + alpha)^beta.
// An all-zero weight vector falls back to uniform.
std::vector<double> selection_probabilities(const std::vector<double>& values,
                                            double alpha, double beta);

class PheromoneTable {
 public:
  explicit PheromoneTable(PheromoneConfig cfg = {});

  // Row management. Adding an existing neighbor is a no-op; new rows get
  // `initial` for every known destination (and vice versa for columns).
  void add_neighbor(NodeId n);
  void remove_neighbor(NodeId n);  // lost-contact rule: unconditional
  void add_destination(NodeId d);
  bool has_neighbor(NodeId n) const { return neighbors_.count(n) != 0; }
  bool has_destination(NodeId d) const { return destinations_.count(d) != 0; }

  // T[r, d] += gamma, clamped at ceiling; unknown r or d is created first.
  void deposit(NodeId r, NodeId d, double gamma);

  // One decay period. Every entry moves toward (and stops at) the floor.
  void evaporate_exponential(double rho);  // T <- max(T * e^-rho, floor)
  void evaporate_linear(double x);         // T <- max((1 - x) * T, floor)

  // Remove lost neighbors' rows, then drop fully-decayed destination
  // columns. A destination that is also a neighbor goes only when both its
  // column and its row sit at the floor, and then disappears entirely.
  void prune(const std::set<NodeId>& lost_neighbors = {});

  // Entry lookup; unknown pairs read as `initial` (the creation value).
  double value(NodeId n, NodeId d) const;

  // Selection distribution over current neighbors for destination d,
  // ascending neighbor id. Empty result means no route (no neighbors).
  std::vector<std::pair<NodeId, double>> probabilities(NodeId d, double alpha,
                                                       double beta) const;

  const std::set<NodeId>& neighbors() const { return neighbors_; }
  const std::set<NodeId>& destinations() const { return destinations_; }
  const PheromoneConfig& config() const { return cfg_; }

 private:
  PheromoneConfig cfg_;
  std::set<NodeId> neighbors_;
  std::set<NodeId> destinations_;
  // t_[neighbor][destination]; kept dense over neighbors_ x destinations_.
  std::map<NodeId, std::map<NodeId, double>> t_;
};

// Categorical draw from a probability row. The row must be non-empty;
// weights are assumed normalized (a trailing remainder goes to the last).
NodeId sample_neighbor(const std::vector<std::pair<NodeId, double>>& row,
                       RngStream& rng);

}  // namespace termite
