#include "termite/pheromone.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace termite {

RewardResult compute_reward(double n_nodes, double initial_energy,
                            double e_min, double e_av, double n_j,
                            double gamma_max) {
  const double spread = e_av - n_j;
  if (spread == 0.0) return {gamma_max, true};
  const double denom = initial_energy - (e_min - n_j) / spread;
  if (!(denom > 0.0)) return {gamma_max, true};
  return {n_nodes / denom, false};
}

std::vector<double> selection_probabilities(const std::vector<double>& values,
                                            double alpha, double beta) {
  std::vector<double> w(values.size());
  double sum = 0.0;
  for (size_t i = 0; i < values.size(); ++i) {
    w[i] = std::pow(values[i] + alpha, beta);
    sum += w[i];
  }
  if (!(sum > 0.0)) {
    // Degenerate weights: fall back to the uniform startup distribution.
    const double u = values.empty() ? 0.0 : 1.0 / values.size();
    std::fill(w.begin(), w.end(), u);
    return w;
  }
  for (double& v : w) v /= sum;
  return w;
}

PheromoneTable::PheromoneTable(PheromoneConfig cfg) : cfg_(cfg) {
  if (!(cfg_.floor <= cfg_.initial && cfg_.initial <= cfg_.ceiling) ||
      !(cfg_.floor > 0.0)) {
    throw std::invalid_argument(
        "pheromone limits must satisfy 0 < floor <= initial <= ceiling");
  }
}

void PheromoneTable::add_neighbor(NodeId n) {
  if (!neighbors_.insert(n).second) return;
  auto& row = t_[n];
  for (NodeId d : destinations_) row.emplace(d, cfg_.initial);
}

void PheromoneTable::remove_neighbor(NodeId n) {
  neighbors_.erase(n);
  t_.erase(n);
}

void PheromoneTable::add_destination(NodeId d) {
  if (!destinations_.insert(d).second) return;
  for (NodeId n : neighbors_) t_[n].emplace(d, cfg_.initial);
}

void PheromoneTable::deposit(NodeId r, NodeId d, double gamma) {
  add_neighbor(r);
  add_destination(d);
  double& cell = t_[r][d];
  cell = std::min(cell + gamma, cfg_.ceiling);
}

void PheromoneTable::evaporate_exponential(double rho) {
  if (!(rho >= 0.0))
    throw std::invalid_argument("evaporation rate must be >= 0");
  const double factor = std::exp(-rho);
  for (auto& [n, row] : t_)
    for (auto& [d, cell] : row) cell = std::max(cell * factor, cfg_.floor);
}

void PheromoneTable::evaporate_linear(double x) {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::invalid_argument("linear decay fraction must be in [0, 1]");
  for (auto& [n, row] : t_)
    for (auto& [d, cell] : row) cell = std::max((1.0 - x) * cell, cfg_.floor);
}

void PheromoneTable::prune(const std::set<NodeId>& lost_neighbors) {
  for (NodeId n : lost_neighbors) remove_neighbor(n);

  const auto column_decayed = [this](NodeId d) {
    for (const auto& [n, row] : t_) {
      auto it = row.find(d);
      if (it != row.end() && it->second > cfg_.floor) return false;
    }
    return true;
  };
  const auto row_decayed = [this](NodeId n) {
    auto it = t_.find(n);
    if (it == t_.end()) return true;
    for (const auto& [d, cell] : it->second)
      if (cell > cfg_.floor) return false;
    return true;
  };

  std::vector<NodeId> drop;
  for (NodeId d : destinations_) {
    if (!column_decayed(d)) continue;
    if (has_neighbor(d) && !row_decayed(d)) continue;  // row still live
    drop.push_back(d);
  }
  for (NodeId d : drop) {
    destinations_.erase(d);
    for (auto& [n, row] : t_) row.erase(d);
    // A decayed neighbor-destination leaves the table entirely.
    if (has_neighbor(d)) remove_neighbor(d);
  }
}

double PheromoneTable::value(NodeId n, NodeId d) const {
  auto row = t_.find(n);
  if (row == t_.end()) return cfg_.initial;
  auto cell = row->second.find(d);
  return cell == row->second.end() ? cfg_.initial : cell->second;
}

std::vector<std::pair<NodeId, double>> PheromoneTable::probabilities(
    NodeId d, double alpha, double beta) const {
  std::vector<std::pair<NodeId, double>> out;
  if (neighbors_.empty()) return out;
  std::vector<double> values;
  values.reserve(neighbors_.size());
  for (NodeId n : neighbors_) values.push_back(value(n, d));
  const std::vector<double> probs =
      selection_probabilities(values, alpha, beta);
  size_t i = 0;
  for (NodeId n : neighbors_) out.emplace_back(n, probs[i++]);
  return out;
}

NodeId sample_neighbor(const std::vector<std::pair<NodeId, double>>& row,
                       RngStream& rng) {
  if (row.empty()) throw std::logic_error("sample_neighbor: empty row");
  const double u = rng.uniform();
  double acc = 0.0;
  for (const auto& [id, p] : row) {
    acc += p;
    if (u < acc) return id;
  }
  return row.back().first;  // fp remainder lands on the last entry
}

}  // namespace termite
