// Grid world of wood-gathering agents: chips start as single-chip piles,
// agents wander, pick up from piles and deposit next to piles, and the
// number of live piles falls over time. No pile is ever created after
// initialization; a pile emptied once is gone for good.
#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "termite/sim_core.hpp"

namespace termite {

struct Pile {
  int id = 0;  // 1-based placement order
  int x = 0;
  int y = 0;
  int count = 0;
};

struct Termite {
  int x = 0;
  int y = 0;
  bool carrying = false;
};

struct WorldMetrics {
  int live_piles = 0;
  int woods_in_piles = 0;
  int carried = 0;
  double gathered_percent = 0.0;
};

class TermiteWorld {
 public:
  // Places num_wood piles and num_termites agents on distinct random cells.
  // Throws std::invalid_argument when they cannot all fit.
  TermiteWorld(int num_wood, int num_termites, int width, int height,
               RngStream rng);

  // Explicit placement (replays, rule-level checks). Pile cells must be
  // unique; total wood = pile counts + chips already carried.
  TermiteWorld(std::vector<Pile> piles, std::vector<Termite> termites,
               int width, int height, RngStream rng);

  // One tick: every agent, in index order, moves one random king-move step
  // (torus wrap), then applies the pick-up or put-down rule where it lands.
  void step();
  void run(int64_t steps);

  // The rule half of a tick for one agent, without the move.
  void apply_rules_at(int termite_index);

  WorldMetrics metrics() const;
  int64_t steps_taken() const { return steps_; }
  const std::map<int, Pile>& piles() const { return piles_; }
  const std::vector<Termite>& termites() const { return termites_; }
  int width() const { return width_; }
  int height() const { return height_; }
  int num_wood() const { return num_wood_; }

 private:
  int cell(int x, int y) const { return y * width_ + x; }
  int wrap_x(int x) const { return (x % width_ + width_) % width_; }
  int wrap_y(int y) const { return (y % height_ + height_) % height_; }
  int torus_chebyshev(int x0, int y0, int x1, int y1) const;
  // Live pile on or next to (x, y); nearest wins, ties to the lower id.
  // Returns 0 when there is none.
  int adjacent_pile(int x, int y) const;
  void apply_rules(Termite& t);

  int width_ = 0;
  int height_ = 0;
  int num_wood_ = 0;
  int64_t steps_ = 0;
  RngStream rng_;
  std::map<int, Pile> piles_;
  std::vector<int> pile_at_;  // cell -> pile id, 0 when none
  std::vector<Termite> termites_;
};

}  // namespace termite
