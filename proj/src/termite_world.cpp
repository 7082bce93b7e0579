#include "termite/termite_world.hpp"

#include <algorithm>
#include <stdexcept>

namespace termite {

namespace {
// King moves in fixed scan order; rule scans below reuse the same order.
constexpr int kDx[8] = {-1, 0, 1, -1, 1, -1, 0, 1};
constexpr int kDy[8] = {-1, -1, -1, 0, 0, 1, 1, 1};
}  // namespace

TermiteWorld::TermiteWorld(int num_wood, int num_termites, int width,
                           int height, RngStream rng)
    : width_(width), height_(height), num_wood_(num_wood), rng_(rng) {
  if (width <= 0 || height <= 0)
    throw std::invalid_argument("world dimensions must be positive");
  if (num_wood < 0 || num_termites < 0)
    throw std::invalid_argument("counts must be non-negative");
  if (static_cast<int64_t>(num_wood) + num_termites >
      static_cast<int64_t>(width) * height)
    throw std::invalid_argument("grid too small for the requested placement");

  pile_at_.assign(static_cast<size_t>(width) * height, 0);
  std::vector<char> taken(pile_at_.size(), 0);
  auto draw_free_cell = [&] {
    for (;;) {
      const int x = static_cast<int>(rng_.uniform_int(0, width_ - 1));
      const int y = static_cast<int>(rng_.uniform_int(0, height_ - 1));
      if (!taken[cell(x, y)]) {
        taken[cell(x, y)] = 1;
        return std::make_pair(x, y);
      }
    }
  };
  for (int i = 1; i <= num_wood; ++i) {
    const auto [x, y] = draw_free_cell();
    piles_.emplace(i, Pile{i, x, y, 1});
    pile_at_[cell(x, y)] = i;
  }
  termites_.reserve(num_termites);
  for (int i = 0; i < num_termites; ++i) {
    const auto [x, y] = draw_free_cell();
    termites_.push_back(Termite{x, y, false});
  }
}

TermiteWorld::TermiteWorld(std::vector<Pile> piles,
                           std::vector<Termite> termites, int width,
                           int height, RngStream rng)
    : width_(width), height_(height), rng_(rng), termites_(std::move(termites)) {
  if (width <= 0 || height <= 0)
    throw std::invalid_argument("world dimensions must be positive");
  pile_at_.assign(static_cast<size_t>(width) * height, 0);
  for (const Pile& p : piles) {
    if (p.id <= 0 || p.count < 1)
      throw std::invalid_argument("piles need positive ids and counts");
    if (p.x < 0 || p.x >= width || p.y < 0 || p.y >= height)
      throw std::invalid_argument("pile outside the grid");
    if (pile_at_[cell(p.x, p.y)] != 0 || piles_.count(p.id))
      throw std::invalid_argument("pile cells and ids must be unique");
    piles_.emplace(p.id, p);
    pile_at_[cell(p.x, p.y)] = p.id;
    num_wood_ += p.count;
  }
  for (Termite& t : termites_) {
    t.x = wrap_x(t.x);
    t.y = wrap_y(t.y);
    if (t.carrying) ++num_wood_;
  }
}

void TermiteWorld::apply_rules_at(int termite_index) {
  apply_rules(termites_.at(termite_index));
}

int TermiteWorld::torus_chebyshev(int x0, int y0, int x1, int y1) const {
  int dx = std::abs(x0 - x1);
  int dy = std::abs(y0 - y1);
  dx = std::min(dx, width_ - dx);
  dy = std::min(dy, height_ - dy);
  return std::max(dx, dy);
}

int TermiteWorld::adjacent_pile(int x, int y) const {
  int best = 0;
  int best_dist = 3;
  auto consider = [&](int cx, int cy, int dist) {
    const int id = pile_at_[cell(cx, cy)];
    if (id == 0) return;
    if (dist < best_dist || (dist == best_dist && (best == 0 || id < best))) {
      best = id;
      best_dist = dist;
    }
  };
  consider(x, y, 0);
  for (int k = 0; k < 8; ++k)
    consider(wrap_x(x + kDx[k]), wrap_y(y + kDy[k]), 1);
  return best;
}

void TermiteWorld::apply_rules(Termite& t) {
  const int target = adjacent_pile(t.x, t.y);
  if (target == 0) return;
  Pile& pile = piles_.at(target);

  if (!t.carrying) {
    pile.count -= 1;
    t.carrying = true;
    if (pile.count < 1) {  // emptied: the pile is gone forever
      pile_at_[cell(pile.x, pile.y)] = 0;
      piles_.erase(target);
    }
    return;
  }

  // Deposit goes next to the pile, on the free cell nearest the agent;
  // ties resolve by (y, x). No free cell means keep carrying.
  int bx = -1, by = -1, bdist = 0;
  for (int k = 0; k < 8; ++k) {
    const int cx = wrap_x(pile.x + kDx[k]);
    const int cy = wrap_y(pile.y + kDy[k]);
    if (pile_at_[cell(cx, cy)] != 0) continue;
    const int dist = torus_chebyshev(t.x, t.y, cx, cy);
    if (bx < 0 || dist < bdist ||
        (dist == bdist && (cy < by || (cy == by && cx < bx)))) {
      bx = cx;
      by = cy;
      bdist = dist;
    }
  }
  if (bx < 0) return;
  pile.count += 1;
  t.carrying = false;
}

void TermiteWorld::step() {
  for (Termite& t : termites_) {
    const int dir = static_cast<int>(rng_.uniform_int(0, 7));
    t.x = wrap_x(t.x + kDx[dir]);
    t.y = wrap_y(t.y + kDy[dir]);
    apply_rules(t);
  }
  ++steps_;
}

void TermiteWorld::run(int64_t steps) {
  for (int64_t i = 0; i < steps; ++i) step();
}

WorldMetrics TermiteWorld::metrics() const {
  WorldMetrics m;
  m.live_piles = static_cast<int>(piles_.size());
  for (const auto& [id, pile] : piles_) m.woods_in_piles += pile.count;
  for (const Termite& t : termites_)
    if (t.carrying) ++m.carried;
  m.gathered_percent =
      num_wood_ > 0 ? 100.0 * m.woods_in_piles / num_wood_ : 0.0;
  return m;
}

}  // namespace termite
