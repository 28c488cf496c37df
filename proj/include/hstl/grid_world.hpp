#pragma once

#include "hstl/mdp.hpp"

namespace hstl {

// Bounded grid with slippery moves. A commanded action is followed with
// probability intent_prob; otherwise one of the other three directions is
// taken, each with slip_prob. Moves that would leave the grid keep the
// agent in place. Cells are (x, y) with the origin at the bottom-left.
class GridWorld final : public Mdp {
 public:
  GridWorld(int width, int height, double intent_prob, double slip_prob);

  const std::vector<std::string>& state_variables() const override;
  const std::vector<std::string>& action_set() const override;

  State step(const State& s, int action, std::mt19937_64& rng) const override;
  State reset(std::mt19937_64& rng) const override;

  std::size_t state_count() const override;
  std::size_t state_index(const State& s) const override;
  State state_at(std::size_t index) const override;

  int width() const { return width_; }
  int height() const { return height_; }

  enum Action { Up = 0, Down = 1, Left = 2, Right = 3 };

 private:
  void check_state(const State& s) const;

  int width_;
  int height_;
  double intent_prob_;
  double slip_prob_;
};

}  // namespace hstl
