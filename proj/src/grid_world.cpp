#include "hstl/grid_world.hpp"

#include <cmath>
#include <stdexcept>

#include "hstl/errors.hpp"
#include "hstl/rng.hpp"

namespace hstl {

namespace {

const std::vector<std::string> kVariables = {"x", "y"};
const std::vector<std::string> kActions = {"Up", "Down", "Left", "Right"};

constexpr int kDx[4] = {0, 0, -1, 1};
constexpr int kDy[4] = {1, -1, 0, 0};

}  // namespace

GridWorld::GridWorld(int width, int height, double intent_prob, double slip_prob)
    : width_(width), height_(height), intent_prob_(intent_prob), slip_prob_(slip_prob) {
  if (width < 1 || height < 1)
    throw std::invalid_argument("grid dimensions must be positive");
  if (intent_prob < 0.0 || intent_prob > 1.0 || slip_prob < 0.0 || slip_prob > 1.0)
    throw std::invalid_argument("transition probabilities must lie in [0, 1]");
  if (std::abs(intent_prob + 3.0 * slip_prob - 1.0) > 1e-9)
    throw std::invalid_argument("transition probabilities must satisfy intent + 3*slip = 1");
}

const std::vector<std::string>& GridWorld::state_variables() const { return kVariables; }
const std::vector<std::string>& GridWorld::action_set() const { return kActions; }

void GridWorld::check_state(const State& s) const {
  if (s.size() != 2 || s[0] < 0 || s[0] >= width_ || s[1] < 0 || s[1] >= height_)
    throw EvalError("state is outside the grid");
}

State GridWorld::step(const State& s, int action, std::mt19937_64& rng) const {
  check_state(s);
  if (action < 0 || action > 3) throw std::invalid_argument("unknown action");

  // One draw decides the realized direction: [0, intent) keeps the command,
  // the rest splits evenly across the other three directions.
  int realized = action;
  double u = uniform_real01(rng);
  if (u >= intent_prob_) {
    int k = static_cast<int>((u - intent_prob_) / slip_prob_);
    if (k > 2) k = 2;
    for (int a = 0; a < 4; ++a) {
      if (a == action) continue;
      if (k == 0) {
        realized = a;
        break;
      }
      --k;
    }
  }

  int nx = s[0] + kDx[realized];
  int ny = s[1] + kDy[realized];
  if (nx < 0 || nx >= width_ || ny < 0 || ny >= height_) return s;
  return State{nx, ny};
}

State GridWorld::reset(std::mt19937_64& rng) const {
  return state_at(uniform_index(rng, state_count()));
}

std::size_t GridWorld::state_count() const {
  return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
}

std::size_t GridWorld::state_index(const State& s) const {
  check_state(s);
  return static_cast<std::size_t>(s[1]) * width_ + s[0];
}

State GridWorld::state_at(std::size_t index) const {
  if (index >= state_count()) throw std::out_of_range("state index out of range");
  return State{static_cast<int>(index % width_), static_cast<int>(index / width_)};
}

}  // namespace hstl
