#include "doctest.h"
#include "hstl/errors.hpp"
#include "hstl/grid_world.hpp"
#include "hstl/rng.hpp"

using namespace hstl;

TEST_CASE("construction validates dimensions and the probability split") {
  CHECK_THROWS_AS(GridWorld(0, 5, 0.7, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(GridWorld(5, 5, 0.8, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(GridWorld(5, 5, -0.2, 0.4), std::invalid_argument);
  CHECK_NOTHROW(GridWorld(5, 5, 1.0, 0.0));
  CHECK_NOTHROW(GridWorld(5, 5, 0.25, 0.25));
}

TEST_CASE("state indexing is row-major and round-trips") {
  const GridWorld env(15, 15, 0.7, 0.1);
  CHECK(env.state_count() == 225);
  CHECK(env.state_variables() == std::vector<std::string>{"x", "y"});
  CHECK(env.action_set() == std::vector<std::string>{"Up", "Down", "Left", "Right"});
  for (std::size_t s = 0; s < env.state_count(); ++s)
    CHECK(env.state_index(env.state_at(s)) == s);
  CHECK(env.state_index(State{3, 2}) == 2 * 15 + 3);
  CHECK_THROWS_AS(env.state_index(State{15, 0}), EvalError);
  CHECK_THROWS_AS(env.state_index(State{0}), EvalError);
}

TEST_CASE("a slip-free grid moves exactly as commanded and edges clamp") {
  const GridWorld env(4, 3, 1.0, 0.0);
  std::mt19937_64 g = make_stream(5, "det-env");
  CHECK(env.step(State{1, 1}, GridWorld::Up, g) == State{1, 2});
  CHECK(env.step(State{1, 1}, GridWorld::Down, g) == State{1, 0});
  CHECK(env.step(State{1, 1}, GridWorld::Left, g) == State{0, 1});
  CHECK(env.step(State{1, 1}, GridWorld::Right, g) == State{2, 1});
  CHECK(env.step(State{0, 0}, GridWorld::Left, g) == State{0, 0});
  CHECK(env.step(State{0, 0}, GridWorld::Down, g) == State{0, 0});
  CHECK(env.step(State{3, 2}, GridWorld::Right, g) == State{3, 2});
  CHECK(env.step(State{3, 2}, GridWorld::Up, g) == State{3, 2});
}

TEST_CASE("realized moves hit the commanded direction at the intended rate") {
  const GridWorld env(15, 15, 0.7, 0.1);
  std::mt19937_64 g = make_stream(6, "freq-env");
  const State from{7, 7};
  int counts[4] = {0, 0, 0, 0};
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const State to = env.step(from, GridWorld::Up, g);
    if (to == State{7, 8}) ++counts[0];
    else if (to == State{7, 6}) ++counts[1];
    else if (to == State{6, 7}) ++counts[2];
    else if (to == State{8, 7}) ++counts[3];
    else FAIL("step left the four-neighborhood");
  }
  CHECK(std::abs(counts[0] / double(n) - 0.7) < 0.01);
  CHECK(std::abs(counts[1] / double(n) - 0.1) < 0.01);
  CHECK(std::abs(counts[2] / double(n) - 0.1) < 0.01);
  CHECK(std::abs(counts[3] / double(n) - 0.1) < 0.01);
}

TEST_CASE("reset draws states uniformly") {
  const GridWorld env(15, 15, 0.7, 0.1);
  std::mt19937_64 g = make_stream(7, "reset-env");
  std::vector<int> counts(env.state_count(), 0);
  const int per_state = 400;
  const int n = static_cast<int>(env.state_count()) * per_state;
  for (int i = 0; i < n; ++i) ++counts[env.state_index(env.reset(g))];
  for (int c : counts) {
    CHECK(c > per_state / 2);
    CHECK(c < per_state * 2);
  }
}

TEST_CASE("identical seeds replay identical step sequences") {
  const GridWorld env(15, 15, 0.7, 0.1);
  std::mt19937_64 g1 = make_stream(99, "env");
  std::mt19937_64 g2 = make_stream(99, "env");
  State a = env.reset(g1);
  State b = env.reset(g2);
  CHECK(a == b);
  for (int i = 0; i < 1000; ++i) {
    const int action = i % 4;
    a = env.step(a, action, g1);
    b = env.step(b, action, g2);
    CHECK(a == b);
  }
  std::mt19937_64 g3 = make_stream(99, "other-label");
  std::mt19937_64 g4 = make_stream(99, "env");
  bool same = true;
  for (int i = 0; i < 8 && same; ++i) same = (g3() == g4());
  CHECK(!same);
}

TEST_CASE("stepping rejects malformed states and actions") {
  const GridWorld env(4, 3, 1.0, 0.0);
  std::mt19937_64 g = make_stream(8, "bad-env");
  CHECK_THROWS_AS(env.step(State{4, 0}, GridWorld::Up, g), EvalError);
  CHECK_THROWS_AS(env.step(State{0}, GridWorld::Up, g), EvalError);
  CHECK_THROWS_AS(env.step(State{0, 0}, 4, g), std::invalid_argument);
  CHECK_THROWS_AS(env.step(State{0, 0}, -1, g), std::invalid_argument);
}
