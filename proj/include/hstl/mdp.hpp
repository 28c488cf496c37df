#pragma once

// Environment boundary. The learner only ever samples transitions through
// step(); the transition model itself stays hidden behind this interface.

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "hstl/formula.hpp"

namespace hstl {

class Mdp {
 public:
  virtual ~Mdp() = default;

  // Names give state variables their order inside a State vector.
  virtual const std::vector<std::string>& state_variables() const = 0;
  virtual const std::vector<std::string>& action_set() const = 0;

  // Samples a successor of s under the given action.
  virtual State step(const State& s, int action, std::mt19937_64& rng) const = 0;

  // Draws a fresh start state for an episode.
  virtual State reset(std::mt19937_64& rng) const = 0;

  // Native reward signal. Task rewards come from formula robustness instead,
  // so the slot defaults to zero.
  virtual double reward(const State&, int, const State&) const { return 0.0; }

  // Finite enumeration of the state space; option construction scans it.
  virtual std::size_t state_count() const = 0;
  virtual std::size_t state_index(const State& s) const = 0;
  virtual State state_at(std::size_t index) const = 0;
};

}  // namespace hstl
