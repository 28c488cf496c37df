#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hstl/config.hpp"
#include "hstl/grid_world.hpp"
#include "hstl/learning.hpp"
#include "hstl/options.hpp"

namespace hstl {

struct EpisodeLog {
  double cumulative_reward = 0.0;   // sum of per-choice lumped rewards
  double eps_options = 0.0;         // schedule values when the episode ended
  std::vector<double> eps_flat;
  std::uint64_t steps = 0;          // primitive steps taken this episode
};

// Everything a run produces, alive in memory: the resolved task, the option
// machinery, the learned tables, and the per-episode log.
struct TrainResult {
  RunConfig config;
  GridWorld env;
  FormulaPtr formula;
  std::vector<FormulaPtr> predicates;
  std::vector<PrimitiveOption> primitives;
  std::vector<Option> options;
  LearningState learning;
  std::vector<EpisodeLog> episodes;
  std::vector<std::uint64_t> option_counts;

  std::vector<std::string> option_ids() const;
  std::vector<std::string> primitive_ids() const;
};

// Resolves a config into a ready-to-train result: expands aliases, parses
// the task formula, extracts predicates, places termination sets, builds the
// option set, and sizes fresh Q-tables. Runs no episodes.
TrainResult setup(const RunConfig& cfg);

// The full run: per episode, reset the environment and make the configured
// number of option choices, learning from every executed option. All
// randomness derives from cfg.seed through named substreams, so equal
// configs give bit-equal results.
TrainResult train(const RunConfig& cfg);

struct RolloutStep {
  std::uint64_t t = 0;
  State state;             // state the action was taken from
  std::string option_id;
  int action = 0;
};

struct RolloutResult {
  Trajectory traj;                 // total_steps + 1 states
  std::vector<RolloutStep> steps;
};

// Replays the learned tables for exactly total_steps primitive steps.
// Options are picked greedily (lowest index on ties) unless eps > 0; options
// that would terminate immediately in the current state are skipped so the
// replay always advances. deterministic_env swaps in a slip-free copy of the
// grid.
RolloutResult rollout(const TrainResult& tr, std::uint64_t seed, std::size_t total_steps,
                      double eps, bool deterministic_env);

struct WindowEvaluation {
  int window = 0;               // samples each evaluation consumes
  std::vector<double> values;   // robustness at every valid start time
  double positive_fraction = 0.0;
};

// Slides the formula body over the trajectory. A top-level always with lower
// bound 0 is peeled off (the window metric replaces it); the body must have
// bounded horizon.
WindowEvaluation evaluate_windows(const Trajectory& traj, const FormulaPtr& formula);

struct CompareResult {
  std::string label_a;
  std::string label_b;
  double trailing_mean_a = 0.0;
  double trailing_mean_b = 0.0;
  double relative_gain = 0.0;     // (b - a) / |a|
  std::vector<double> curve_a;    // per-episode cumulative rewards
  std::vector<double> curve_b;
};

// Trains the same task twice with different option-set modes (in parallel)
// and compares mean cumulative reward over the trailing episodes. Stream
// labels depend only on the mode, so comparing a mode against itself yields
// exactly zero gain.
CompareResult compare_option_sets(const RunConfig& base, OptionSetMode mode_a,
                                  OptionSetMode mode_b, int trailing_episodes);

}  // namespace hstl
