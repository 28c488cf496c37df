#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "hstl/formula.hpp"
#include "hstl/options.hpp"
#include "hstl/qtable.hpp"
#include "hstl/schedule.hpp"

namespace hstl {

// How the option-level discount exponent is chosen inside hstl_update:
// the steps remaining from the updated time to termination (default), or
// the option's total duration for every suffix.
enum class DiscountExponent { RemainingSteps, TotalSteps };

struct LearningParams {
  std::vector<double> flat_alpha;
  std::vector<double> flat_gamma;
  std::vector<EpsilonSchedule> flat_schedules;
  double option_alpha = 0.5;
  double option_gamma = 0.9;
  EpsilonSchedule option_schedule;
  double q_init = 0.0;
  DiscountExponent exponent = DiscountExponent::RemainingSteps;
};

// Everything the learner accumulates: one flat Q-table per extracted
// predicate, the Q-table over the option set, and the two global tick
// counters the epsilon schedules read. Flat schedules advance once per
// primitive step anywhere in the run; the option schedule advances once per
// option choice.
class LearningState {
 public:
  LearningState(std::size_t n_states, std::size_t n_actions, std::size_t n_options,
                LearningParams params);

  std::vector<QTable> flat_q;
  QTable option_q;
  LearningParams params;
  std::uint64_t primitive_steps = 0;
  std::uint64_t option_choices = 0;

  std::size_t n_predicates() const { return flat_q.size(); }
  double flat_epsilon(std::size_t j) const;
  double option_epsilon() const;

  // Epsilon-greedy pick among the options whose initiation contains the
  // state; advances the option tick counter.
  std::size_t select_option(std::size_t state, const std::vector<std::size_t>& candidates,
                            std::mt19937_64& rng);

  const std::vector<std::size_t>& action_candidates() const { return all_actions_; }

 private:
  std::vector<std::size_t> all_actions_;
};

// Flat-policy view used while executing options during training: per-step
// epsilon-greedy on the constituent's table, advancing the primitive tick.
class FlatExplorer final : public FlatActionPolicy {
 public:
  FlatExplorer(LearningState& state, std::mt19937_64& explore_rng)
      : state_(state), rng_(explore_rng) {}
  int choose(std::size_t primitive, std::size_t state_index) override;

 private:
  LearningState& state_;
  std::mt19937_64& rng_;
};

// Greedy replay view for evaluation rollouts: lowest-index argmax, no
// exploration, no tick.
class GreedyFlatPolicy final : public FlatActionPolicy {
 public:
  explicit GreedyFlatPolicy(const std::vector<QTable>& tables) : tables_(tables) {}
  int choose(std::size_t primitive, std::size_t state_index) override {
    return static_cast<int>(tables_[primitive].greedy_action(state_index));
  }

 private:
  const std::vector<QTable>& tables_;
};

// With probability eps a uniform candidate, otherwise a maximizer of
// q(s, .) over the candidates with uniform tie-breaking.
std::size_t epsilon_greedy(const QTable& q, std::size_t s,
                           const std::vector<std::size_t>& candidates, double eps,
                           std::mt19937_64& rng);

// Deterministic greedy action per state (lowest-index tie-break).
std::vector<std::size_t> greedy_policy(const QTable& q);

// One-step temporal-difference update:
//   q(s,a) += alpha * (r + gamma * max_a' q(s2,a') - q(s,a))
void flat_q_update(QTable& q, std::size_t s, std::size_t a, std::size_t s2, double r,
                   double alpha, double gamma);

// Semi-Markov update for an option observed to run k more steps:
//   q(s,o) += alpha * (r + gamma^k * max_o' q(s_end,o') - q(s,o))
void option_q_update(QTable& q, std::size_t s, std::size_t o, std::size_t s_end,
                     double r, int k, double alpha, double gamma);

// Robustness of the trajectory against the formula truncated to its length,
// evaluated at the first sample.
Rational lumped_reward(const Trajectory& traj, const FormulaPtr& phi);

// lumped_reward of every suffix [i, end); entry i corresponds to suffix i.
// Equivalent to calling lumped_reward per suffix, computed in one pass for
// the common persistent-task shape.
std::vector<Rational> suffix_lumped_rewards(const Trajectory& traj, const FormulaPtr& phi);

// Applies one executed option to the learning state: every flat table gets
// the one-step update with its own predicate robustness reward on each
// transition, and the option table gets one semi-Markov update per suffix of
// the trajectory (each suffix is a valid experience for the same option),
// bootstrapping at the final state. Returns the full-trajectory lumped
// reward, i.e. the suffix-0 entry.
double hstl_update(const FormulaPtr& phi, const std::vector<FormulaPtr>& predicates,
                   std::size_t option_index, const Trajectory& traj,
                   const std::vector<std::size_t>& state_indices,
                   const std::vector<int>& actions, LearningState& state);

}  // namespace hstl
