#pragma once

#include <random>
#include <string>
#include <vector>

#include "hstl/formula.hpp"
#include "hstl/mdp.hpp"

namespace hstl {

// Temporally extended action targeting one extracted predicate. The flat
// policy that steers it lives in the learning state; here we keep the goal
// predicate plus initiation/termination described as masks over the
// enumerated state space. Termination is the set of states of maximal
// predicate robustness (ties included), initiation defaults to everywhere.
struct PrimitiveOption {
  std::string id;
  FormulaPtr predicate;
  std::vector<char> initiation;
  std::vector<char> termination;
  std::vector<std::size_t> termination_states;  // sorted
  Rational max_robustness{0};
};

// Entry of the option set: primitives chained back to back. A single-element
// sequence is a primitive option as the policy over options sees it.
// Initiation is the first constituent's, termination the last's.
struct Option {
  std::string id;  // constituent ids concatenated in execution order
  std::vector<std::size_t> sequence;
};

enum class OptionSetMode { SubsetsInOrder, AllPermutations, ExplicitList };

struct OptionSetSpec {
  OptionSetMode mode = OptionSetMode::SubsetsInOrder;
  // Longest allowed chain; <= 0 means the number of primitives.
  int max_sequence_length = 0;
  // For ExplicitList: id strings like "A", "BC", "CAB".
  std::vector<std::string> explicit_ids;
};

// Enumerates the whole state space to place each predicate's termination
// set. Primitives are lettered "A", "B", ... in predicate order.
std::vector<PrimitiveOption> build_primitive_options(
    const std::vector<FormulaPtr>& predicates, const Mdp& env);

// Expands the requested mode into the option set, in order of (length,
// lexicographic sequence). Every consecutive pair must chain: the termination
// set of one constituent has to sit inside the initiation set of the next.
// The generated modes always include every primitive as a singleton; an
// explicit list contains exactly what it names.
std::vector<Option> build_combined_options(
    const std::vector<PrimitiveOption>& primitives, const OptionSetSpec& spec);

// Supplies flat-policy actions during option execution; the learning state
// implements this with epsilon-greedy lookups (and owns the exploration
// stream), a plain greedy table serves for evaluation replay.
class FlatActionPolicy {
 public:
  virtual ~FlatActionPolicy() = default;
  virtual int choose(std::size_t primitive, std::size_t state_index) = 0;
};

struct OptionExecution {
  Trajectory traj;                          // k+1 states including the start
  std::vector<std::size_t> state_indices;   // parallel to traj.states
  std::vector<int> actions;                 // k commanded actions
  std::vector<std::size_t> constituent;     // per action: primitive index
  bool terminated_normally = true;
};

// Runs the option from start to termination (or until step_cap primitive
// steps, flagged via terminated_normally = false). A constituent already at
// termination contributes zero steps. Throws OptionError when start lies
// outside the option's initiation set.
OptionExecution execute_option(const Option& option,
                               const std::vector<PrimitiveOption>& primitives,
                               const State& start, const Mdp& env,
                               FlatActionPolicy& policy, std::mt19937_64& env_rng,
                               int step_cap);

}  // namespace hstl
