#include "hstl/options.hpp"

#include <algorithm>
#include <numeric>

#include "hstl/errors.hpp"
#include "hstl/robustness.hpp"

namespace hstl {

std::vector<PrimitiveOption> build_primitive_options(
    const std::vector<FormulaPtr>& predicates, const Mdp& env) {
  if (predicates.empty())
    throw OptionError("no predicates to build options from");
  if (predicates.size() > 26)
    throw OptionError("at most 26 predicates are supported (letter ids)");
  std::size_t n_states = env.state_count();
  if (n_states == 0) throw OptionError("state space is empty or not enumerable");

  std::vector<PrimitiveOption> out;
  out.reserve(predicates.size());
  for (std::size_t j = 0; j < predicates.size(); ++j) {
    const FormulaPtr& psi = predicates[j];
    if (!psi || !is_temporal_free(*psi))
      throw OptionError("option target must be a temporal-operator-free formula");

    PrimitiveOption opt;
    opt.id = std::string(1, static_cast<char>('A' + j));
    opt.predicate = psi;
    opt.initiation.assign(n_states, 1);
    opt.termination.assign(n_states, 0);

    Rational best = state_robustness(env.state_at(0), *psi);
    for (std::size_t i = 1; i < n_states; ++i)
      best = std::max(best, state_robustness(env.state_at(i), *psi));
    for (std::size_t i = 0; i < n_states; ++i) {
      if (state_robustness(env.state_at(i), *psi) == best) {
        opt.termination[i] = 1;
        opt.termination_states.push_back(i);
      }
    }
    opt.max_robustness = best;
    out.push_back(std::move(opt));
  }
  return out;
}

namespace {

void check_chaining(const std::vector<PrimitiveOption>& primitives,
                    const std::vector<std::size_t>& sequence, const std::string& id) {
  for (std::size_t i = 0; i + 1 < sequence.size(); ++i) {
    const PrimitiveOption& from = primitives[sequence[i]];
    const PrimitiveOption& to = primitives[sequence[i + 1]];
    for (std::size_t s : from.termination_states)
      if (!to.initiation[s])
        throw OptionError("option '" + id + "': termination of '" + from.id +
                          "' is not contained in the initiation of '" + to.id + "'");
  }
}

Option make_option(const std::vector<PrimitiveOption>& primitives,
                   std::vector<std::size_t> sequence) {
  Option o;
  for (std::size_t j : sequence) o.id += primitives[j].id;
  o.sequence = std::move(sequence);
  check_chaining(primitives, o.sequence, o.id);
  return o;
}

void combinations(std::size_t n, std::size_t len, std::vector<std::size_t>& pick,
                  std::size_t from, const std::vector<PrimitiveOption>& primitives,
                  std::vector<Option>& out) {
  if (pick.size() == len) {
    out.push_back(make_option(primitives, pick));
    return;
  }
  for (std::size_t v = from; v < n; ++v) {
    pick.push_back(v);
    combinations(n, len, pick, v + 1, primitives, out);
    pick.pop_back();
  }
}

void permutations(std::size_t n, std::size_t len, std::vector<std::size_t>& pick,
                  std::vector<char>& used, const std::vector<PrimitiveOption>& primitives,
                  std::vector<Option>& out) {
  if (pick.size() == len) {
    out.push_back(make_option(primitives, pick));
    return;
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (used[v]) continue;
    used[v] = 1;
    pick.push_back(v);
    permutations(n, len, pick, used, primitives, out);
    pick.pop_back();
    used[v] = 0;
  }
}

}  // namespace

std::vector<Option> build_combined_options(const std::vector<PrimitiveOption>& primitives,
                                           const OptionSetSpec& spec) {
  if (primitives.empty()) throw OptionError("no primitive options");
  std::size_t n = primitives.size();
  std::size_t max_len = spec.max_sequence_length <= 0
                            ? n
                            : std::min<std::size_t>(spec.max_sequence_length, n);
  if (max_len == 0) throw OptionError("max sequence length must allow singletons");

  std::vector<Option> out;
  switch (spec.mode) {
    case OptionSetMode::SubsetsInOrder: {
      std::vector<std::size_t> pick;
      for (std::size_t len = 1; len <= max_len; ++len)
        combinations(n, len, pick, 0, primitives, out);
      break;
    }
    case OptionSetMode::AllPermutations: {
      std::vector<std::size_t> pick;
      std::vector<char> used(n, 0);
      for (std::size_t len = 1; len <= max_len; ++len)
        permutations(n, len, pick, used, primitives, out);
      break;
    }
    case OptionSetMode::ExplicitList: {
      if (spec.explicit_ids.empty()) throw OptionError("explicit option list is empty");
      for (const std::string& id : spec.explicit_ids) {
        if (id.empty()) throw OptionError("empty option id in explicit list");
        std::vector<std::size_t> seq;
        for (char c : id) {
          std::size_t j = static_cast<std::size_t>(c - 'A');
          if (c < 'A' || j >= n)
            throw OptionError("option id '" + id + "' names unknown primitive '" +
                              std::string(1, c) + "'");
          seq.push_back(j);
        }
        out.push_back(make_option(primitives, std::move(seq)));
      }
      break;
    }
  }

  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = i + 1; j < out.size(); ++j)
      if (out[i].id == out[j].id)
        throw OptionError("duplicate option id '" + out[i].id + "'");

  // The option set must offer every primitive on its own.
  for (const PrimitiveOption& p : primitives) {
    bool found = false;
    for (const Option& o : out)
      if (o.id == p.id) {
        found = true;
        break;
      }
    if (!found)
      throw OptionError("option set is missing primitive option '" + p.id + "'");
  }
  return out;
}

OptionExecution execute_option(const Option& option,
                               const std::vector<PrimitiveOption>& primitives,
                               const State& start, const Mdp& env,
                               FlatActionPolicy& policy, std::mt19937_64& env_rng,
                               int step_cap) {
  if (option.sequence.empty()) throw OptionError("option has no constituents");
  for (std::size_t j : option.sequence)
    if (j >= primitives.size()) throw OptionError("option references unknown primitive");
  if (step_cap < 1) throw std::invalid_argument("step cap must be positive");

  OptionExecution exec;
  State current = start;
  std::size_t current_idx = env.state_index(current);
  if (!primitives[option.sequence.front()].initiation[current_idx])
    throw OptionError("start state is outside the initiation set of option '" +
                      option.id + "'");

  exec.traj.states.push_back(current);
  exec.state_indices.push_back(current_idx);

  int steps = 0;
  for (std::size_t j : option.sequence) {
    const PrimitiveOption& prim = primitives[j];
    while (!prim.termination[current_idx]) {
      if (steps == step_cap) {
        exec.terminated_normally = false;
        return exec;
      }
      int a = policy.choose(j, current_idx);
      current = env.step(current, a, env_rng);
      current_idx = env.state_index(current);
      exec.actions.push_back(a);
      exec.constituent.push_back(j);
      exec.traj.states.push_back(current);
      exec.state_indices.push_back(current_idx);
      ++steps;
    }
  }
  return exec;
}

}  // namespace hstl
