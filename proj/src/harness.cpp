#include "hstl/harness.hpp"

#include <cmath>
#include <future>
#include <map>
#include <stdexcept>

#include "hstl/errors.hpp"
#include "hstl/parser.hpp"
#include "hstl/rng.hpp"
#include "hstl/robustness.hpp"

namespace hstl {

namespace {

LearningParams make_params(const LearningConfig& lc, std::size_t n) {
  LearningParams p;
  p.flat_alpha = broadcast_per_predicate(lc.flat_alpha, n, "learning.flat_alpha");
  p.flat_gamma = broadcast_per_predicate(lc.flat_gamma, n, "learning.flat_gamma");
  const std::vector<double> eps0 =
      broadcast_per_predicate(lc.flat_epsilon0, n, "learning.flat_epsilon0");
  const std::vector<double> decay =
      broadcast_per_predicate(lc.flat_epsilon_decay, n, "learning.flat_epsilon_decay");
  p.flat_schedules.reserve(n);
  for (std::size_t j = 0; j < n; ++j)
    p.flat_schedules.emplace_back(eps0[j], decay[j], lc.epsilon_floor,
                                  TickSource::PrimitiveSteps);
  p.option_alpha = lc.option_alpha;
  p.option_gamma = lc.option_gamma;
  p.option_schedule = EpsilonSchedule(lc.option_epsilon0, lc.option_epsilon_decay,
                                      lc.epsilon_floor, TickSource::OptionChoices);
  p.q_init = lc.q_init;
  p.exponent = lc.discount_exponent == "total" ? DiscountExponent::TotalSteps
                                               : DiscountExponent::RemainingSteps;
  return p;
}

// All stream labels hang off the option-set mode, so two runs differing only
// in mode draw independent streams while reruns of one mode replay exactly.
std::string stream_base(const RunConfig& cfg) {
  return "train:" + option_mode_name(cfg.options.mode);
}

}  // namespace

std::vector<std::string> TrainResult::option_ids() const {
  std::vector<std::string> out;
  out.reserve(options.size());
  for (const Option& o : options) out.push_back(o.id);
  return out;
}

std::vector<std::string> TrainResult::primitive_ids() const {
  std::vector<std::string> out;
  out.reserve(primitives.size());
  for (const PrimitiveOption& p : primitives) out.push_back(p.id);
  return out;
}

TrainResult setup(const RunConfig& cfg) {
  GridWorld env(cfg.env.width, cfg.env.height, cfg.env.intent_prob, cfg.env.slip_prob);
  const std::map<std::string, std::string> aliases(cfg.aliases.begin(), cfg.aliases.end());
  const std::string expanded = expand_aliases(cfg.formula, aliases);
  FormulaPtr formula = parse_stl(expanded, env.state_variables());
  std::vector<FormulaPtr> predicates = extract_predicates(formula);
  std::vector<PrimitiveOption> primitives = build_primitive_options(predicates, env);
  std::vector<Option> options = build_combined_options(primitives, cfg.options);
  LearningState learning(env.state_count(), env.action_set().size(), options.size(),
                         make_params(cfg.learning, predicates.size()));
  TrainResult tr{cfg,
                 std::move(env),
                 std::move(formula),
                 std::move(predicates),
                 std::move(primitives),
                 std::move(options),
                 std::move(learning),
                 {},
                 {}};
  tr.option_counts.assign(tr.options.size(), 0);
  return tr;
}

TrainResult train(const RunConfig& cfg) {
  TrainResult tr = setup(cfg);
  const std::string base = stream_base(cfg);
  std::mt19937_64 reset_rng = make_stream(cfg.seed, base + ":reset");
  std::mt19937_64 env_rng = make_stream(cfg.seed, base + ":env");
  std::mt19937_64 flat_rng = make_stream(cfg.seed, base + ":flat");
  std::mt19937_64 option_rng = make_stream(cfg.seed, base + ":options");
  FlatExplorer policy(tr.learning, flat_rng);
  const std::size_t n = tr.predicates.size();
  tr.episodes.reserve(cfg.episodes);

  for (int ep = 0; ep < cfg.episodes; ++ep) {
    State s = tr.env.reset(reset_rng);
    EpisodeLog log;
    const std::uint64_t steps_before = tr.learning.primitive_steps;
    for (int c = 0; c < cfg.option_choices_per_episode; ++c) {
      const std::size_t s_idx = tr.env.state_index(s);
      std::vector<std::size_t> candidates;
      candidates.reserve(tr.options.size());
      for (std::size_t o = 0; o < tr.options.size(); ++o)
        if (tr.primitives[tr.options[o].sequence.front()].initiation[s_idx])
          candidates.push_back(o);
      const std::size_t pick = tr.learning.select_option(s_idx, candidates, option_rng);
      const OptionExecution exec = execute_option(tr.options[pick], tr.primitives, s,
                                                  tr.env, policy, env_rng, cfg.step_cap);
      double reward;
      if (!exec.actions.empty()) {
        reward = hstl_update(tr.formula, tr.predicates, pick, exec.traj,
                             exec.state_indices, exec.actions, tr.learning);
      } else {
        // The option was already terminated where it started; nothing to
        // learn from, but the choice still counts and earns its reward.
        reward = to_double(lumped_reward(exec.traj, tr.formula));
      }
      log.cumulative_reward += reward;
      tr.option_counts[pick] += 1;
      s = exec.traj.states.back();
    }
    log.eps_options = tr.learning.option_epsilon();
    log.eps_flat.resize(n);
    for (std::size_t j = 0; j < n; ++j) log.eps_flat[j] = tr.learning.flat_epsilon(j);
    log.steps = tr.learning.primitive_steps - steps_before;
    tr.episodes.push_back(std::move(log));
  }
  return tr;
}

RolloutResult rollout(const TrainResult& tr, std::uint64_t seed, std::size_t total_steps,
                      double eps, bool deterministic_env) {
  if (total_steps == 0) throw std::invalid_argument("rollout needs at least one step");
  const GridWorld env =
      deterministic_env
          ? GridWorld(tr.config.env.width, tr.config.env.height, 1.0, 0.0)
          : tr.env;
  std::mt19937_64 reset_rng = make_stream(seed, "rollout:reset");
  std::mt19937_64 env_rng = make_stream(seed, "rollout:env");
  std::mt19937_64 explore_rng = make_stream(seed, "rollout:explore");
  GreedyFlatPolicy policy(tr.learning.flat_q);

  RolloutResult out;
  State s = env.reset(reset_rng);
  out.traj.states.push_back(s);
  while (out.steps.size() < total_steps) {
    const std::size_t s_idx = env.state_index(s);
    // Skip options that would consume zero steps here (every constituent
    // already terminated); with tied fresh tables a greedy pick could
    // otherwise spin in place forever.
    std::vector<std::size_t> candidates;
    for (std::size_t o = 0; o < tr.options.size(); ++o) {
      const Option& opt = tr.options[o];
      if (!tr.primitives[opt.sequence.front()].initiation[s_idx]) continue;
      bool zero_step = true;
      for (std::size_t j : opt.sequence)
        if (!tr.primitives[j].termination[s_idx]) {
          zero_step = false;
          break;
        }
      if (!zero_step) candidates.push_back(o);
    }
    if (candidates.empty())
      throw OptionError("every available option terminates immediately; replay cannot advance");
    std::size_t pick;
    if (eps > 0.0) {
      pick = epsilon_greedy(tr.learning.option_q, s_idx, candidates, eps, explore_rng);
    } else {
      pick = candidates[0];
      for (std::size_t c : candidates)
        if (tr.learning.option_q.at(s_idx, c) > tr.learning.option_q.at(s_idx, pick)) pick = c;
    }
    const std::size_t remaining = total_steps - out.steps.size();
    const int cap = static_cast<int>(
        std::min<std::size_t>(remaining, static_cast<std::size_t>(tr.config.step_cap)));
    const OptionExecution exec =
        execute_option(tr.options[pick], tr.primitives, s, env, policy, env_rng, cap);
    const std::uint64_t t0 = out.steps.size();
    for (std::size_t i = 0; i < exec.actions.size(); ++i)
      out.steps.push_back(RolloutStep{t0 + i, exec.traj[static_cast<int>(i)],
                                      tr.options[pick].id, exec.actions[i]});
    for (std::size_t i = 1; i < exec.traj.states.size(); ++i)
      out.traj.states.push_back(exec.traj.states[i]);
    s = out.traj.states.back();
  }
  return out;
}

WindowEvaluation evaluate_windows(const Trajectory& traj, const FormulaPtr& formula) {
  if (!formula) throw std::invalid_argument("evaluate_windows needs a formula");
  FormulaPtr body = formula;
  if (formula->kind() == NodeKind::Always && formula->window().lo == 0)
    body = formula->left();
  const std::optional<int> h = horizon(*body);
  if (!h)
    throw EvalError("the formula body has an unbounded horizon; window evaluation needs a bounded one");
  const int window = *h + 1;
  const int len = static_cast<int>(traj.size());
  if (len < window) throw EvalError("trajectory is shorter than one evaluation window");

  WindowEvaluation out;
  out.window = window;
  out.values.reserve(static_cast<std::size_t>(len - window + 1));
  std::size_t positive = 0;
  for (int t = 0; t + window <= len; ++t) {
    const double v = to_double(robustness(traj, *body, t, t + window));
    out.values.push_back(v);
    if (v > 0.0) ++positive;
  }
  out.positive_fraction = static_cast<double>(positive) / static_cast<double>(out.values.size());
  return out;
}

CompareResult compare_option_sets(const RunConfig& base, OptionSetMode mode_a,
                                  OptionSetMode mode_b, int trailing_episodes) {
  if (trailing_episodes < 1)
    throw std::invalid_argument("trailing episode window must be positive");
  RunConfig ca = base;
  ca.options.mode = mode_a;
  if (mode_a != OptionSetMode::ExplicitList) ca.options.explicit_ids.clear();
  RunConfig cb = base;
  cb.options.mode = mode_b;
  if (mode_b != OptionSetMode::ExplicitList) cb.options.explicit_ids.clear();

  std::future<TrainResult> fb = std::async(std::launch::async, [&cb] { return train(cb); });
  const TrainResult ra = train(ca);
  const TrainResult rb = fb.get();

  CompareResult out;
  out.label_a = option_mode_name(mode_a);
  out.label_b = option_mode_name(mode_b);
  out.curve_a.reserve(ra.episodes.size());
  for (const EpisodeLog& log : ra.episodes) out.curve_a.push_back(log.cumulative_reward);
  out.curve_b.reserve(rb.episodes.size());
  for (const EpisodeLog& log : rb.episodes) out.curve_b.push_back(log.cumulative_reward);

  const auto trailing_mean = [trailing_episodes](const std::vector<double>& curve) {
    const std::size_t w =
        std::min(curve.size(), static_cast<std::size_t>(trailing_episodes));
    double sum = 0.0;
    for (std::size_t i = curve.size() - w; i < curve.size(); ++i) sum += curve[i];
    return sum / static_cast<double>(w);
  };
  out.trailing_mean_a = trailing_mean(out.curve_a);
  out.trailing_mean_b = trailing_mean(out.curve_b);
  const double denom = std::max(std::abs(out.trailing_mean_a), 1e-12);
  out.relative_gain = (out.trailing_mean_b - out.trailing_mean_a) / denom;
  return out;
}

}  // namespace hstl
