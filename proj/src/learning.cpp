#include "hstl/learning.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "hstl/errors.hpp"
#include "hstl/rng.hpp"
#include "hstl/robustness.hpp"

namespace hstl {

namespace {

double pow_int(double base, int exp) {
  double acc = 1.0;
  double term = base;
  int e = exp;
  while (e > 0) {
    if (e & 1) acc *= term;
    term *= term;
    e >>= 1;
  }
  return acc;
}

void check_rates(double alpha, double gamma, const char* who) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::invalid_argument(std::string(who) + " learning rate must be in (0, 1]");
  if (gamma < 0.0 || gamma > 1.0)
    throw std::invalid_argument(std::string(who) + " discount must be in [0, 1]");
}

}  // namespace

LearningState::LearningState(std::size_t n_states, std::size_t n_actions,
                             std::size_t n_options, LearningParams p)
    : flat_q(), option_q(n_states, n_options, p.q_init), params(std::move(p)) {
  const std::size_t n = params.flat_alpha.size();
  if (n == 0) throw std::invalid_argument("at least one flat learner is required");
  if (params.flat_gamma.size() != n || params.flat_schedules.size() != n)
    throw std::invalid_argument("flat learner parameter lists must have equal length");
  for (std::size_t j = 0; j < n; ++j) check_rates(params.flat_alpha[j], params.flat_gamma[j], "flat");
  check_rates(params.option_alpha, params.option_gamma, "option");
  flat_q.reserve(n);
  for (std::size_t j = 0; j < n; ++j) flat_q.emplace_back(n_states, n_actions, params.q_init);
  all_actions_.resize(n_actions);
  for (std::size_t a = 0; a < n_actions; ++a) all_actions_[a] = a;
}

double LearningState::flat_epsilon(std::size_t j) const {
  return params.flat_schedules.at(j).at(primitive_steps);
}

double LearningState::option_epsilon() const {
  return params.option_schedule.at(option_choices);
}

std::size_t LearningState::select_option(std::size_t state,
                                         const std::vector<std::size_t>& candidates,
                                         std::mt19937_64& rng) {
  if (candidates.empty()) throw OptionError("no option is available in the current state");
  const double eps = option_epsilon();
  const std::size_t pick = epsilon_greedy(option_q, state, candidates, eps, rng);
  ++option_choices;
  return pick;
}

int FlatExplorer::choose(std::size_t primitive, std::size_t state_index) {
  const double eps = state_.flat_epsilon(primitive);
  const std::size_t a =
      epsilon_greedy(state_.flat_q.at(primitive), state_index, state_.action_candidates(), eps, rng_);
  ++state_.primitive_steps;
  return static_cast<int>(a);
}

std::size_t epsilon_greedy(const QTable& q, std::size_t s,
                           const std::vector<std::size_t>& candidates, double eps,
                           std::mt19937_64& rng) {
  if (candidates.empty()) throw std::invalid_argument("epsilon_greedy needs at least one candidate");
  if (uniform_real01(rng) < eps) return candidates[uniform_index(rng, candidates.size())];
  double best = q.at(s, candidates[0]);
  for (std::size_t i = 1; i < candidates.size(); ++i) best = std::max(best, q.at(s, candidates[i]));
  std::vector<std::size_t> ties;
  for (std::size_t c : candidates)
    if (q.at(s, c) == best) ties.push_back(c);
  if (ties.size() == 1) return ties[0];
  return ties[uniform_index(rng, ties.size())];
}

std::vector<std::size_t> greedy_policy(const QTable& q) {
  std::vector<std::size_t> out(q.states());
  for (std::size_t s = 0; s < q.states(); ++s) out[s] = q.greedy_action(s);
  return out;
}

void flat_q_update(QTable& q, std::size_t s, std::size_t a, std::size_t s2, double r,
                   double alpha, double gamma) {
  q.at(s, a) += alpha * (r + gamma * q.max_value(s2) - q.at(s, a));
}

void option_q_update(QTable& q, std::size_t s, std::size_t o, std::size_t s_end,
                     double r, int k, double alpha, double gamma) {
  if (k < 0) throw std::invalid_argument("option duration exponent must be non-negative");
  q.at(s, o) += alpha * (r + pow_int(gamma, k) * q.max_value(s_end) - q.at(s, o));
}

Rational lumped_reward(const Trajectory& traj, const FormulaPtr& phi) {
  const int len = static_cast<int>(traj.size());
  if (len == 0) throw std::invalid_argument("lumped_reward needs a non-empty trajectory");
  const FormulaPtr fitted = truncate_horizon(phi, len);
  return robustness(traj, *fitted, 0);
}

namespace {

// ---------------------------------------------------------------------------
// All-suffix reward evaluation.
//
// The per-suffix definition re-truncates the formula for every suffix length,
// which is quadratic in the trajectory length when done literally. Training
// calls this once per executed option, so the persistent-surveillance shape
//
//   G[0,U) of a boolean combination of (F[0,w) psi | G[0,w) psi | psi)
//
// with temporal-operator-free psi gets a linear-time path: pointwise
// robustness arrays, sliding-window extrema for the inner windows, and
// suffix extrema to mirror exactly what horizon truncation does to short
// suffixes. Everything is exact rational arithmetic, so the fast path and
// the literal definition agree bit for bit. Any other shape falls back to
// the literal per-suffix evaluation.
// ---------------------------------------------------------------------------

struct EvalNode {
  enum class Tag { Pointwise, Windowed, Not, And, Or };
  Tag tag = Tag::Pointwise;
  std::size_t point = 0;        // Pointwise: pointwise-array slot
  bool window_is_min = false;   // Windowed: min over the window (otherwise max)
  int width = 0;                // Windowed: window length
  std::size_t child_point = 0;  // Windowed: pointwise-array slot of the body
  std::size_t window_slot = 0;  // Windowed: slot among windowed nodes
  std::size_t lhs = 0;          // Not / And / Or
  std::size_t rhs = 0;          // And / Or
};

struct SuffixPlan {
  bool ok = false;
  bool outer_unbounded = false;
  int outer_hi = 1;
  std::vector<const StlFormula*> points;
  std::vector<EvalNode> nodes;
  std::size_t root = 0;
  std::size_t window_count = 0;
  int inner_horizon = 0;  // max windowed width - 1, 0 with no windows
};

std::size_t add_point(SuffixPlan& plan, const StlFormula* f) {
  plan.points.push_back(f);
  return plan.points.size() - 1;
}

bool classify(const FormulaPtr& f, SuffixPlan& plan, std::size_t& out) {
  if (is_temporal_free(*f)) {
    EvalNode node;
    node.tag = EvalNode::Tag::Pointwise;
    node.point = add_point(plan, f.get());
    plan.nodes.push_back(node);
    out = plan.nodes.size() - 1;
    return true;
  }
  switch (f->kind()) {
    case NodeKind::Not: {
      std::size_t child = 0;
      if (!classify(f->left(), plan, child)) return false;
      EvalNode node;
      node.tag = EvalNode::Tag::Not;
      node.lhs = child;
      plan.nodes.push_back(node);
      out = plan.nodes.size() - 1;
      return true;
    }
    case NodeKind::And:
    case NodeKind::Or: {
      std::size_t lhs = 0;
      std::size_t rhs = 0;
      if (!classify(f->left(), plan, lhs)) return false;
      if (!classify(f->right(), plan, rhs)) return false;
      EvalNode node;
      node.tag = f->kind() == NodeKind::And ? EvalNode::Tag::And : EvalNode::Tag::Or;
      node.lhs = lhs;
      node.rhs = rhs;
      plan.nodes.push_back(node);
      out = plan.nodes.size() - 1;
      return true;
    }
    case NodeKind::Always:
    case NodeKind::Eventually: {
      const Window& w = f->window();
      if (w.lo != 0 || w.unbounded) return false;
      if (!is_temporal_free(*f->left())) return false;
      EvalNode node;
      node.tag = EvalNode::Tag::Windowed;
      node.window_is_min = f->kind() == NodeKind::Always;
      node.width = w.hi;
      node.child_point = add_point(plan, f->left().get());
      node.window_slot = plan.window_count++;
      plan.inner_horizon = std::max(plan.inner_horizon, w.hi - 1);
      plan.nodes.push_back(node);
      out = plan.nodes.size() - 1;
      return true;
    }
    default:
      return false;
  }
}

SuffixPlan make_plan(const StlFormula& phi) {
  SuffixPlan plan;
  if (phi.kind() != NodeKind::Always || phi.window().lo != 0) return plan;
  plan.outer_unbounded = phi.window().unbounded;
  plan.outer_hi = phi.window().hi;
  plan.ok = classify(phi.left(), plan, plan.root);
  return plan;
}

// out[t] = extreme of values[t .. t+w) for t in [0, size-w]; empty when w
// exceeds the array (the whole-suffix arrays cover that regime instead).
std::vector<Rational> windowed_extreme(const std::vector<Rational>& values, int w,
                                       bool take_min) {
  const int m = static_cast<int>(values.size());
  std::vector<Rational> out;
  if (w > m) return out;
  out.reserve(m - w + 1);
  std::deque<int> idx;
  for (int t = 0; t < m; ++t) {
    while (!idx.empty()) {
      const bool dominated =
          take_min ? !(values[idx.back()] < values[t]) : !(values[t] < values[idx.back()]);
      if (!dominated) break;
      idx.pop_back();
    }
    idx.push_back(t);
    if (idx.front() <= t - w) idx.pop_front();
    if (t >= w - 1) out.push_back(values[idx.front()]);
  }
  return out;
}

std::vector<Rational> suffix_extreme(const std::vector<Rational>& values, bool take_min) {
  std::vector<Rational> out(values.size());
  if (values.empty()) return out;
  out.back() = values.back();
  for (int t = static_cast<int>(values.size()) - 2; t >= 0; --t)
    out[t] = take_min ? std::min(values[t], out[t + 1]) : std::max(values[t], out[t + 1]);
  return out;
}

std::vector<Rational> suffix_rewards_fast(const Trajectory& traj, const SuffixPlan& plan) {
  const int len = static_cast<int>(traj.size());
  const int h = plan.inner_horizon;

  std::vector<std::vector<Rational>> point_vals(plan.points.size());
  for (std::size_t p = 0; p < plan.points.size(); ++p) {
    point_vals[p].reserve(len);
    for (int t = 0; t < len; ++t)
      point_vals[p].push_back(state_robustness(traj[t], *plan.points[p]));
  }

  std::vector<std::vector<Rational>> window_vals(plan.window_count);
  std::vector<std::vector<Rational>> whole_suffix(plan.window_count);
  for (const EvalNode& node : plan.nodes) {
    if (node.tag != EvalNode::Tag::Windowed) continue;
    window_vals[node.window_slot] =
        windowed_extreme(point_vals[node.child_point], node.width, node.window_is_min);
    whole_suffix[node.window_slot] =
        suffix_extreme(point_vals[node.child_point], node.window_is_min);
  }

  // suffix_len < 0 means every window fits in full at t; otherwise windows
  // at least as long as the suffix are clipped to the whole suffix, exactly
  // as horizon truncation clips them.
  const auto eval_node = [&](auto&& rec, std::size_t id, int t, int suffix_len) -> Rational {
    const EvalNode& node = plan.nodes[id];
    switch (node.tag) {
      case EvalNode::Tag::Pointwise:
        return point_vals[node.point][t];
      case EvalNode::Tag::Windowed:
        if (suffix_len >= 0 && node.width >= suffix_len)
          return whole_suffix[node.window_slot][t];
        return window_vals[node.window_slot][t];
      case EvalNode::Tag::Not:
        return -rec(rec, node.lhs, t, suffix_len);
      case EvalNode::Tag::And:
        return std::min(rec(rec, node.lhs, t, suffix_len), rec(rec, node.rhs, t, suffix_len));
      case EvalNode::Tag::Or:
        return std::max(rec(rec, node.lhs, t, suffix_len), rec(rec, node.rhs, t, suffix_len));
    }
    throw EvalError("unreachable inner-node tag");
  };
  const auto eval_tree = [&](int t, int suffix_len) -> Rational {
    return eval_node(eval_node, plan.root, t, suffix_len);
  };

  // Combined inner value where every window fits in full, then its running
  // minimum toward the end; these cover every suffix longer than the inner
  // horizon.
  std::vector<Rational> inner;
  const int inner_size = len - h;
  if (inner_size > 0) {
    inner.reserve(inner_size);
    for (int t = 0; t < inner_size; ++t) inner.push_back(eval_tree(t, -1));
  }
  const std::vector<Rational> inner_tail_min = suffix_extreme(inner, true);
  std::vector<Rational> inner_window_min;
  if (!plan.outer_unbounded && plan.outer_hi < inner_size)
    inner_window_min = windowed_extreme(inner, plan.outer_hi, true);

  std::vector<Rational> out(len);
  for (int i = 0; i < len; ++i) {
    const int suffix_len = len - i;
    if (suffix_len > h) {
      const int avail = suffix_len - h;
      const int effective =
          plan.outer_unbounded ? avail : std::min(plan.outer_hi, avail);
      out[i] = effective >= avail ? inner_tail_min[i] : inner_window_min[i];
    } else {
      // Horizon truncation collapses the outer window to a single instant
      // and clips any window longer than the suffix to the whole suffix.
      out[i] = eval_tree(i, suffix_len);
    }
  }
  return out;
}

}  // namespace

std::vector<Rational> suffix_lumped_rewards(const Trajectory& traj, const FormulaPtr& phi) {
  if (!phi) throw std::invalid_argument("suffix_lumped_rewards needs a formula");
  const int len = static_cast<int>(traj.size());
  if (len == 0) throw std::invalid_argument("suffix_lumped_rewards needs a non-empty trajectory");
  const SuffixPlan plan = make_plan(*phi);
  if (plan.ok) return suffix_rewards_fast(traj, plan);
  std::vector<Rational> out(len);
  for (int i = 0; i < len; ++i) {
    const FormulaPtr fitted = truncate_horizon(phi, len - i);
    out[i] = robustness(traj, *fitted, i, len);
  }
  return out;
}

double hstl_update(const FormulaPtr& phi, const std::vector<FormulaPtr>& predicates,
                   std::size_t option_index, const Trajectory& traj,
                   const std::vector<std::size_t>& state_indices,
                   const std::vector<int>& actions, LearningState& state) {
  const std::size_t k = actions.size();
  if (k == 0) throw std::invalid_argument("hstl_update needs at least one transition");
  if (traj.size() != k + 1 || state_indices.size() != k + 1)
    throw std::invalid_argument("trajectory, state indices, and actions disagree on length");
  if (predicates.size() != state.n_predicates())
    throw std::invalid_argument("predicate count does not match the flat learner count");
  if (option_index >= state.option_q.actions())
    throw std::invalid_argument("option index is out of range");

  const std::size_t n = predicates.size();
  std::vector<std::vector<double>> pred_reward(n, std::vector<double>(k + 1, 0.0));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t t = 1; t <= k; ++t)
      pred_reward[j][t] = to_double(state_robustness(traj[static_cast<int>(t)], *predicates[j]));

  const std::vector<Rational> suffix = suffix_lumped_rewards(traj, phi);

  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t a = static_cast<std::size_t>(actions[i]);
      flat_q_update(state.flat_q[j], state_indices[i], a, state_indices[i + 1],
                    pred_reward[j][i + 1], state.params.flat_alpha[j],
                    state.params.flat_gamma[j]);
    }
    const int exponent = state.params.exponent == DiscountExponent::RemainingSteps
                             ? static_cast<int>(k - i)
                             : static_cast<int>(k);
    option_q_update(state.option_q, state_indices[i], option_index, state_indices[k],
                    to_double(suffix[i]), exponent, state.params.option_alpha,
                    state.params.option_gamma);
  }
  return to_double(suffix[0]);
}

}  // namespace hstl
