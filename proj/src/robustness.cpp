#include "hstl/robustness.hpp"

#include <algorithm>
#include <stdexcept>

#include "hstl/errors.hpp"

namespace hstl {

Rational predicate_robustness(const State& s, const Predicate& p) {
  Rational value(0);
  for (const Term& t : p.terms) {
    if (t.var_index < 0 || static_cast<std::size_t>(t.var_index) >= s.size())
      throw EvalError("state has no variable '" + t.var + "'");
    value += t.coeff * Rational(s[t.var_index]);
  }
  return p.cmp == Comparator::Less ? p.constant - value : value - p.constant;
}

Rational state_robustness(const State& s, const StlFormula& f) {
  switch (f.kind()) {
    case NodeKind::Pred:
      return predicate_robustness(s, f.pred());
    case NodeKind::Not:
      return -state_robustness(s, *f.left());
    case NodeKind::And:
      return std::min(state_robustness(s, *f.left()), state_robustness(s, *f.right()));
    case NodeKind::Or:
      return std::max(state_robustness(s, *f.left()), state_robustness(s, *f.right()));
    default:
      throw EvalError("formula is not temporal-operator-free");
  }
}

namespace {

Rational eval(const Trajectory& traj, const StlFormula& f, int t, int end) {
  switch (f.kind()) {
    case NodeKind::Pred:
      return predicate_robustness(traj[static_cast<std::size_t>(t)], f.pred());
    case NodeKind::Not:
      return -eval(traj, *f.left(), t, end);
    case NodeKind::And:
      return std::min(eval(traj, *f.left(), t, end), eval(traj, *f.right(), t, end));
    case NodeKind::Or:
      return std::max(eval(traj, *f.left(), t, end), eval(traj, *f.right(), t, end));
    default:
      break;
  }

  const Window& w = f.window();
  if (w.unbounded)
    throw EvalError("unbounded window cannot be evaluated; truncate the formula first");
  int from = t + w.lo;
  int to = t + w.hi;
  if (to > end)
    throw EvalError("formula horizon exceeds trajectory length; truncate the formula first");

  if (f.kind() == NodeKind::Always) {
    Rational m = eval(traj, *f.left(), from, end);
    for (int u = from + 1; u < to; ++u)
      m = std::min(m, eval(traj, *f.left(), u, end));
    return m;
  }
  if (f.kind() == NodeKind::Eventually) {
    Rational m = eval(traj, *f.left(), from, end);
    for (int u = from + 1; u < to; ++u)
      m = std::max(m, eval(traj, *f.left(), u, end));
    return m;
  }

  // Until. The left prefix starts at t itself, not at t+lo.
  bool have_best = false;
  Rational best(0);
  bool have_prefix = false;
  Rational prefix_min(0);
  for (int u = t; u < to; ++u) {
    if (u >= from) {
      Rational cand = eval(traj, *f.right(), u, end);
      if (have_prefix) cand = std::min(cand, prefix_min);
      best = have_best ? std::max(best, cand) : cand;
      have_best = true;
    }
    if (u + 1 < to) {
      Rational lv = eval(traj, *f.left(), u, end);
      prefix_min = have_prefix ? std::min(prefix_min, lv) : lv;
      have_prefix = true;
    }
  }
  return best;
}

}  // namespace

Rational robustness(const Trajectory& traj, const StlFormula& f, int t) {
  return robustness(traj, f, t, static_cast<int>(traj.size()));
}

Rational robustness(const Trajectory& traj, const StlFormula& f, int t, int end) {
  if (end < 1 || end > static_cast<int>(traj.size()))
    throw EvalError("evaluation window end is out of range");
  if (t < 0 || t >= end) throw EvalError("evaluation time is outside the trajectory");
  return eval(traj, f, t, end);
}

std::optional<int> horizon(const StlFormula& f) {
  switch (f.kind()) {
    case NodeKind::Pred:
      return 0;
    case NodeKind::Not:
      return horizon(*f.left());
    case NodeKind::And:
    case NodeKind::Or: {
      auto l = horizon(*f.left());
      auto r = horizon(*f.right());
      if (!l || !r) return std::nullopt;
      return std::max(*l, *r);
    }
    case NodeKind::Always:
    case NodeKind::Eventually: {
      if (f.window().unbounded) return std::nullopt;
      auto h = horizon(*f.left());
      if (!h) return std::nullopt;
      return f.window().hi - 1 + *h;
    }
    case NodeKind::Until: {
      if (f.window().unbounded) return std::nullopt;
      auto l = horizon(*f.left());
      auto r = horizon(*f.right());
      if (!l || !r) return std::nullopt;
      return f.window().hi - 1 + std::max(*l, *r);
    }
  }
  return 0;
}

namespace {

// budget = number of samples available from the node's own evaluation time.
FormulaPtr clip(const FormulaPtr& f, int budget) {
  switch (f->kind()) {
    case NodeKind::Pred:
      return f;
    case NodeKind::Not: {
      FormulaPtr c = clip(f->left(), budget);
      return c == f->left() ? f : StlFormula::negation(std::move(c));
    }
    case NodeKind::And:
    case NodeKind::Or: {
      FormulaPtr l = clip(f->left(), budget);
      FormulaPtr r = clip(f->right(), budget);
      if (l == f->left() && r == f->right()) return f;
      return f->kind() == NodeKind::And
                 ? StlFormula::conjunction(std::move(l), std::move(r))
                 : StlFormula::disjunction(std::move(l), std::move(r));
    }
    default:
      break;
  }

  const Window& w = f->window();
  int child_budget = std::max(1, budget - w.lo);
  FormulaPtr left = clip(f->left(), child_budget);
  FormulaPtr right = f->kind() == NodeKind::Until ? clip(f->right(), child_budget) : nullptr;

  int child_h = horizon(*left).value();
  if (right) child_h = std::max(child_h, horizon(*right).value());

  // Widest upper end the remaining samples can support once the subformula's
  // own lookahead is paid for; collapses to one instant when squeezed out.
  // A lower bound beyond the budget is pulled back too, so the result always
  // fits budget samples.
  int cap = budget - child_h;
  int new_lo = w.lo;
  int new_hi = w.unbounded ? cap : std::min(w.hi, cap);
  if (new_hi <= new_lo) {
    new_lo = std::min(new_lo, cap - 1);
    new_hi = new_lo + 1;
  }

  Window nw = Window::bounded(new_lo, new_hi);
  bool unchanged = !w.unbounded && nw.lo == w.lo && nw.hi == w.hi && left == f->left() &&
                   (!right || right == f->right());
  if (unchanged) return f;

  switch (f->kind()) {
    case NodeKind::Always:
      return StlFormula::always(nw, std::move(left));
    case NodeKind::Eventually:
      return StlFormula::eventually(nw, std::move(left));
    default:
      return StlFormula::until(nw, std::move(left), std::move(right));
  }
}

}  // namespace

FormulaPtr truncate_horizon(const FormulaPtr& f, int k) {
  if (!f) throw std::invalid_argument("null formula");
  if (k <= 0) throw std::invalid_argument("trajectory length must be positive");
  return clip(f, k);
}

namespace {

void collect_maximal(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  if (is_temporal_free(*f)) {
    out.push_back(f);
    return;
  }
  switch (f->kind()) {
    case NodeKind::Not:
    case NodeKind::Always:
    case NodeKind::Eventually:
      collect_maximal(f->left(), out);
      break;
    case NodeKind::And:
    case NodeKind::Or:
    case NodeKind::Until:
      collect_maximal(f->left(), out);
      collect_maximal(f->right(), out);
      break;
    case NodeKind::Pred:
      break;
  }
}

}  // namespace

std::vector<FormulaPtr> extract_predicates(const FormulaPtr& f) {
  if (!f) throw std::invalid_argument("null formula");
  std::vector<FormulaPtr> raw;
  collect_maximal(f, raw);
  std::vector<FormulaPtr> out;
  for (const FormulaPtr& cand : raw) {
    bool seen = false;
    for (const FormulaPtr& have : out)
      if (structurally_equal(*cand, *have)) {
        seen = true;
        break;
      }
    if (!seen) out.push_back(cand);
  }
  if (out.empty()) throw EvalError("formula contains no predicate");
  return out;
}

}  // namespace hstl
