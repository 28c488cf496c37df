#pragma once

#include <optional>
#include <vector>

#include "hstl/formula.hpp"

namespace hstl {

// Signed distance of one state from a predicate's decision boundary:
//   f(s) < c  ->  c - f(s)        f(s) > c  ->  f(s) - c
// Positive satisfies, negative violates, zero sits on the boundary.
Rational predicate_robustness(const State& s, const Predicate& p);

// Robustness of a temporal-operator-free formula against a single state.
Rational state_robustness(const State& s, const StlFormula& f);

// Quantitative semantics over a finite trajectory, evaluated at index t.
// Negation flips sign, conjunction takes min, disjunction max. G[lo,hi) is
// the min of the subformula over [t+lo, t+hi), F[lo,hi) the max, and
// a U[lo,hi) b is max over t' in [t+lo, t+hi) of
//   min( r(b at t'), min over t'' in [t, t') of r(a at t'') ).
// Throws EvalError if a window is unbounded or reaches past the trajectory
// end; callers evaluating short runs truncate first (truncate_horizon).
Rational robustness(const Trajectory& traj, const StlFormula& f, int t);

// Same, but only the prefix [0, end) of the trajectory is visible.
Rational robustness(const Trajectory& traj, const StlFormula& f, int t, int end);

// Largest forward index offset the formula can inspect; nullopt when some
// reachable window is unbounded.
std::optional<int> horizon(const StlFormula& f);

// Rewrites the formula so it is evaluable on a k-sample trajectory: each
// temporal window's upper end is clipped, top-down, to the widest value the
// remaining samples support once its subformula's own horizon is paid for;
// unbounded windows get the full remaining budget. A window squeezed past
// its lower end collapses to the single instant [lo, lo+1). Subtrees that
// already fit are returned unchanged (shared). Throws std::invalid_argument
// for k <= 0.
FormulaPtr truncate_horizon(const FormulaPtr& f, int k);

// The maximal temporal-operator-free subformulas, in left-to-right order,
// deduplicated structurally. These are the targets the flat policies learn.
std::vector<FormulaPtr> extract_predicates(const FormulaPtr& f);

}  // namespace hstl
