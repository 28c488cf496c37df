#pragma once

// Formula AST over discrete-time trajectories. Nodes are immutable and held
// by shared_ptr, so subtrees may be shared freely across threads.

#include <memory>
#include <string>
#include <vector>

#include "hstl/rational.hpp"

namespace hstl {

// A state is one sample of the signal: integer-valued state variables in a
// fixed order (the environment defines the order and the names).
using State = std::vector<int>;

// Finite run of states. start_time is bookkeeping for traces cut out of a
// longer run; evaluation always indexes states[] directly.
struct Trajectory {
  std::vector<State> states;
  int start_time = 0;

  std::size_t size() const { return states.size(); }
  const State& operator[](std::size_t i) const { return states[i]; }
};

enum class Comparator { Less, Greater };

// One linear term: coeff * variable. var_index resolves the variable into a
// State vector; the name is kept for printing.
struct Term {
  std::string var;
  int var_index = 0;
  Rational coeff{1};
};

// Linear inequality over state variables: sum(terms) < constant  or  > constant.
struct Predicate {
  std::vector<Term> terms;
  Comparator cmp = Comparator::Less;
  Rational constant{0};
};

// Half-open discrete time window [lo, hi). "unbounded" means no upper bound;
// hi is ignored in that case.
struct Window {
  int lo = 0;
  int hi = 1;
  bool unbounded = false;

  static Window bounded(int lo, int hi) { return Window{lo, hi, false}; }
  static Window open_ended(int lo) { return Window{lo, 0, true}; }
};

enum class NodeKind { Pred, Not, And, Or, Always, Eventually, Until };

class StlFormula;
using FormulaPtr = std::shared_ptr<const StlFormula>;

class StlFormula {
 public:
  NodeKind kind() const { return kind_; }
  const Predicate& pred() const { return pred_; }
  const Window& window() const { return window_; }
  const FormulaPtr& left() const { return left_; }    // unary child lives here
  const FormulaPtr& right() const { return right_; }  // Until/And/Or second child

  static FormulaPtr predicate(Predicate p);
  static FormulaPtr negation(FormulaPtr f);
  static FormulaPtr conjunction(FormulaPtr a, FormulaPtr b);
  static FormulaPtr disjunction(FormulaPtr a, FormulaPtr b);
  static FormulaPtr always(Window w, FormulaPtr f);
  static FormulaPtr eventually(Window w, FormulaPtr f);
  static FormulaPtr until(Window w, FormulaPtr a, FormulaPtr b);

  // And/Or nodes are binary; lists fold right-nested, min/max associativity
  // makes the grouping observationally neutral.
  static FormulaPtr conjunction_of(std::vector<FormulaPtr> parts);
  static FormulaPtr disjunction_of(std::vector<FormulaPtr> parts);

 private:
  StlFormula() = default;

  static FormulaPtr make(NodeKind kind, Predicate pred, Window window,
                         FormulaPtr left, FormulaPtr right);

  NodeKind kind_ = NodeKind::Pred;
  Predicate pred_;
  Window window_;
  FormulaPtr left_;
  FormulaPtr right_;
};

bool structurally_equal(const StlFormula& a, const StlFormula& b);

// Does the subtree contain no temporal operator?
bool is_temporal_free(const StlFormula& f);

// Renders a formula in the concrete text syntax; parsing the result yields a
// structurally identical tree.
std::string to_text(const StlFormula& f);

}  // namespace hstl
