#include "hstl/formula.hpp"

#include <algorithm>
#include <stdexcept>

#include "hstl/errors.hpp"

namespace hstl {

Rational parse_rational(const std::string& text) {
  auto bad = [&]() -> Rational {
    throw std::invalid_argument("not a number: '" + text + "'");
  };
  if (text.empty()) return bad();
  std::size_t pos = 0;
  bool negative = false;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    pos = 1;
  }
  long long num = 0;
  long long den = 1;
  bool any_digit = false;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c >= '0' && c <= '9') {
      num = num * 10 + (c - '0');
      if (seen_point) den *= 10;
      any_digit = true;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c == '/' && !seen_point && any_digit && pos + 1 < text.size()) {
      long long d = 0;
      for (++pos; pos < text.size(); ++pos) {
        if (text[pos] < '0' || text[pos] > '9') return bad();
        d = d * 10 + (text[pos] - '0');
      }
      if (d == 0) return bad();
      den = d;
      break;
    } else {
      return bad();
    }
  }
  if (!any_digit) return bad();
  return Rational(negative ? -num : num, den);
}

namespace {

void check_window(const Window& w) {
  if (w.lo < 0) throw std::invalid_argument("window lower bound must be non-negative");
  if (!w.unbounded && w.lo >= w.hi)
    throw std::invalid_argument("window requires lo < hi");
}

void check_child(const FormulaPtr& f) {
  if (!f) throw std::invalid_argument("null subformula");
}

}  // namespace

FormulaPtr StlFormula::make(NodeKind kind, Predicate pred, Window window,
                            FormulaPtr left, FormulaPtr right) {
  auto node = std::shared_ptr<StlFormula>(new StlFormula());
  node->kind_ = kind;
  node->pred_ = std::move(pred);
  node->window_ = window;
  node->left_ = std::move(left);
  node->right_ = std::move(right);
  return node;
}

FormulaPtr StlFormula::predicate(Predicate p) {
  if (p.terms.empty()) throw std::invalid_argument("predicate needs at least one term");
  return make(NodeKind::Pred, std::move(p), Window{}, nullptr, nullptr);
}

FormulaPtr StlFormula::negation(FormulaPtr f) {
  check_child(f);
  return make(NodeKind::Not, {}, Window{}, std::move(f), nullptr);
}

FormulaPtr StlFormula::conjunction(FormulaPtr a, FormulaPtr b) {
  check_child(a);
  check_child(b);
  return make(NodeKind::And, {}, Window{}, std::move(a), std::move(b));
}

FormulaPtr StlFormula::disjunction(FormulaPtr a, FormulaPtr b) {
  check_child(a);
  check_child(b);
  return make(NodeKind::Or, {}, Window{}, std::move(a), std::move(b));
}

FormulaPtr StlFormula::always(Window w, FormulaPtr f) {
  check_window(w);
  check_child(f);
  return make(NodeKind::Always, {}, w, std::move(f), nullptr);
}

FormulaPtr StlFormula::eventually(Window w, FormulaPtr f) {
  check_window(w);
  check_child(f);
  return make(NodeKind::Eventually, {}, w, std::move(f), nullptr);
}

FormulaPtr StlFormula::until(Window w, FormulaPtr a, FormulaPtr b) {
  check_window(w);
  check_child(a);
  check_child(b);
  return make(NodeKind::Until, {}, w, std::move(a), std::move(b));
}

FormulaPtr StlFormula::conjunction_of(std::vector<FormulaPtr> parts) {
  if (parts.empty()) throw std::invalid_argument("empty conjunction");
  FormulaPtr acc = parts.back();
  for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it)
    acc = conjunction(*it, acc);
  return acc;
}

FormulaPtr StlFormula::disjunction_of(std::vector<FormulaPtr> parts) {
  if (parts.empty()) throw std::invalid_argument("empty disjunction");
  FormulaPtr acc = parts.back();
  for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it)
    acc = disjunction(*it, acc);
  return acc;
}

namespace {

bool equal_predicates(const Predicate& a, const Predicate& b) {
  if (a.cmp != b.cmp || a.constant != b.constant) return false;
  if (a.terms.size() != b.terms.size()) return false;
  for (std::size_t i = 0; i < a.terms.size(); ++i) {
    if (a.terms[i].var != b.terms[i].var) return false;
    if (a.terms[i].var_index != b.terms[i].var_index) return false;
    if (a.terms[i].coeff != b.terms[i].coeff) return false;
  }
  return true;
}

bool equal_windows(const Window& a, const Window& b) {
  if (a.unbounded != b.unbounded) return false;
  if (a.lo != b.lo) return false;
  return a.unbounded || a.hi == b.hi;
}

}  // namespace

bool structurally_equal(const StlFormula& a, const StlFormula& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case NodeKind::Pred:
      return equal_predicates(a.pred(), b.pred());
    case NodeKind::Not:
      return structurally_equal(*a.left(), *b.left());
    case NodeKind::And:
    case NodeKind::Or:
      return structurally_equal(*a.left(), *b.left()) &&
             structurally_equal(*a.right(), *b.right());
    case NodeKind::Always:
    case NodeKind::Eventually:
      return equal_windows(a.window(), b.window()) &&
             structurally_equal(*a.left(), *b.left());
    case NodeKind::Until:
      return equal_windows(a.window(), b.window()) &&
             structurally_equal(*a.left(), *b.left()) &&
             structurally_equal(*a.right(), *b.right());
  }
  return false;
}

bool is_temporal_free(const StlFormula& f) {
  switch (f.kind()) {
    case NodeKind::Pred:
      return true;
    case NodeKind::Not:
      return is_temporal_free(*f.left());
    case NodeKind::And:
    case NodeKind::Or:
      return is_temporal_free(*f.left()) && is_temporal_free(*f.right());
    default:
      return false;
  }
}

namespace {

/* Printing uses the binding strength the grammar defines:
 *   4 predicate / parenthesized
 *   3 ! G F U
 *   2 &
 *   1 |
 * A child is parenthesized when it binds looser than its context requires.
 * Right-nested chains of the same connective print flat ("a & b & c"). */

int strength(const StlFormula& f) {
  switch (f.kind()) {
    case NodeKind::Pred: return 4;
    case NodeKind::Not:
    case NodeKind::Always:
    case NodeKind::Eventually:
    case NodeKind::Until: return 3;
    case NodeKind::And: return 2;
    case NodeKind::Or: return 1;
  }
  return 4;
}

std::string window_text(const Window& w) {
  std::string out = "[" + std::to_string(w.lo) + ",";
  out += w.unbounded ? "inf" : std::to_string(w.hi);
  out += ")";
  return out;
}

std::string predicate_text(const Predicate& p) {
  std::string out;
  for (std::size_t i = 0; i < p.terms.size(); ++i) {
    const Term& t = p.terms[i];
    Rational c = t.coeff;
    if (i == 0) {
      out += c == Rational(1) ? t.var : format_rational(c) + "*" + t.var;
    } else {
      bool negative = c < Rational(0);
      out += negative ? " - " : " + ";
      Rational mag = negative ? -c : c;
      out += mag == Rational(1) ? t.var : format_rational(mag) + "*" + t.var;
    }
  }
  out += p.cmp == Comparator::Less ? " < " : " > ";
  out += format_rational(p.constant);
  return out;
}

std::string render(const StlFormula& f, int min_strength);

std::string render_chain(const StlFormula& f, NodeKind op, const char* glue) {
  // Flattens the right spine of a same-op chain.
  std::string out = render(*f.left(), strength(f) + 1);
  const StlFormula* node = f.right().get();
  while (node->kind() == op) {
    out += glue;
    out += render(*node->left(), strength(f) + 1);
    node = node->right().get();
  }
  out += glue;
  out += render(*node, strength(f) + 1);
  return out;
}

std::string render(const StlFormula& f, int min_strength) {
  std::string out;
  switch (f.kind()) {
    case NodeKind::Pred:
      out = predicate_text(f.pred());
      break;
    case NodeKind::Not:
      out = "!" + render(*f.left(), 3);
      break;
    case NodeKind::Always:
      out = "G" + window_text(f.window()) + " " + render(*f.left(), 3);
      break;
    case NodeKind::Eventually:
      out = "F" + window_text(f.window()) + " " + render(*f.left(), 3);
      break;
    case NodeKind::Until:
      // The left operand of U must be an atom in the grammar.
      out = render(*f.left(), 4) + " U" + window_text(f.window()) + " " +
            render(*f.right(), 3);
      break;
    case NodeKind::And:
      out = render_chain(f, NodeKind::And, " & ");
      break;
    case NodeKind::Or:
      out = render_chain(f, NodeKind::Or, " | ");
      break;
  }
  if (strength(f) < min_strength) return "(" + out + ")";
  return out;
}

}  // namespace

std::string to_text(const StlFormula& f) { return render(f, 1); }

}  // namespace hstl
