#include <map>

#include "doctest.h"
#include "hstl/errors.hpp"
#include "hstl/parser.hpp"
#include "hstl/rng.hpp"
#include "oracles.hpp"

using namespace hstl;

namespace {
const std::vector<std::string> kVars{"x", "y"};

FormulaPtr parse(const std::string& text) { return parse_stl(text, kVars); }
}  // namespace

TEST_CASE("predicates parse into terms, comparator, and constant") {
  const FormulaPtr f = parse("2*x + y < 7/2");
  REQUIRE(f->kind() == NodeKind::Pred);
  const Predicate& p = f->pred();
  REQUIRE(p.terms.size() == 2);
  CHECK(p.terms[0].var == "x");
  CHECK(p.terms[0].var_index == 0);
  CHECK(p.terms[0].coeff == Rational(2));
  CHECK(p.terms[1].var == "y");
  CHECK(p.terms[1].var_index == 1);
  CHECK(p.terms[1].coeff == Rational(1));
  CHECK(p.cmp == Comparator::Less);
  CHECK(p.constant == Rational(7, 2));
}

TEST_CASE("numeric literals cover integers, decimals, ratios, and signs") {
  CHECK(parse("x > -3")->pred().constant == Rational(-3));
  CHECK(parse("x > 0.25")->pred().constant == Rational(1, 4));
  CHECK(parse("x - y > 2")->pred().terms[1].coeff == Rational(-1));
  CHECK(parse("-x + 0.5*y < 1")->pred().terms[0].coeff == Rational(-1));
}

TEST_CASE("conjunction binds tighter than disjunction") {
  const FormulaPtr f = parse("x > 1 | y > 2 & x < 5");
  REQUIRE(f->kind() == NodeKind::Or);
  CHECK(f->left()->kind() == NodeKind::Pred);
  REQUIRE(f->right()->kind() == NodeKind::And);
  CHECK(f->right()->left()->pred().cmp == Comparator::Greater);
  CHECK(f->right()->right()->pred().cmp == Comparator::Less);
}

TEST_CASE("chains of the same connective fold to the right") {
  const FormulaPtr f = parse("x > 1 & y > 1 & x < 5 & y < 5");
  REQUIRE(f->kind() == NodeKind::And);
  CHECK(f->left()->kind() == NodeKind::Pred);
  REQUIRE(f->right()->kind() == NodeKind::And);
  CHECK(f->right()->left()->kind() == NodeKind::Pred);
  REQUIRE(f->right()->right()->kind() == NodeKind::And);
  CHECK(f->right()->right()->left()->kind() == NodeKind::Pred);
  CHECK(f->right()->right()->right()->kind() == NodeKind::Pred);
}

TEST_CASE("temporal prefixes bind to the following unary formula only") {
  const FormulaPtr f = parse("G[0,3) x > 1 & y < 2");
  REQUIRE(f->kind() == NodeKind::And);
  CHECK(f->left()->kind() == NodeKind::Always);
  CHECK(f->left()->window().lo == 0);
  CHECK(f->left()->window().hi == 3);
  CHECK(f->right()->kind() == NodeKind::Pred);
}

TEST_CASE("negation applies before binary connectives") {
  const FormulaPtr f = parse("! x > 1 & y < 2");
  REQUIRE(f->kind() == NodeKind::And);
  CHECK(f->left()->kind() == NodeKind::Not);
  CHECK(f->left()->left()->kind() == NodeKind::Pred);
}

TEST_CASE("until attaches as a suffix at the unary level") {
  const FormulaPtr f = parse("x > 1 U[2,5) y < 3");
  REQUIRE(f->kind() == NodeKind::Until);
  CHECK(f->window().lo == 2);
  CHECK(f->window().hi == 5);
  CHECK(f->left()->pred().cmp == Comparator::Greater);
  CHECK(f->right()->pred().cmp == Comparator::Less);

  const FormulaPtr g = parse("F[0,4) (x > 1 U[0,2) y < 3)");
  REQUIRE(g->kind() == NodeKind::Eventually);
  CHECK(g->left()->kind() == NodeKind::Until);

  // a leading negation wraps the whole until; the suffix belongs to the
  // negated operand's parse, not to the negation's
  const FormulaPtr n = parse("! x > 1 U[0,2) y < 3");
  REQUIRE(n->kind() == NodeKind::Not);
  CHECK(n->left()->kind() == NodeKind::Until);
}

TEST_CASE("open-ended windows parse with inf") {
  const FormulaPtr f = parse("G[3,inf) x > 1");
  REQUIRE(f->kind() == NodeKind::Always);
  CHECK(f->window().lo == 3);
  CHECK(f->window().unbounded);
}

TEST_CASE("parse errors carry position and a categorical message") {
  CHECK_THROWS_AS(parse("x >"), ParseError);
  CHECK_THROWS_AS(parse("x > 1)"), ParseError);
  CHECK_THROWS_AS(parse("G[5,2) x > 1"), ParseError);
  CHECK_THROWS_AS(parse("G[0,0) x > 1"), ParseError);
  CHECK_THROWS_AS(parse("z > 1"), ParseError);
  CHECK_THROWS_AS(parse("x # 1"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);

  bool threw = false;
  try {
    parse("x >\n  z > 1");
  } catch (const ParseError& e) {
    threw = true;
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK(threw);
}

TEST_CASE("reserved words cannot name variables") {
  CHECK_THROWS_AS(parse_stl("x > 1", {"x", "G"}), std::invalid_argument);
  CHECK_THROWS_AS(parse_stl("x > 1", {"x", "x"}), std::invalid_argument);
  CHECK_THROWS_AS(parse_stl("x > 1", {"x", "2y"}), std::invalid_argument);
}

TEST_CASE("alias expansion wraps definitions in parentheses") {
  const std::map<std::string, std::string> aliases{
      {"near", "x > 1 & x < 5"},
      {"goal", "F[0,4) near"},
  };
  CHECK(expand_aliases("goal | near", aliases) ==
        "(F[0,4) (x > 1 & x < 5)) | (x > 1 & x < 5)");
  const FormulaPtr f = parse(expand_aliases("G[0,2) near", aliases));
  REQUIRE(f->kind() == NodeKind::Always);
  CHECK(f->left()->kind() == NodeKind::And);
}

TEST_CASE("alias cycles are reported") {
  const std::map<std::string, std::string> aliases{{"a", "b | x > 1"}, {"b", "a & y < 2"}};
  CHECK_THROWS_AS(expand_aliases("a", aliases), ConfigError);
}

TEST_CASE("printing and reparsing preserves structure") {
  const char* samples[] = {
      "x > 1",
      "! (x > 1 & y < 2)",
      "G[0,4) (x > 1 | y < 2) & F[1,3) x < 5",
      "x > 1 U[0,5) (y > 2 U[1,4) x < 3)",
      "G[2,inf) F[0,40) (x > 3 & x < 9 & y > 10 & y < 14)",
      "-x + 1/2*y < -7/2",
  };
  for (const char* text : samples) {
    const FormulaPtr f = parse(text);
    const FormulaPtr g = parse(to_text(*f));
    CHECK_MESSAGE(structurally_equal(*f, *g), "round trip changed: ", text, " -> ", to_text(*f));
  }
}

TEST_CASE("random formulas survive the print and reparse round trip") {
  std::mt19937_64 g = make_stream(2024, "roundtrip");
  for (int i = 0; i < 400; ++i) {
    const FormulaPtr f = oracle::random_formula(g, 4);
    const std::string text = to_text(*f);
    const FormulaPtr back = parse(text);
    CHECK_MESSAGE(structurally_equal(*f, *back), "round trip changed: ", text);
  }
}

TEST_CASE("factory validation rejects malformed windows and null children") {
  CHECK_THROWS_AS(StlFormula::always(Window::bounded(3, 3), parse("x > 1")),
                  std::invalid_argument);
  CHECK_THROWS_AS(StlFormula::always(Window::bounded(-1, 2), parse("x > 1")),
                  std::invalid_argument);
  CHECK_THROWS_AS(StlFormula::negation(nullptr), std::invalid_argument);
  CHECK_THROWS_AS(StlFormula::conjunction(parse("x > 1"), nullptr), std::invalid_argument);
}

TEST_CASE("n-ary builders fold right and reject empty input") {
  const std::vector<FormulaPtr> parts{parse("x > 1"), parse("y > 2"), parse("x < 5")};
  const FormulaPtr f = StlFormula::conjunction_of(parts);
  REQUIRE(f->kind() == NodeKind::And);
  CHECK(f->right()->kind() == NodeKind::And);
  CHECK(StlFormula::conjunction_of({parse("x > 1")})->kind() == NodeKind::Pred);
  CHECK_THROWS_AS(StlFormula::conjunction_of({}), std::invalid_argument);
  CHECK_THROWS_AS(StlFormula::disjunction_of({}), std::invalid_argument);
}
