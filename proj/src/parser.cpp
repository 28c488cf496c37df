#include "hstl/parser.hpp"

#include <cctype>
#include <optional>
#include <unordered_map>

#include "hstl/errors.hpp"

namespace hstl {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool is_reserved(const std::string& name) {
  return name == "G" || name == "F" || name == "U" || name == "inf";
}

enum class TokKind { Ident, Number, Punct, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string text;
  char punct = 0;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
    current_ = Token{TokKind::End, "", 0, line_, col_};
    if (pos_ >= text_.size()) return;

    char c = text_[pos_];
    if (is_ident_start(c)) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) consume();
      current_.kind = TokKind::Ident;
      current_.text = text_.substr(start, pos_ - start);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        consume();
      if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == '/')) {
        consume();
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_])))
          consume();
      }
      current_.kind = TokKind::Number;
      current_.text = text_.substr(start, pos_ - start);
      return;
    }
    static const std::string punct = "()[],&|!<>+-*";
    if (punct.find(c) != std::string::npos) {
      current_.kind = TokKind::Punct;
      current_.punct = c;
      current_.text = std::string(1, c);
      consume();
      return;
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "'", line_, col_);
  }

  void consume() {
    ++pos_;
    ++col_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token current_;
};

class Parser {
 public:
  Parser(const std::string& text, const std::vector<std::string>& variables)
      : lexer_(text) {
    for (std::size_t i = 0; i < variables.size(); ++i) {
      const std::string& name = variables[i];
      if (name.empty() || !is_ident_start(name[0]))
        throw std::invalid_argument("invalid variable name '" + name + "'");
      if (is_reserved(name))
        throw std::invalid_argument("variable name '" + name + "' is reserved");
      if (!vars_.emplace(name, static_cast<int>(i)).second)
        throw std::invalid_argument("duplicate variable name '" + name + "'");
    }
  }

  FormulaPtr run() {
    FormulaPtr f = parse_or();
    const Token& t = lexer_.peek();
    if (t.kind != TokKind::End)
      throw ParseError("unexpected trailing input '" + t.text + "'", t.line, t.col);
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, const Token& at) {
    throw ParseError(msg, at.line, at.col);
  }

  bool at_punct(char c) const {
    return lexer_.peek().kind == TokKind::Punct && lexer_.peek().punct == c;
  }

  bool at_word(const char* w) const {
    return lexer_.peek().kind == TokKind::Ident && lexer_.peek().text == w;
  }

  Token expect_punct(char c, const char* what) {
    if (!at_punct(c))
      fail(std::string("expected '") + c + "' " + what + ", found '" +
               lexer_.peek().text + "'",
           lexer_.peek());
    return lexer_.take();
  }

  FormulaPtr parse_or() {
    std::vector<FormulaPtr> parts{parse_and()};
    while (at_punct('|')) {
      lexer_.take();
      parts.push_back(parse_and());
    }
    return parts.size() == 1 ? parts[0] : StlFormula::disjunction_of(std::move(parts));
  }

  FormulaPtr parse_and() {
    std::vector<FormulaPtr> parts{parse_unary()};
    while (at_punct('&')) {
      lexer_.take();
      parts.push_back(parse_unary());
    }
    return parts.size() == 1 ? parts[0] : StlFormula::conjunction_of(std::move(parts));
  }

  FormulaPtr parse_unary() {
    if (at_punct('!')) {
      lexer_.take();
      return StlFormula::negation(parse_unary());
    }
    if (at_word("G")) {
      lexer_.take();
      Window w = parse_bound();
      return StlFormula::always(w, parse_unary());
    }
    if (at_word("F")) {
      lexer_.take();
      Window w = parse_bound();
      return StlFormula::eventually(w, parse_unary());
    }
    FormulaPtr lhs = parse_atom();
    if (at_word("U")) {
      lexer_.take();
      Window w = parse_bound();
      return StlFormula::until(w, std::move(lhs), parse_unary());
    }
    return lhs;
  }

  Window parse_bound() {
    Token open = expect_punct('[', "to open a bound");
    int lo = parse_bound_int();
    expect_punct(',', "in bound");
    bool unbounded = false;
    int hi = 0;
    if (at_word("inf")) {
      lexer_.take();
      unbounded = true;
    } else {
      hi = parse_bound_int();
    }
    expect_punct(')', "to close a bound");
    if (!unbounded && lo >= hi)
      fail("malformed bound: requires lo < hi", open);
    return unbounded ? Window::open_ended(lo) : Window::bounded(lo, hi);
  }

  int parse_bound_int() {
    const Token& t = lexer_.peek();
    if (t.kind != TokKind::Number)
      fail("expected integer bound, found '" + t.text + "'", t);
    for (char c : t.text)
      if (!std::isdigit(static_cast<unsigned char>(c)))
        fail("bound must be a plain integer", t);
    long long v = 0;
    for (char c : t.text) {
      v = v * 10 + (c - '0');
      if (v > 1000000000LL) fail("bound too large", t);
    }
    lexer_.take();
    return static_cast<int>(v);
  }

  FormulaPtr parse_atom() {
    if (at_punct('(')) {
      lexer_.take();
      FormulaPtr f = parse_or();
      expect_punct(')', "to close a group");
      return f;
    }
    return parse_predicate();
  }

  FormulaPtr parse_predicate() {
    Predicate p;
    bool negative = false;
    if (at_punct('-')) {
      lexer_.take();
      negative = true;
    }
    p.terms.push_back(parse_term(negative));
    while (at_punct('+') || at_punct('-')) {
      bool minus = lexer_.take().punct == '-';
      p.terms.push_back(parse_term(minus));
    }
    const Token& cmp = lexer_.peek();
    if (at_punct('<')) {
      p.cmp = Comparator::Less;
    } else if (at_punct('>')) {
      p.cmp = Comparator::Greater;
    } else {
      fail("expected '<' or '>' after expression, found '" + cmp.text + "'", cmp);
    }
    lexer_.take();
    bool const_negative = false;
    if (at_punct('-')) {
      lexer_.take();
      const_negative = true;
    }
    const Token& num = lexer_.peek();
    if (num.kind != TokKind::Number)
      fail("expected number after comparator, found '" + num.text + "'", num);
    p.constant = parse_rational(num.text);
    if (const_negative) p.constant = -p.constant;
    lexer_.take();
    return StlFormula::predicate(std::move(p));
  }

  Term parse_term(bool negative) {
    Term t;
    t.coeff = Rational(1);
    if (lexer_.peek().kind == TokKind::Number) {
      t.coeff = parse_rational(lexer_.take().text);
      expect_punct('*', "between coefficient and variable");
    }
    const Token& id = lexer_.peek();
    if (id.kind != TokKind::Ident)
      fail("expected variable name, found '" + id.text + "'", id);
    if (is_reserved(id.text))
      fail("'" + id.text + "' is reserved and cannot name a variable", id);
    auto it = vars_.find(id.text);
    if (it == vars_.end()) fail("unknown variable '" + id.text + "'", id);
    t.var = id.text;
    t.var_index = it->second;
    lexer_.take();
    if (negative) t.coeff = -t.coeff;
    return t;
  }

  Lexer lexer_;
  std::unordered_map<std::string, int> vars_;
};

}  // namespace

FormulaPtr parse_stl(const std::string& text, const std::vector<std::string>& variables) {
  return Parser(text, variables).run();
}

std::string expand_aliases(const std::string& text,
                           const std::map<std::string, std::string>& aliases) {
  if (aliases.empty()) return text;
  std::string current = text;
  for (int round = 0; round < 32; ++round) {
    std::string next;
    next.reserve(current.size());
    bool changed = false;
    std::size_t i = 0;
    while (i < current.size()) {
      if (is_ident_start(current[i])) {
        std::size_t start = i;
        while (i < current.size() && is_ident_char(current[i])) ++i;
        std::string word = current.substr(start, i - start);
        auto it = aliases.find(word);
        if (it != aliases.end()) {
          next += "(" + it->second + ")";
          changed = true;
        } else {
          next += word;
        }
      } else {
        next += current[i++];
      }
    }
    if (!changed) return next;
    current = std::move(next);
  }
  throw ConfigError("alias expansion did not terminate; definitions form a cycle");
}

}  // namespace hstl
