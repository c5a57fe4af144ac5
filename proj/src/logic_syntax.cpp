// Surface syntax for formulas and temporal terms.
//
// Precedence, tightest first: `!`, `X`, `Y`, `&`, `|`, `->`, `U`, `S`.
// `->`, `U` and `S` associate to the right. Relations are tried before
// propositional readings wherever a token could start either.

#include <cctype>
#include <sstream>

#include "cosmop/error.hpp"
#include "cosmop/logic.hpp"

namespace cosmop::logic {

namespace {

enum class Tok { Ident, Keyword, Int, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  int64_t value = 0;
  int line = 1;
  int column = 1;
};

bool is_keyword(const std::string& w) {
  static const char* const kKeywords[] = {"X",    "Y",     "U",   "S",   "G",  "F",
                                          "Last", "true", "false", "min", "max"};
  for (const char* k : kKeywords)
    if (w == k) return true;
  return false;
}

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  size_t i = 0;
  int line = 1;
  int col = 1;
  auto advance = [&](size_t n) {
    for (size_t j = 0; j < n; ++j) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  auto ident_start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
  auto ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };

  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token tok{Tok::Punct, {}, 0, line, col};
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      tok.kind = Tok::Int;
      tok.text = std::string(src.substr(i, j - i));
      try {
        tok.value = std::stoll(tok.text);
      } catch (const std::out_of_range&) {
        throw ParseError("integer literal out of range", line, col);
      }
      advance(j - i);
    } else if (ident_start(c)) {
      size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      std::string word(src.substr(i, j - i));
      if (is_keyword(word)) {
        tok.kind = Tok::Keyword;
      } else {
        // Selector suffixes: `[int]` and `.name`, e.g. obj[1].x
        for (;;) {
          if (j < src.size() && src[j] == '[') {
            size_t k = j + 1;
            while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
            if (k == j + 1 || k >= src.size() || src[k] != ']') break;
            j = k + 1;
          } else if (j + 1 < src.size() && src[j] == '.' && ident_start(src[j + 1])) {
            j += 1;
            while (j < src.size() && ident_char(src[j])) ++j;
          } else {
            break;
          }
        }
        word = std::string(src.substr(i, j - i));
        tok.kind = Tok::Ident;
      }
      tok.text = std::move(word);
      advance(j - i);
    } else {
      static const char* const kPuncts[] = {"->", "<=", ">=", "!=", "==", "(", ")", "[", "]", ",",
                                            "+",  "-",  "*",  "&",  "|",  "!", "=", "<", ">", "@"};
      bool matched = false;
      for (const char* p : kPuncts) {
        const std::string_view pv(p);
        if (src.substr(i, pv.size()) == pv) {
          tok.text = std::string(pv);
          advance(pv.size());
          matched = true;
          break;
        }
      }
      if (!matched) throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    out.push_back(std::move(tok));
  }
  out.push_back(Token{Tok::End, "<end of input>", 0, line, col});
  return out;
}

bool has_vars(const Term& t) {
  if (t.kind() == TermKind::Var) return true;
  for (size_t i = 0; i < t.arity(); ++i)
    if (has_vars(t.arg(i))) return true;
  return false;
}

int64_t const_value(const Term& t) {
  static const Trace kEmpty{};
  return eval_term(t, kEmpty, 0);
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

  Formula parse_formula_all() {
    Formula f = formula();
    expect_end();
    return f;
  }

  Term parse_term_all() {
    Term t = sum();
    expect_end();
    return t;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool at(const char* text) const {
    return (peek().kind == Tok::Punct || peek().kind == Tok::Keyword) && peek().text == text;
  }
  bool accept(const char* text) {
    if (!at(text)) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + ", found '" + peek().text + "'", peek().line, peek().column);
  }
  void expect(const char* text) {
    if (!accept(text)) fail(std::string("expected '") + text + "'");
  }
  void expect_end() const {
    if (peek().kind != Tok::End) fail("unexpected trailing input");
  }

  // formula := until ('S' formula)?
  Formula formula() {
    Formula lhs = until_level();
    if (accept("S")) return since(lhs, formula());
    return lhs;
  }

  Formula until_level() {
    Formula lhs = implies_level();
    if (accept("U")) return until(lhs, until_level());
    return lhs;
  }

  Formula implies_level() {
    Formula lhs = or_level();
    if (accept("->")) return implies(lhs, implies_level());
    return lhs;
  }

  Formula or_level() {
    std::vector<Formula> parts{and_level()};
    while (accept("|")) parts.push_back(and_level());
    return lor(std::move(parts));
  }

  Formula and_level() {
    std::vector<Formula> parts{unary()};
    while (accept("&")) parts.push_back(unary());
    return land(std::move(parts));
  }

  Formula unary() {
    if (accept("!")) return !unary();
    if (at("X") || at("Y")) {
      if (auto r = try_relation()) return *r;
      const bool is_next = at("X");
      ++pos_;
      Formula inner = unary();
      return is_next ? next(inner) : prev(inner);
    }
    return primary();
  }

  Formula primary() {
    if (accept("true")) return truth(true);
    if (accept("false")) return truth(false);
    if (accept("G")) return always(parenthesized());
    if (accept("F")) return eventually(parenthesized());
    if (accept("Last")) {
      expect("[");
      Formula f = formula();
      expect("]");
      return last(f);
    }
    if (auto r = try_relation()) return *r;
    if (accept("(")) {
      Formula f = formula();
      expect(")");
      return f;
    }
    if (peek().kind == Tok::Ident) {
      std::string name = peek().text;
      ++pos_;
      int offset = 0;
      if (accept("@")) {
        const bool negative = accept("-");
        if (!negative) accept("+");
        if (peek().kind != Tok::Int) fail("expected an integer offset");
        offset = int(peek().value) * (negative ? -1 : 1);
        ++pos_;
      }
      return atom(std::move(name), offset);
    }
    fail("expected a formula");
  }

  Formula parenthesized() {
    expect("(");
    Formula f = formula();
    expect(")");
    return f;
  }

  std::optional<Formula> try_relation() {
    const size_t saved = pos_;
    try {
      Term lhs = sum();
      RelOp op;
      if (accept("<=")) op = RelOp::Le;
      else if (accept(">=")) op = RelOp::Ge;
      else if (accept("!=")) op = RelOp::Ne;
      else if (accept("==") || accept("=")) op = RelOp::Eq;
      else if (accept("<")) op = RelOp::Lt;
      else if (accept(">")) op = RelOp::Gt;
      else {
        pos_ = saved;
        return std::nullopt;
      }
      Term rhs = sum();
      return rel(std::move(lhs), op, std::move(rhs));
    } catch (const ParseError&) {
      pos_ = saved;
      return std::nullopt;
    }
  }

  Term sum() {
    Term acc = product();
    for (;;) {
      if (accept("+")) {
        acc = logic::sum(acc, product());
      } else if (accept("-")) {
        Term rhs = product();
        acc = rhs.kind() == TermKind::Const ? logic::sum(acc, constant(-rhs.value()))
                                            : logic::sum(acc, scale(-1, rhs));
      } else {
        return acc;
      }
    }
  }

  Term product() {
    Term acc = signed_term();
    while (at("*")) {
      const Token& star = peek();
      ++pos_;
      Term rhs = signed_term();
      if (!has_vars(acc)) {
        acc = scale(const_value(acc), rhs);
      } else if (!has_vars(rhs)) {
        acc = scale(const_value(rhs), acc);
      } else {
        throw ParseError("non-linear product of variables", star.line, star.column);
      }
    }
    return acc;
  }

  Term signed_term() {
    if (accept("-")) {
      Term t = signed_term();
      if (t.kind() == TermKind::Const) return constant(-t.value());
      return scale(-1, t);
    }
    return atom_term();
  }

  Term atom_term() {
    const Token& tok = peek();
    if (tok.kind == Tok::Int) {
      ++pos_;
      return constant(tok.value);
    }
    if (tok.kind == Tok::Ident) {
      ++pos_;
      return var(tok.text);
    }
    if (accept("X")) {
      expect("(");
      Term t = sum();
      expect(")");
      return next(t);
    }
    if (accept("Y")) {
      expect("(");
      Term t = sum();
      expect(")");
      return prev(t);
    }
    if (at("min") || at("max")) {
      const bool is_min = at("min");
      ++pos_;
      expect("(");
      Term a = sum();
      expect(",");
      Term b = sum();
      expect(")");
      return is_min ? logic::min(a, b) : logic::max(a, b);
    }
    if (accept("(")) {
      Term t = sum();
      expect(")");
      return t;
    }
    fail("expected a term");
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
};

// --- Printing ---------------------------------------------------------------

void print_term(std::ostream& os, const Term& t);

void print_term_grouped(std::ostream& os, const Term& t) {
  const bool group = t.kind() == TermKind::Sum || t.kind() == TermKind::Scale;
  if (group) os << "(";
  print_term(os, t);
  if (group) os << ")";
}

void print_term(std::ostream& os, const Term& t) {
  switch (t.kind()) {
    case TermKind::Var:
      os << t.name();
      return;
    case TermKind::Const:
      os << t.value();
      return;
    case TermKind::Next:
      os << "X(";
      print_term(os, t.arg(0));
      os << ")";
      return;
    case TermKind::Prev:
      os << "Y(";
      print_term(os, t.arg(0));
      os << ")";
      return;
    case TermKind::Scale:
      os << t.value() << " * ";
      print_term_grouped(os, t.arg(0));
      return;
    case TermKind::Sum:
      print_term(os, t.arg(0));
      os << " + ";
      if (t.arg(1).kind() == TermKind::Sum) {
        os << "(";
        print_term(os, t.arg(1));
        os << ")";
      } else {
        print_term(os, t.arg(1));
      }
      return;
    case TermKind::Min:
    case TermKind::Max:
      os << (t.kind() == TermKind::Min ? "min(" : "max(");
      print_term(os, t.arg(0));
      os << ", ";
      print_term(os, t.arg(1));
      os << ")";
      return;
  }
}

bool is_binary(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
    case FormulaKind::Until:
    case FormulaKind::Since:
      return true;
    default:
      return false;
  }
}

void print_formula(std::ostream& os, const Formula& f);

void print_operand(std::ostream& os, const Formula& f) {
  const bool group = is_binary(f) || f.kind() == FormulaKind::Rel;
  if (group) os << "(";
  print_formula(os, f);
  if (group) os << ")";
}

void print_joined(std::ostream& os, const Formula& f, const char* sep) {
  for (size_t i = 0; i < f.args().size(); ++i) {
    if (i) os << sep;
    const Formula& a = f.arg(i);
    if (is_binary(a)) {
      os << "(";
      print_formula(os, a);
      os << ")";
    } else {
      print_formula(os, a);
    }
  }
}

void print_formula(std::ostream& os, const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Const:
      os << (f.truth() ? "true" : "false");
      return;
    case FormulaKind::Atom:
      os << f.name();
      if (f.offset() != 0) os << "@" << f.offset();
      return;
    case FormulaKind::Rel:
      print_term(os, f.relation().lhs);
      os << " " << to_string(f.relation().op) << " ";
      print_term(os, f.relation().rhs);
      return;
    case FormulaKind::Not:
      os << "!";
      print_operand(os, f.arg(0));
      return;
    case FormulaKind::And:
      print_joined(os, f, " & ");
      return;
    case FormulaKind::Or:
      print_joined(os, f, " | ");
      return;
    case FormulaKind::Implies:
      print_joined(os, f, " -> ");
      return;
    case FormulaKind::Until:
      print_joined(os, f, " U ");
      return;
    case FormulaKind::Since:
      print_joined(os, f, " S ");
      return;
    case FormulaKind::Next:
    case FormulaKind::Prev:
      os << (f.kind() == FormulaKind::Next ? "X(" : "Y(");
      print_formula(os, f.arg(0));
      os << ")";
      return;
    case FormulaKind::Eventually:
    case FormulaKind::Always:
      os << (f.kind() == FormulaKind::Eventually ? "F(" : "G(");
      print_formula(os, f.arg(0));
      os << ")";
      return;
    case FormulaKind::Last:
      os << "Last[";
      print_formula(os, f.arg(0));
      os << "]";
      return;
  }
}

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).parse_formula_all(); }
Term parse_term(std::string_view text) { return Parser(text).parse_term_all(); }

std::string to_string(const Formula& f) {
  std::ostringstream os;
  print_formula(os, f);
  return os.str();
}

std::string to_string(const Term& t) {
  std::ostringstream os;
  print_term(os, t);
  return os.str();
}

const char* to_string(RelOp op) {
  switch (op) {
    case RelOp::Eq: return "=";
    case RelOp::Lt: return "<";
    case RelOp::Le: return "<=";
    case RelOp::Gt: return ">";
    case RelOp::Ge: return ">=";
    case RelOp::Ne: return "!=";
  }
  return "?";
}

}  // namespace cosmop::logic
