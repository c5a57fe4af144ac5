#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cosmop::logic {

// ---------------------------------------------------------------------------
// Arithmetic temporal terms
// ---------------------------------------------------------------------------

enum class TermKind { Var, Const, Next, Prev, Scale, Sum, Min, Max };

struct TermNode;

// Immutable, cheaply copyable handle to a term tree.
class Term {
 public:
  explicit Term(std::shared_ptr<const TermNode> node) : node_(std::move(node)) {}

  TermKind kind() const;
  const std::string& name() const;   // Var
  int64_t value() const;             // Const, Scale coefficient
  const Term& arg(size_t i) const;   // Next/Prev/Scale: 0; Sum/Min/Max: 0, 1
  size_t arity() const;

  friend bool operator==(const Term& a, const Term& b);

 private:
  std::shared_ptr<const TermNode> node_;
};

struct TermNode {
  TermKind kind;
  std::string name;
  int64_t value = 0;
  std::vector<Term> args;
};

Term var(std::string name);
Term constant(int64_t c);
Term next(Term t);
Term prev(Term t);
Term scale(int64_t c, Term t);
Term sum(Term a, Term b);
Term min(Term a, Term b);
Term max(Term a, Term b);

inline Term operator+(Term a, Term b) { return sum(std::move(a), std::move(b)); }
inline Term operator+(Term a, int64_t c) { return sum(std::move(a), constant(c)); }
inline Term operator-(Term a, Term b) { return sum(std::move(a), scale(-1, std::move(b))); }
inline Term operator-(Term a, int64_t c) { return sum(std::move(a), constant(-c)); }
inline Term operator*(int64_t c, Term t) { return scale(c, std::move(t)); }

// ---------------------------------------------------------------------------
// Formulas
// ---------------------------------------------------------------------------

enum class RelOp { Eq, Lt, Le, Gt, Ge, Ne };

struct Relation {
  Term lhs;
  RelOp op;
  Term rhs;
};

enum class FormulaKind {
  Const,       // true / false
  Atom,        // boolean proposition, optionally shifted by `offset` instants
  Rel,         // linear relation over temporal terms
  Not,
  And,         // n-ary
  Or,          // n-ary
  Implies,
  Next,
  Prev,
  Until,
  Since,
  Eventually,
  Always,
  Last,
};

struct FormulaNode;

class Formula {
 public:
  explicit Formula(std::shared_ptr<const FormulaNode> node) : node_(std::move(node)) {}

  FormulaKind kind() const;
  bool truth() const;                      // Const
  const std::string& name() const;         // Atom
  int offset() const;                      // Atom
  const Relation& relation() const;        // Rel
  const std::vector<Formula>& args() const;
  const Formula& arg(size_t i) const { return args().at(i); }

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  std::shared_ptr<const FormulaNode> node_;
};

struct FormulaNode {
  FormulaKind kind;
  bool truth = false;
  std::string name;
  int offset = 0;
  std::optional<Relation> rel;
  std::vector<Formula> args;
};

Formula truth(bool value);
Formula atom(std::string name, int offset = 0);
Formula rel(Term lhs, RelOp op, Term rhs);
Formula operator!(Formula f);
Formula land(std::vector<Formula> fs);  // empty -> true, singleton -> itself
Formula lor(std::vector<Formula> fs);   // empty -> false, singleton -> itself
Formula implies(Formula a, Formula b);
Formula next(Formula f);
Formula prev(Formula f);
Formula until(Formula a, Formula b);
Formula since(Formula a, Formula b);
Formula eventually(Formula f);
Formula always(Formula f);
Formula last(Formula f);

inline Formula operator&&(Formula a, Formula b) { return land({std::move(a), std::move(b)}); }
inline Formula operator||(Formula a, Formula b) { return lor({std::move(a), std::move(b)}); }

inline Formula eq(Term a, Term b) { return rel(std::move(a), RelOp::Eq, std::move(b)); }
inline Formula ne(Term a, Term b) { return rel(std::move(a), RelOp::Ne, std::move(b)); }
inline Formula lt(Term a, Term b) { return rel(std::move(a), RelOp::Lt, std::move(b)); }
inline Formula le(Term a, Term b) { return rel(std::move(a), RelOp::Le, std::move(b)); }
inline Formula gt(Term a, Term b) { return rel(std::move(a), RelOp::Gt, std::move(b)); }
inline Formula ge(Term a, Term b) { return rel(std::move(a), RelOp::Ge, std::move(b)); }

// Rewrites Or/Implies/Eventually/Always/Last into the core grammar
// (Not, And, Next, Until, Since and the boolean constants).
Formula normalize(const Formula& f);

// ---------------------------------------------------------------------------
// Traces and evaluation
// ---------------------------------------------------------------------------

// Finite trace over instants 0..K.
struct Trace {
  int K = 0;
  std::map<std::string, std::vector<int64_t>> int_vars;
  std::map<std::string, std::vector<bool>> bool_vars;

  friend bool operator==(const Trace&, const Trace&) = default;
};

// rho(k) |= f. Throws EvalError when a symbol is missing or a term index falls
// outside [0, K]. Next at K and Prev at 0 are false.
bool eval(const Formula& f, const Trace& rho, int k);
int64_t eval_term(const Term& t, const Trace& rho, int k);

enum class SymbolSort { Int, Bool };

struct SymbolUse {
  std::string name;
  SymbolSort sort;
  int min_offset;
  int max_offset;

  friend bool operator==(const SymbolUse&, const SymbolUse&) = default;
};

// Every Var/Atom symbol with the extreme term-level offsets it is read at,
// sorted by (name, sort).
std::vector<SymbolUse> collect_symbols(const Formula& f);

// Net temporal offsets reachable from the root of a term: (min, max).
std::pair<int, int> term_offsets(const Term& t);

// ---------------------------------------------------------------------------
// Surface syntax
// ---------------------------------------------------------------------------

Formula parse_formula(std::string_view text);
Term parse_term(std::string_view text);

std::string to_string(const Formula& f);
std::string to_string(const Term& t);
const char* to_string(RelOp op);

}  // namespace cosmop::logic
