#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace cosmop::smt {

enum class Sort { Int, Bool };

enum class Op {
  IntConst,
  BoolConst,
  Var,
  Not,
  And,
  Or,
  Implies,
  Eq,
  Lt,
  Le,
  Gt,
  Ge,
  Add,
  Mul,  // constant coefficient times one term
  Ite,
};

struct Node;

// Quantifier-free linear integer arithmetic term. Builders fold boolean
// constants so that guards which are statically false drop their bodies.
class Term {
 public:
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  Op op() const;
  Sort sort() const;
  int64_t int_value() const;           // IntConst, Mul coefficient
  bool bool_value() const;             // BoolConst
  const std::string& name() const;     // Var
  const std::vector<Term>& args() const;

  bool is_true() const { return op() == Op::BoolConst && bool_value(); }
  bool is_false() const { return op() == Op::BoolConst && !bool_value(); }

 private:
  std::shared_ptr<const Node> node_;
};

struct Node {
  Op op;
  Sort sort;
  int64_t int_value = 0;
  bool bool_value = false;
  std::string name;
  std::vector<Term> args;
};

Term int_const(int64_t v);
Term bool_const(bool v);
Term var(std::string name, Sort sort);
Term lnot(Term a);
Term land(std::vector<Term> args);
Term lor(std::vector<Term> args);
Term implies(Term a, Term b);
Term eq(Term a, Term b);
Term lt(Term a, Term b);
Term le(Term a, Term b);
Term gt(Term a, Term b);
Term ge(Term a, Term b);
Term add(std::vector<Term> args);
Term mul(int64_t c, Term a);
Term ite(Term c, Term a, Term b);

// SMT-LIB2 rendering. Symbols are emitted as quoted symbols `|name|`.
std::string to_smtlib(const Term& t);
std::string quote_symbol(const std::string& name);

using Value = std::variant<int64_t, bool>;
using Model = std::map<std::string, Value>;

// Evaluates a term under a total assignment; throws SolverError if a variable
// is unassigned or has the wrong sort.
Value evaluate(const Term& t, const Model& model);

// Names of every variable referenced by `t`, with their sorts.
void collect_vars(const Term& t, std::map<std::string, Sort>& out);

}  // namespace cosmop::smt
