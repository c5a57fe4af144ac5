#include "cosmop/smt_term.hpp"

#include <sstream>

#include "cosmop/error.hpp"

namespace cosmop::smt {

namespace {

Term make(Op op, Sort sort, std::vector<Term> args, int64_t iv = 0) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->sort = sort;
  n->int_value = iv;
  n->args = std::move(args);
  return Term(std::move(n));
}

void require_sort(const Term& t, Sort s, const char* where) {
  if (t.sort() != s)
    throw SolverError(std::string(where) + ": operand has the wrong sort");
}

}  // namespace

Op Term::op() const { return node_->op; }
Sort Term::sort() const { return node_->sort; }
int64_t Term::int_value() const { return node_->int_value; }
bool Term::bool_value() const { return node_->bool_value; }
const std::string& Term::name() const { return node_->name; }
const std::vector<Term>& Term::args() const { return node_->args; }

Term int_const(int64_t v) { return make(Op::IntConst, Sort::Int, {}, v); }

Term bool_const(bool v) {
  auto n = std::make_shared<Node>();
  n->op = Op::BoolConst;
  n->sort = Sort::Bool;
  n->bool_value = v;
  return Term(std::move(n));
}

Term var(std::string name, Sort sort) {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->sort = sort;
  n->name = std::move(name);
  return Term(std::move(n));
}

Term lnot(Term a) {
  require_sort(a, Sort::Bool, "not");
  if (a.op() == Op::BoolConst) return bool_const(!a.bool_value());
  if (a.op() == Op::Not) return a.args()[0];
  return make(Op::Not, Sort::Bool, {std::move(a)});
}

Term land(std::vector<Term> args) {
  std::vector<Term> kept;
  kept.reserve(args.size());
  for (Term& a : args) {
    require_sort(a, Sort::Bool, "and");
    if (a.is_false()) return bool_const(false);
    if (a.is_true()) continue;
    kept.push_back(std::move(a));
  }
  if (kept.empty()) return bool_const(true);
  if (kept.size() == 1) return kept.front();
  return make(Op::And, Sort::Bool, std::move(kept));
}

Term lor(std::vector<Term> args) {
  std::vector<Term> kept;
  kept.reserve(args.size());
  for (Term& a : args) {
    require_sort(a, Sort::Bool, "or");
    if (a.is_true()) return bool_const(true);
    if (a.is_false()) continue;
    kept.push_back(std::move(a));
  }
  if (kept.empty()) return bool_const(false);
  if (kept.size() == 1) return kept.front();
  return make(Op::Or, Sort::Bool, std::move(kept));
}

Term implies(Term a, Term b) {
  require_sort(a, Sort::Bool, "=>");
  require_sort(b, Sort::Bool, "=>");
  if (a.is_false() || b.is_true()) return bool_const(true);
  if (a.is_true()) return b;
  if (b.is_false()) return lnot(std::move(a));
  return make(Op::Implies, Sort::Bool, {std::move(a), std::move(b)});
}

namespace {

Term compare(Op op, Term a, Term b) {
  if (op != Op::Eq) {
    require_sort(a, Sort::Int, "comparison");
    require_sort(b, Sort::Int, "comparison");
  } else if (a.sort() != b.sort()) {
    throw SolverError("=: operands have different sorts");
  }
  if (a.op() == Op::IntConst && b.op() == Op::IntConst) {
    const int64_t x = a.int_value();
    const int64_t y = b.int_value();
    switch (op) {
      case Op::Eq: return bool_const(x == y);
      case Op::Lt: return bool_const(x < y);
      case Op::Le: return bool_const(x <= y);
      case Op::Gt: return bool_const(x > y);
      case Op::Ge: return bool_const(x >= y);
      default: break;
    }
  }
  return make(op, Sort::Bool, {std::move(a), std::move(b)});
}

}  // namespace

Term eq(Term a, Term b) { return compare(Op::Eq, std::move(a), std::move(b)); }
Term lt(Term a, Term b) { return compare(Op::Lt, std::move(a), std::move(b)); }
Term le(Term a, Term b) { return compare(Op::Le, std::move(a), std::move(b)); }
Term gt(Term a, Term b) { return compare(Op::Gt, std::move(a), std::move(b)); }
Term ge(Term a, Term b) { return compare(Op::Ge, std::move(a), std::move(b)); }

Term add(std::vector<Term> args) {
  for (const Term& a : args) require_sort(a, Sort::Int, "+");
  if (args.empty()) return int_const(0);
  if (args.size() == 1) return args.front();
  return make(Op::Add, Sort::Int, std::move(args));
}

Term mul(int64_t c, Term a) {
  require_sort(a, Sort::Int, "*");
  if (c == 1) return a;
  if (a.op() == Op::IntConst) return int_const(c * a.int_value());
  return make(Op::Mul, Sort::Int, {std::move(a)}, c);
}

Term ite(Term c, Term a, Term b) {
  require_sort(c, Sort::Bool, "ite");
  if (a.sort() != b.sort()) throw SolverError("ite: branches have different sorts");
  if (c.is_true()) return a;
  if (c.is_false()) return b;
  const Sort s = a.sort();
  return make(Op::Ite, s, {std::move(c), std::move(a), std::move(b)});
}

// --- Printing ---------------------------------------------------------------

std::string quote_symbol(const std::string& name) { return "|" + name + "|"; }

namespace {

void print_int(std::ostream& os, int64_t v) {
  if (v < 0)
    os << "(- " << std::to_string(v).substr(1) << ")";
  else
    os << v;
}

void print(std::ostream& os, const Term& t) {
  auto nary = [&](const char* head) {
    os << "(" << head;
    for (const Term& a : t.args()) {
      os << " ";
      print(os, a);
    }
    os << ")";
  };
  switch (t.op()) {
    case Op::IntConst: print_int(os, t.int_value()); return;
    case Op::BoolConst: os << (t.bool_value() ? "true" : "false"); return;
    case Op::Var: os << quote_symbol(t.name()); return;
    case Op::Not: nary("not"); return;
    case Op::And: nary("and"); return;
    case Op::Or: nary("or"); return;
    case Op::Implies: nary("=>"); return;
    case Op::Eq: nary("="); return;
    case Op::Lt: nary("<"); return;
    case Op::Le: nary("<="); return;
    case Op::Gt: nary(">"); return;
    case Op::Ge: nary(">="); return;
    case Op::Add: nary("+"); return;
    case Op::Mul:
      os << "(* ";
      print_int(os, t.int_value());
      os << " ";
      print(os, t.args()[0]);
      os << ")";
      return;
    case Op::Ite: nary("ite"); return;
  }
}

}  // namespace

std::string to_smtlib(const Term& t) {
  std::ostringstream os;
  print(os, t);
  return os.str();
}

// --- Evaluation -------------------------------------------------------------

Value evaluate(const Term& t, const Model& model) {
  auto as_int = [&](const Term& a) { return std::get<int64_t>(evaluate(a, model)); };
  auto as_bool = [&](const Term& a) { return std::get<bool>(evaluate(a, model)); };
  switch (t.op()) {
    case Op::IntConst: return t.int_value();
    case Op::BoolConst: return t.bool_value();
    case Op::Var: {
      auto it = model.find(t.name());
      if (it == model.end()) throw SolverError("model has no value for '" + t.name() + "'");
      const bool is_int = std::holds_alternative<int64_t>(it->second);
      if (is_int != (t.sort() == Sort::Int))
        throw SolverError("model value for '" + t.name() + "' has the wrong sort");
      return it->second;
    }
    case Op::Not: return !as_bool(t.args()[0]);
    case Op::And:
      for (const Term& a : t.args())
        if (!as_bool(a)) return false;
      return true;
    case Op::Or:
      for (const Term& a : t.args())
        if (as_bool(a)) return true;
      return false;
    case Op::Implies: return !as_bool(t.args()[0]) || as_bool(t.args()[1]);
    case Op::Eq: return evaluate(t.args()[0], model) == evaluate(t.args()[1], model);
    case Op::Lt: return as_int(t.args()[0]) < as_int(t.args()[1]);
    case Op::Le: return as_int(t.args()[0]) <= as_int(t.args()[1]);
    case Op::Gt: return as_int(t.args()[0]) > as_int(t.args()[1]);
    case Op::Ge: return as_int(t.args()[0]) >= as_int(t.args()[1]);
    case Op::Add: {
      int64_t s = 0;
      for (const Term& a : t.args()) s += as_int(a);
      return s;
    }
    case Op::Mul: return t.int_value() * as_int(t.args()[0]);
    case Op::Ite:
      return as_bool(t.args()[0]) ? evaluate(t.args()[1], model) : evaluate(t.args()[2], model);
  }
  throw SolverError("unhandled term");
}

void collect_vars(const Term& t, std::map<std::string, Sort>& out) {
  if (t.op() == Op::Var) {
    out.emplace(t.name(), t.sort());
    return;
  }
  for (const Term& a : t.args()) collect_vars(a, out);
}

}  // namespace cosmop::smt
