#include "cosmop/logic.hpp"

#include <algorithm>
#include <limits>

#include "cosmop/error.hpp"

namespace cosmop::logic {

namespace {

Term make_term(TermKind kind, std::string name, int64_t value, std::vector<Term> args) {
  auto node = std::make_shared<TermNode>();
  node->kind = kind;
  node->name = std::move(name);
  node->value = value;
  node->args = std::move(args);
  return Term(std::move(node));
}

Formula make_formula(FormulaKind kind, std::vector<Formula> args) {
  auto node = std::make_shared<FormulaNode>();
  node->kind = kind;
  node->args = std::move(args);
  return Formula(std::move(node));
}

}  // namespace

// --- Term -------------------------------------------------------------------

TermKind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
int64_t Term::value() const { return node_->value; }
const Term& Term::arg(size_t i) const { return node_->args.at(i); }
size_t Term::arity() const { return node_->args.size(); }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  const TermNode& x = *a.node_;
  const TermNode& y = *b.node_;
  return x.kind == y.kind && x.name == y.name && x.value == y.value && x.args == y.args;
}

Term var(std::string name) { return make_term(TermKind::Var, std::move(name), 0, {}); }
Term constant(int64_t c) { return make_term(TermKind::Const, {}, c, {}); }
Term next(Term t) { return make_term(TermKind::Next, {}, 0, {std::move(t)}); }
Term prev(Term t) { return make_term(TermKind::Prev, {}, 0, {std::move(t)}); }
Term scale(int64_t c, Term t) { return make_term(TermKind::Scale, {}, c, {std::move(t)}); }
Term sum(Term a, Term b) { return make_term(TermKind::Sum, {}, 0, {std::move(a), std::move(b)}); }
Term min(Term a, Term b) { return make_term(TermKind::Min, {}, 0, {std::move(a), std::move(b)}); }
Term max(Term a, Term b) { return make_term(TermKind::Max, {}, 0, {std::move(a), std::move(b)}); }

// --- Formula ----------------------------------------------------------------

FormulaKind Formula::kind() const { return node_->kind; }
bool Formula::truth() const { return node_->truth; }
const std::string& Formula::name() const { return node_->name; }
int Formula::offset() const { return node_->offset; }
const Relation& Formula::relation() const { return *node_->rel; }
const std::vector<Formula>& Formula::args() const { return node_->args; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const FormulaNode& x = *a.node_;
  const FormulaNode& y = *b.node_;
  if (x.kind != y.kind || x.truth != y.truth || x.name != y.name || x.offset != y.offset)
    return false;
  if (x.rel.has_value() != y.rel.has_value()) return false;
  if (x.rel && !(x.rel->op == y.rel->op && x.rel->lhs == y.rel->lhs && x.rel->rhs == y.rel->rhs))
    return false;
  return x.args == y.args;
}

Formula truth(bool value) {
  auto node = std::make_shared<FormulaNode>();
  node->kind = FormulaKind::Const;
  node->truth = value;
  return Formula(std::move(node));
}

Formula atom(std::string name, int offset) {
  auto node = std::make_shared<FormulaNode>();
  node->kind = FormulaKind::Atom;
  node->name = std::move(name);
  node->offset = offset;
  return Formula(std::move(node));
}

Formula rel(Term lhs, RelOp op, Term rhs) {
  auto node = std::make_shared<FormulaNode>();
  node->kind = FormulaKind::Rel;
  node->rel.emplace(Relation{std::move(lhs), op, std::move(rhs)});
  return Formula(std::move(node));
}

Formula operator!(Formula f) { return make_formula(FormulaKind::Not, {std::move(f)}); }

Formula land(std::vector<Formula> fs) {
  if (fs.empty()) return truth(true);
  if (fs.size() == 1) return fs.front();
  return make_formula(FormulaKind::And, std::move(fs));
}

Formula lor(std::vector<Formula> fs) {
  if (fs.empty()) return truth(false);
  if (fs.size() == 1) return fs.front();
  return make_formula(FormulaKind::Or, std::move(fs));
}

Formula implies(Formula a, Formula b) {
  return make_formula(FormulaKind::Implies, {std::move(a), std::move(b)});
}
Formula next(Formula f) { return make_formula(FormulaKind::Next, {std::move(f)}); }
Formula prev(Formula f) { return make_formula(FormulaKind::Prev, {std::move(f)}); }
Formula until(Formula a, Formula b) {
  return make_formula(FormulaKind::Until, {std::move(a), std::move(b)});
}
Formula since(Formula a, Formula b) {
  return make_formula(FormulaKind::Since, {std::move(a), std::move(b)});
}
Formula eventually(Formula f) { return make_formula(FormulaKind::Eventually, {std::move(f)}); }
Formula always(Formula f) { return make_formula(FormulaKind::Always, {std::move(f)}); }
Formula last(Formula f) { return make_formula(FormulaKind::Last, {std::move(f)}); }

Formula normalize(const Formula& f) {
  std::vector<Formula> args;
  args.reserve(f.args().size());
  for (const Formula& a : f.args()) args.push_back(normalize(a));

  switch (f.kind()) {
    case FormulaKind::Const:
    case FormulaKind::Atom:
    case FormulaKind::Rel:
      return f;
    case FormulaKind::Not:
      return !args[0];
    case FormulaKind::And:
      return make_formula(FormulaKind::And, std::move(args));
    case FormulaKind::Or: {
      std::vector<Formula> negated;
      for (Formula& a : args) negated.push_back(!a);
      return !make_formula(FormulaKind::And, std::move(negated));
    }
    case FormulaKind::Implies:
      return !make_formula(FormulaKind::And, {args[0], !args[1]});
    case FormulaKind::Next:
      return next(args[0]);
    case FormulaKind::Prev:
      return prev(args[0]);
    case FormulaKind::Until:
      return until(args[0], args[1]);
    case FormulaKind::Since:
      return since(args[0], args[1]);
    case FormulaKind::Eventually:
      return until(truth(true), args[0]);
    case FormulaKind::Always:
      return !until(truth(true), !args[0]);
    case FormulaKind::Last:
      // Eventually (end-of-trace marker and f).
      return until(truth(true), make_formula(FormulaKind::And, {!next(truth(true)), args[0]}));
  }
  return f;
}

// --- Evaluation -------------------------------------------------------------

namespace {

template <class Vec>
const Vec& lookup(const std::map<std::string, Vec>& vars, const std::string& name,
                  const char* sort) {
  auto it = vars.find(name);
  if (it == vars.end())
    throw EvalError(std::string("unknown ") + sort + " symbol '" + name + "'");
  return it->second;
}

void check_index(int index, const Trace& rho, const std::string& what) {
  if (index < 0 || index > rho.K)
    throw EvalError("index " + std::to_string(index) + " of '" + what + "' outside [0, " +
                    std::to_string(rho.K) + "]");
}

int64_t eval_term_at(const Term& t, const Trace& rho, int k) {
  switch (t.kind()) {
    case TermKind::Var: {
      check_index(k, rho, t.name());
      const auto& values = lookup(rho.int_vars, t.name(), "integer");
      if (values.size() != size_t(rho.K) + 1)
        throw EvalError("symbol '" + t.name() + "' does not have K+1 values");
      return values[size_t(k)];
    }
    case TermKind::Const:
      return t.value();
    case TermKind::Next:
      return eval_term_at(t.arg(0), rho, k + 1);
    case TermKind::Prev:
      return eval_term_at(t.arg(0), rho, k - 1);
    case TermKind::Scale:
      return t.value() * eval_term_at(t.arg(0), rho, k);
    case TermKind::Sum:
      return eval_term_at(t.arg(0), rho, k) + eval_term_at(t.arg(1), rho, k);
    case TermKind::Min:
      return std::min(eval_term_at(t.arg(0), rho, k), eval_term_at(t.arg(1), rho, k));
    case TermKind::Max:
      return std::max(eval_term_at(t.arg(0), rho, k), eval_term_at(t.arg(1), rho, k));
  }
  return 0;
}

bool eval_at(const Formula& f, const Trace& rho, int k) {
  switch (f.kind()) {
    case FormulaKind::Const:
      return f.truth();
    case FormulaKind::Atom: {
      const int index = k + f.offset();
      check_index(index, rho, f.name());
      const auto& values = lookup(rho.bool_vars, f.name(), "boolean");
      if (values.size() != size_t(rho.K) + 1)
        throw EvalError("symbol '" + f.name() + "' does not have K+1 values");
      return values[size_t(index)];
    }
    case FormulaKind::Rel: {
      const Relation& r = f.relation();
      const int64_t a = eval_term_at(r.lhs, rho, k);
      const int64_t b = eval_term_at(r.rhs, rho, k);
      switch (r.op) {
        case RelOp::Eq: return a == b;
        case RelOp::Lt: return a < b;
        case RelOp::Le: return a <= b;
        case RelOp::Gt: return a > b;
        case RelOp::Ge: return a >= b;
        case RelOp::Ne: return a != b;
      }
      return false;
    }
    case FormulaKind::Not:
      return !eval_at(f.arg(0), rho, k);
    case FormulaKind::And:
      for (const Formula& a : f.args())
        if (!eval_at(a, rho, k)) return false;
      return true;
    case FormulaKind::Or:
      for (const Formula& a : f.args())
        if (eval_at(a, rho, k)) return true;
      return false;
    case FormulaKind::Implies:
      return !eval_at(f.arg(0), rho, k) || eval_at(f.arg(1), rho, k);
    case FormulaKind::Next:
      return k < rho.K && eval_at(f.arg(0), rho, k + 1);
    case FormulaKind::Prev:
      return k > 0 && eval_at(f.arg(0), rho, k - 1);
    case FormulaKind::Until:
      for (int i = k; i <= rho.K; ++i) {
        if (eval_at(f.arg(1), rho, i)) return true;
        if (!eval_at(f.arg(0), rho, i)) return false;
      }
      return false;
    case FormulaKind::Since:
      for (int i = k; i >= 0; --i) {
        if (eval_at(f.arg(1), rho, i)) return true;
        if (!eval_at(f.arg(0), rho, i)) return false;
      }
      return false;
    case FormulaKind::Eventually:
      for (int i = k; i <= rho.K; ++i)
        if (eval_at(f.arg(0), rho, i)) return true;
      return false;
    case FormulaKind::Always:
      for (int i = k; i <= rho.K; ++i)
        if (!eval_at(f.arg(0), rho, i)) return false;
      return true;
    case FormulaKind::Last:
      return eval_at(f.arg(0), rho, rho.K);
  }
  return false;
}

}  // namespace

bool eval(const Formula& f, const Trace& rho, int k) {
  if (rho.K < 0) throw EvalError("trace length K must be >= 0");
  if (k < 0 || k > rho.K)
    throw EvalError("instant " + std::to_string(k) + " outside [0, " + std::to_string(rho.K) + "]");
  return eval_at(f, rho, k);
}

int64_t eval_term(const Term& t, const Trace& rho, int k) { return eval_term_at(t, rho, k); }

// --- Symbols ----------------------------------------------------------------

namespace {

using SymbolKey = std::pair<std::string, SymbolSort>;

void merge(std::map<SymbolKey, std::pair<int, int>>& out, const SymbolKey& key, int lo, int hi) {
  auto [it, inserted] = out.try_emplace(key, lo, hi);
  if (!inserted) {
    it->second.first = std::min(it->second.first, lo);
    it->second.second = std::max(it->second.second, hi);
  }
}

void collect_term(const Term& t, int shift, std::map<SymbolKey, std::pair<int, int>>& out) {
  switch (t.kind()) {
    case TermKind::Var:
      merge(out, {t.name(), SymbolSort::Int}, shift, shift);
      return;
    case TermKind::Const:
      return;
    case TermKind::Next:
      collect_term(t.arg(0), shift + 1, out);
      return;
    case TermKind::Prev:
      collect_term(t.arg(0), shift - 1, out);
      return;
    default:
      for (size_t i = 0; i < t.arity(); ++i) collect_term(t.arg(i), shift, out);
  }
}

void collect_formula(const Formula& f, std::map<SymbolKey, std::pair<int, int>>& out) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      merge(out, {f.name(), SymbolSort::Bool}, f.offset(), f.offset());
      return;
    case FormulaKind::Rel:
      collect_term(f.relation().lhs, 0, out);
      collect_term(f.relation().rhs, 0, out);
      return;
    default:
      for (const Formula& a : f.args()) collect_formula(a, out);
  }
}

}  // namespace

std::vector<SymbolUse> collect_symbols(const Formula& f) {
  std::map<SymbolKey, std::pair<int, int>> uses;
  collect_formula(f, uses);
  std::vector<SymbolUse> out;
  out.reserve(uses.size());
  for (const auto& [key, range] : uses)
    out.push_back(SymbolUse{key.first, key.second, range.first, range.second});
  return out;
}

std::pair<int, int> term_offsets(const Term& t) {
  switch (t.kind()) {
    case TermKind::Var:
      return {0, 0};
    case TermKind::Const:
      return {std::numeric_limits<int>::max(), std::numeric_limits<int>::min()};
    case TermKind::Next: {
      auto [lo, hi] = term_offsets(t.arg(0));
      return lo > hi ? std::pair{lo, hi} : std::pair{lo + 1, hi + 1};
    }
    case TermKind::Prev: {
      auto [lo, hi] = term_offsets(t.arg(0));
      return lo > hi ? std::pair{lo, hi} : std::pair{lo - 1, hi - 1};
    }
    default: {
      int lo = std::numeric_limits<int>::max();
      int hi = std::numeric_limits<int>::min();
      for (size_t i = 0; i < t.arity(); ++i) {
        auto [a, b] = term_offsets(t.arg(i));
        lo = std::min(lo, a);
        hi = std::max(hi, b);
      }
      return {lo, hi};
    }
  }
}

}  // namespace cosmop::logic
