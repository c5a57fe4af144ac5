#include "cosmop/encoder.hpp"

#include "cosmop/error.hpp"

namespace cosmop::encode {

using logic::Formula;
using logic::FormulaKind;
using logic::SymbolSort;
using logic::TermKind;

EncodingContext::EncodingContext(int K, bool split_minmax) : K_(K), split_minmax_(split_minmax) {
  if (K < 0) throw EncodeError("trace length K must be >= 0");
}

std::string EncodingContext::var_name(const std::string& symbol, int k) {
  return symbol + "@" + std::to_string(k);
}

smt::Term EncodingContext::state_var(const std::string& symbol, SymbolSort sort, int k) {
  const smt::Sort smt_sort = sort == SymbolSort::Int ? smt::Sort::Int : smt::Sort::Bool;
  auto [it, inserted] = symbols_.try_emplace(symbol, sort);
  if (inserted) {
    for (int i = 0; i <= K_; ++i) declarations_.push_back(Declaration{var_name(symbol, i), smt_sort});
  } else if (it->second != sort) {
    throw EncodeError("symbol '" + symbol + "' used both as integer and as proposition");
  }
  if (k < 0 || k > K_)
    throw EncodeError("index " + std::to_string(k) + " of '" + symbol + "' outside [0, " +
                      std::to_string(K_) + "]");
  return smt::var(var_name(symbol, k), smt_sort);
}

smt::Term EncodingContext::fresh_index(int lo, int hi) {
  std::string name = "aux!j" + std::to_string(aux_counter_++);
  declarations_.push_back(Declaration{name, smt::Sort::Int});
  smt::Term j = smt::var(std::move(name), smt::Sort::Int);
  side_.push_back(smt::land({smt::le(smt::int_const(lo), j), smt::le(j, smt::int_const(hi))}));
  return j;
}

std::vector<smt::Term> EncodingContext::take_side_assertions() {
  std::vector<smt::Term> out;
  out.swap(side_);
  return out;
}

smt::Term encode_term(const logic::Term& t, int k, EncodingContext& ctx) {
  switch (t.kind()) {
    case TermKind::Var:
      return ctx.state_var(t.name(), SymbolSort::Int, k);
    case TermKind::Const:
      return smt::int_const(t.value());
    case TermKind::Next:
      return encode_term(t.arg(0), k + 1, ctx);
    case TermKind::Prev:
      return encode_term(t.arg(0), k - 1, ctx);
    case TermKind::Scale:
      return smt::mul(t.value(), encode_term(t.arg(0), k, ctx));
    case TermKind::Sum:
      return smt::add({encode_term(t.arg(0), k, ctx), encode_term(t.arg(1), k, ctx)});
    case TermKind::Min: {
      smt::Term a = encode_term(t.arg(0), k, ctx);
      smt::Term b = encode_term(t.arg(1), k, ctx);
      return smt::ite(smt::lt(a, b), a, b);
    }
    case TermKind::Max: {
      smt::Term a = encode_term(t.arg(0), k, ctx);
      smt::Term b = encode_term(t.arg(1), k, ctx);
      return smt::ite(smt::gt(a, b), a, b);
    }
  }
  throw EncodeError("unhandled term");
}

namespace {

// Polarity of a subformula occurrence. The witness-index encodings of
// Until/Eventually/Since are only sound where the occurrence is positive; the
// other polarities use the explicit disjunctive expansion.
enum class Polarity { Pos, Neg, Both };

Polarity flip(Polarity p) {
  switch (p) {
    case Polarity::Pos: return Polarity::Neg;
    case Polarity::Neg: return Polarity::Pos;
    case Polarity::Both: return Polarity::Both;
  }
  return p;
}

smt::Term enc(const Formula& f, int k, Polarity pol, EncodingContext& ctx);

smt::Term compare(smt::Term a, logic::RelOp op, smt::Term b) {
  switch (op) {
    case logic::RelOp::Eq: return smt::eq(a, b);
    case logic::RelOp::Lt: return smt::lt(a, b);
    case logic::RelOp::Le: return smt::le(a, b);
    case logic::RelOp::Gt: return smt::gt(a, b);
    case logic::RelOp::Ge: return smt::ge(a, b);
    case logic::RelOp::Ne: return smt::lnot(smt::eq(a, b));
  }
  throw EncodeError("unhandled relation");
}

logic::RelOp mirrored(logic::RelOp op) {
  switch (op) {
    case logic::RelOp::Lt: return logic::RelOp::Gt;
    case logic::RelOp::Le: return logic::RelOp::Ge;
    case logic::RelOp::Gt: return logic::RelOp::Lt;
    case logic::RelOp::Ge: return logic::RelOp::Le;
    default: return op;
  }
}

// max(a, b) <= c  iff  a <= c & b <= c, and the three sibling cases. Keeps
// ite out of the corridor constraints, which the solver handles far better.
smt::Term split_minmax(const logic::Term& lhs, logic::RelOp op, const logic::Term& rhs, int k,
                       EncodingContext& ctx) {
  using logic::RelOp;
  const bool upper = op == RelOp::Le || op == RelOp::Lt;
  const bool lower = op == RelOp::Ge || op == RelOp::Gt;
  const bool is_max = lhs.kind() == TermKind::Max, is_min = lhs.kind() == TermKind::Min;
  if ((is_max || is_min) && (upper || lower)) {
    smt::Term a = split_minmax(lhs.arg(0), op, rhs, k, ctx);
    smt::Term b = split_minmax(lhs.arg(1), op, rhs, k, ctx);
    if ((is_max && upper) || (is_min && lower)) return smt::land({a, b});
    return smt::lor({a, b});
  }
  if ((rhs.kind() == TermKind::Max || rhs.kind() == TermKind::Min) && (upper || lower))
    return split_minmax(rhs, mirrored(op), lhs, k, ctx);
  return compare(encode_term(lhs, k, ctx), op, encode_term(rhs, k, ctx));
}

smt::Term enc_relation(const Formula& f, int k, EncodingContext& ctx) {
  const logic::Relation& r = f.relation();
  try {
    if (ctx.split_minmax()) return split_minmax(r.lhs, r.op, r.rhs, k, ctx);
    return compare(encode_term(r.lhs, k, ctx), r.op, encode_term(r.rhs, k, ctx));
  } catch (const EncodeError& e) {
    throw EncodeError(std::string(e.what()) + " in subformula '" + logic::to_string(f) +
                      "' at instant " + std::to_string(k));
  }
}

// lhs U rhs asserted at k0: some witness i in [k0, K] with rhs at i and lhs on
// [k0, i).
smt::Term enc_until(const Formula& lhs, const Formula& rhs, int k0, Polarity pol,
                    EncodingContext& ctx) {
  const int K = ctx.K();
  if (pol == Polarity::Pos) {
    smt::Term j = ctx.fresh_index(k0, K);
    std::vector<smt::Term> conj;
    for (int k = k0; k <= K; ++k) {
      smt::Term kk = smt::int_const(k);
      conj.push_back(smt::implies(smt::lt(kk, j), enc(lhs, k, pol, ctx)));
      conj.push_back(smt::implies(smt::eq(kk, j), enc(rhs, k, pol, ctx)));
    }
    return smt::land(std::move(conj));
  }
  std::vector<smt::Term> disj;
  for (int i = k0; i <= K; ++i) {
    std::vector<smt::Term> conj{enc(rhs, i, pol, ctx)};
    for (int m = k0; m < i; ++m) conj.push_back(enc(lhs, m, pol, ctx));
    disj.push_back(smt::land(std::move(conj)));
  }
  return smt::lor(std::move(disj));
}

// lhs S rhs asserted at k0: some witness i in [0, k0] with rhs at i and lhs on
// (i, k0].
smt::Term enc_since(const Formula& lhs, const Formula& rhs, int k0, Polarity pol,
                    EncodingContext& ctx) {
  if (pol == Polarity::Pos) {
    smt::Term j = ctx.fresh_index(0, k0);
    std::vector<smt::Term> conj;
    for (int k = 0; k <= k0; ++k) {
      smt::Term kk = smt::int_const(k);
      conj.push_back(smt::implies(smt::gt(kk, j), enc(lhs, k, pol, ctx)));
      conj.push_back(smt::implies(smt::eq(kk, j), enc(rhs, k, pol, ctx)));
    }
    return smt::land(std::move(conj));
  }
  std::vector<smt::Term> disj;
  for (int i = 0; i <= k0; ++i) {
    std::vector<smt::Term> conj{enc(rhs, i, pol, ctx)};
    for (int m = i + 1; m <= k0; ++m) conj.push_back(enc(lhs, m, pol, ctx));
    disj.push_back(smt::land(std::move(conj)));
  }
  return smt::lor(std::move(disj));
}

smt::Term enc(const Formula& f, int k, Polarity pol, EncodingContext& ctx) {
  const int K = ctx.K();
  switch (f.kind()) {
    case FormulaKind::Const:
      return smt::bool_const(f.truth());
    case FormulaKind::Atom: {
      const int index = k + f.offset();
      try {
        return ctx.state_var(f.name(), SymbolSort::Bool, index);
      } catch (const EncodeError& e) {
        throw EncodeError(std::string(e.what()) + " in subformula '" + logic::to_string(f) + "'");
      }
    }
    case FormulaKind::Rel:
      return enc_relation(f, k, ctx);
    case FormulaKind::Not:
      return smt::lnot(enc(f.arg(0), k, flip(pol), ctx));
    case FormulaKind::And: {
      std::vector<smt::Term> parts;
      for (const Formula& a : f.args()) {
        smt::Term t = enc(a, k, pol, ctx);
        if (t.is_false()) return t;
        parts.push_back(std::move(t));
      }
      return smt::land(std::move(parts));
    }
    case FormulaKind::Or: {
      std::vector<smt::Term> parts;
      for (const Formula& a : f.args()) {
        smt::Term t = enc(a, k, pol, ctx);
        if (t.is_true()) return t;
        parts.push_back(std::move(t));
      }
      return smt::lor(std::move(parts));
    }
    case FormulaKind::Implies: {
      smt::Term a = enc(f.arg(0), k, flip(pol), ctx);
      if (a.is_false()) return smt::bool_const(true);
      return smt::implies(a, enc(f.arg(1), k, pol, ctx));
    }
    case FormulaKind::Next:
      if (k >= K) return smt::bool_const(false);
      return enc(f.arg(0), k + 1, pol, ctx);
    case FormulaKind::Prev:
      if (k <= 0) return smt::bool_const(false);
      return enc(f.arg(0), k - 1, pol, ctx);
    case FormulaKind::Until:
      return enc_until(f.arg(0), f.arg(1), k, pol, ctx);
    case FormulaKind::Since:
      return enc_since(f.arg(0), f.arg(1), k, pol, ctx);
    case FormulaKind::Eventually: {
      if (pol == Polarity::Pos) {
        smt::Term j = ctx.fresh_index(k, K);
        std::vector<smt::Term> conj;
        for (int i = k; i <= K; ++i)
          conj.push_back(smt::implies(smt::eq(smt::int_const(i), j), enc(f.arg(0), i, pol, ctx)));
        return smt::land(std::move(conj));
      }
      std::vector<smt::Term> disj;
      for (int i = k; i <= K; ++i) disj.push_back(enc(f.arg(0), i, pol, ctx));
      return smt::lor(std::move(disj));
    }
    case FormulaKind::Always: {
      std::vector<smt::Term> conj;
      for (int i = k; i <= K; ++i) {
        smt::Term t = enc(f.arg(0), i, pol, ctx);
        if (t.is_false()) return t;
        conj.push_back(std::move(t));
      }
      return smt::land(std::move(conj));
    }
    case FormulaKind::Last:
      return enc(f.arg(0), K, pol, ctx);
  }
  throw EncodeError("unhandled formula");
}

void encode_top(const Formula& f, EncodingContext& ctx, std::vector<smt::Term>& out) {
  auto push = [&](smt::Term t) {
    if (!t.is_true()) out.push_back(std::move(t));
  };
  if (f.kind() == FormulaKind::And) {
    for (const Formula& a : f.args()) encode_top(a, ctx, out);
  } else if (f.kind() == FormulaKind::Always) {
    for (int k = 0; k <= ctx.K(); ++k) push(enc(f.arg(0), k, Polarity::Pos, ctx));
  } else {
    push(enc(f, 0, Polarity::Pos, ctx));
  }
}

}  // namespace

smt::Term encode_at(const Formula& f, int k, EncodingContext& ctx) {
  return enc(f, k, Polarity::Pos, ctx);
}

AssertionSet encode(const Formula& f, EncodingContext& ctx) {
  AssertionSet out;
  encode_top(f, ctx, out.assertions);
  for (smt::Term& side : ctx.take_side_assertions()) out.assertions.push_back(std::move(side));
  out.declarations = ctx.declarations();
  return out;
}

logic::Trace decode_model(const smt::Model& model, const EncodingContext& ctx) {
  logic::Trace rho;
  rho.K = ctx.K();
  for (const auto& [symbol, sort] : ctx.symbols()) {
    for (int k = 0; k <= rho.K; ++k) {
      const std::string name = EncodingContext::var_name(symbol, k);
      auto it = model.find(name);
      if (it == model.end()) throw SolverError("decode: model has no value for '" + name + "'");
      if (sort == SymbolSort::Int) {
        const auto* v = std::get_if<int64_t>(&it->second);
        if (!v) throw SolverError("decode: '" + name + "' is not an integer");
        rho.int_vars[symbol].push_back(*v);
      } else {
        const auto* v = std::get_if<bool>(&it->second);
        if (!v) throw SolverError("decode: '" + name + "' is not a boolean");
        rho.bool_vars[symbol].push_back(*v);
      }
    }
  }
  return rho;
}

}  // namespace cosmop::encode
