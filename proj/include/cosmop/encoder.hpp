#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cosmop/logic.hpp"
#include "cosmop/smt_term.hpp"

namespace cosmop::encode {

struct Declaration {
  std::string name;
  smt::Sort sort;
};

struct AssertionSet {
  std::vector<Declaration> declarations;
  std::vector<smt::Term> assertions;
};

// Array encoding of a length-K trace: every state symbol s becomes the solver
// variables s@0 .. s@K. Auxiliary witness indices for Until/Eventually/Since
// are fresh per encoded occurrence.
class EncodingContext {
 public:
  // With `split_minmax`, relations that bound a min/max term are expanded
  // into the equivalent conjunction/disjunction instead of going through ite.
  explicit EncodingContext(int K, bool split_minmax = true);

  int K() const { return K_; }
  bool split_minmax() const { return split_minmax_; }

  // Solver variable holding `symbol` at instant k. The first reference to a
  // symbol declares its whole array.
  smt::Term state_var(const std::string& symbol, logic::SymbolSort sort, int k);

  // Fresh integer constrained to [lo, hi]; the range constraint is queued as
  // a side assertion.
  smt::Term fresh_index(int lo, int hi);

  static std::string var_name(const std::string& symbol, int k);

  const std::map<std::string, logic::SymbolSort>& symbols() const { return symbols_; }
  const std::vector<Declaration>& declarations() const { return declarations_; }

  // Side assertions produced since the last call.
  std::vector<smt::Term> take_side_assertions();

 private:
  int K_;
  bool split_minmax_;
  std::map<std::string, logic::SymbolSort> symbols_;
  std::vector<Declaration> declarations_;
  std::vector<smt::Term> side_;
  int aux_counter_ = 0;
};

// Assertions satisfiable iff some length-K trace satisfies f at instant 0.
// Top-level conjunctions and top-level Always are split into one assertion
// per conjunct / instant.
AssertionSet encode(const logic::Formula& f, EncodingContext& ctx);

// Encodes `f` at instant k as a single boolean term.
smt::Term encode_at(const logic::Formula& f, int k, EncodingContext& ctx);

smt::Term encode_term(const logic::Term& t, int k, EncodingContext& ctx);

// Rebuilds the trace from a solver model. Every declared state variable must
// be assigned.
logic::Trace decode_model(const smt::Model& model, const EncodingContext& ctx);

}  // namespace cosmop::encode
