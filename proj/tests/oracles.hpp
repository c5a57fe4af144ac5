#pragma once
// Reference implementations the library is checked against. They share no
// code with the library beyond the AST types and compute their answers by a
// different route: formulas are evaluated bottom-up over the whole trace,
// geometry by a direct box-overlap test.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "cosmop/logic.hpp"

namespace oracle {

using cosmop::logic::Formula;
using cosmop::logic::FormulaKind;
using cosmop::logic::RelOp;
using cosmop::logic::Term;
using cosmop::logic::TermKind;
using cosmop::logic::Trace;

// Term values at every instant; nullopt where a shift leaves the trace.
inline std::vector<std::optional<int64_t>> term_table(const Term& t, const Trace& rho) {
  const int n = rho.K + 1;
  std::vector<std::optional<int64_t>> out(static_cast<size_t>(n));
  switch (t.kind()) {
    case TermKind::Var: {
      const auto& v = rho.int_vars.at(t.name());
      for (int k = 0; k < n; ++k) out[size_t(k)] = v.at(size_t(k));
      break;
    }
    case TermKind::Const:
      for (auto& o : out) o = t.value();
      break;
    case TermKind::Next: {
      auto a = term_table(t.arg(0), rho);
      for (int k = 0; k + 1 < n; ++k) out[size_t(k)] = a[size_t(k + 1)];
      break;
    }
    case TermKind::Prev: {
      auto a = term_table(t.arg(0), rho);
      for (int k = 1; k < n; ++k) out[size_t(k)] = a[size_t(k - 1)];
      break;
    }
    case TermKind::Scale: {
      auto a = term_table(t.arg(0), rho);
      for (int k = 0; k < n; ++k)
        if (a[size_t(k)]) out[size_t(k)] = t.value() * *a[size_t(k)];
      break;
    }
    case TermKind::Sum:
    case TermKind::Min:
    case TermKind::Max: {
      auto a = term_table(t.arg(0), rho), b = term_table(t.arg(1), rho);
      for (int k = 0; k < n; ++k) {
        if (!a[size_t(k)] || !b[size_t(k)]) continue;
        const int64_t x = *a[size_t(k)], y = *b[size_t(k)];
        out[size_t(k)] = t.kind() == TermKind::Sum ? x + y
                         : t.kind() == TermKind::Min ? std::min(x, y)
                                                     : std::max(x, y);
      }
      break;
    }
  }
  return out;
}

// Three-valued truth per instant (nullopt = undefined because a term left the
// trace). Connectives are Kleene-strong, so a guard that is false makes the
// whole implication true even when its body is undefined.
using Table = std::vector<std::optional<bool>>;

inline std::optional<bool> k_not(std::optional<bool> a) {
  if (!a) return std::nullopt;
  return !*a;
}
inline std::optional<bool> k_and(std::optional<bool> a, std::optional<bool> b) {
  if ((a && !*a) || (b && !*b)) return false;
  if (!a || !b) return std::nullopt;
  return true;
}
inline std::optional<bool> k_or(std::optional<bool> a, std::optional<bool> b) {
  return k_not(k_and(k_not(a), k_not(b)));
}

inline Table table(const Formula& f, const Trace& rho) {
  const int n = rho.K + 1;
  Table out(static_cast<size_t>(n));
  switch (f.kind()) {
    case FormulaKind::Const:
      for (auto& o : out) o = f.truth();
      break;
    case FormulaKind::Atom: {
      const auto& v = rho.bool_vars.at(f.name());
      for (int k = 0; k < n; ++k) {
        const int i = k + f.offset();
        if (i >= 0 && i < n) out[size_t(k)] = bool(v.at(size_t(i)));
      }
      break;
    }
    case FormulaKind::Rel: {
      const auto& r = f.relation();
      auto a = term_table(r.lhs, rho), b = term_table(r.rhs, rho);
      for (int k = 0; k < n; ++k) {
        if (!a[size_t(k)] || !b[size_t(k)]) continue;
        const int64_t x = *a[size_t(k)], y = *b[size_t(k)];
        switch (r.op) {
          case RelOp::Eq: out[size_t(k)] = x == y; break;
          case RelOp::Ne: out[size_t(k)] = x != y; break;
          case RelOp::Lt: out[size_t(k)] = x < y; break;
          case RelOp::Le: out[size_t(k)] = x <= y; break;
          case RelOp::Gt: out[size_t(k)] = x > y; break;
          case RelOp::Ge: out[size_t(k)] = x >= y; break;
        }
      }
      break;
    }
    case FormulaKind::Not: {
      auto a = table(f.arg(0), rho);
      for (int k = 0; k < n; ++k) out[size_t(k)] = k_not(a[size_t(k)]);
      break;
    }
    case FormulaKind::And:
    case FormulaKind::Or: {
      const bool is_and = f.kind() == FormulaKind::And;
      for (auto& o : out) o = is_and;
      for (const Formula& g : f.args()) {
        auto a = table(g, rho);
        for (int k = 0; k < n; ++k)
          out[size_t(k)] = is_and ? k_and(out[size_t(k)], a[size_t(k)])
                                  : k_or(out[size_t(k)], a[size_t(k)]);
      }
      break;
    }
    case FormulaKind::Implies: {
      auto a = table(f.arg(0), rho), b = table(f.arg(1), rho);
      for (int k = 0; k < n; ++k) out[size_t(k)] = k_or(k_not(a[size_t(k)]), b[size_t(k)]);
      break;
    }
    case FormulaKind::Next: {
      auto a = table(f.arg(0), rho);
      for (int k = 0; k < n; ++k) out[size_t(k)] = k + 1 < n ? a[size_t(k + 1)] : false;
      break;
    }
    case FormulaKind::Prev: {
      auto a = table(f.arg(0), rho);
      for (int k = 0; k < n; ++k) out[size_t(k)] = k > 0 ? a[size_t(k - 1)] : false;
      break;
    }
    case FormulaKind::Until: {
      // a U b at k = b(k) or (a(k) and (a U b)(k+1)), with false past K.
      auto a = table(f.arg(0), rho), b = table(f.arg(1), rho);
      std::optional<bool> later = false;
      for (int k = n - 1; k >= 0; --k) {
        out[size_t(k)] = k_or(b[size_t(k)], k_and(a[size_t(k)], later));
        later = out[size_t(k)];
      }
      break;
    }
    case FormulaKind::Since: {
      auto a = table(f.arg(0), rho), b = table(f.arg(1), rho);
      std::optional<bool> earlier = false;
      for (int k = 0; k < n; ++k) {
        out[size_t(k)] = k_or(b[size_t(k)], k_and(a[size_t(k)], earlier));
        earlier = out[size_t(k)];
      }
      break;
    }
    case FormulaKind::Eventually: {
      auto a = table(f.arg(0), rho);
      std::optional<bool> later = false;
      for (int k = n - 1; k >= 0; --k) later = out[size_t(k)] = k_or(a[size_t(k)], later);
      break;
    }
    case FormulaKind::Always: {
      auto a = table(f.arg(0), rho);
      std::optional<bool> later = true;
      for (int k = n - 1; k >= 0; --k) later = out[size_t(k)] = k_and(a[size_t(k)], later);
      break;
    }
    case FormulaKind::Last: {
      auto a = table(f.arg(0), rho);
      for (auto& o : out) o = a[size_t(n - 1)];
      break;
    }
  }
  return out;
}

// Truth at instant k; throws when the formula is undefined there.
inline bool holds(const Formula& f, const Trace& rho, int k = 0) {
  auto t = table(f, rho);
  if (!t.at(size_t(k))) throw std::logic_error("oracle: formula undefined at instant");
  return *t[size_t(k)];
}

// Symbol signature for exhaustive enumeration.
struct Alphabet {
  std::vector<std::string> bools;
  std::vector<std::string> ints;
  int64_t int_lo = 0;
  int64_t int_hi = 2;
};

// Calls `visit` on every length-K trace over the alphabet until it returns
// true; returns whether it did. The number of traces is
// (2^|bools| * (hi-lo+1)^|ints|)^(K+1).
inline bool enumerate_traces(const Alphabet& a, int K,
                             const std::function<bool(const Trace&)>& visit) {
  Trace rho;
  rho.K = K;
  for (const auto& b : a.bools) rho.bool_vars[b] = std::vector<bool>(size_t(K) + 1, false);
  for (const auto& i : a.ints) rho.int_vars[i] = std::vector<int64_t>(size_t(K) + 1, a.int_lo);
  // Odometer over every (symbol, instant) cell.
  struct Cell {
    bool is_bool;
    std::string name;
    size_t k;
  };
  std::vector<Cell> cells;
  for (int k = 0; k <= K; ++k) {
    for (const auto& b : a.bools) cells.push_back({true, b, size_t(k)});
    for (const auto& i : a.ints) cells.push_back({false, i, size_t(k)});
  }
  while (true) {
    if (visit(rho)) return true;
    size_t c = 0;
    for (; c < cells.size(); ++c) {
      const Cell& cell = cells[c];
      if (cell.is_bool) {
        auto ref = rho.bool_vars[cell.name][cell.k];
        if (!ref) {
          ref = true;
          break;
        }
        ref = false;
      } else {
        int64_t& v = rho.int_vars[cell.name][cell.k];
        if (v < a.int_hi) {
          ++v;
          break;
        }
        v = a.int_lo;
      }
    }
    if (c == cells.size()) return false;
  }
}

// Closed box in millimetres (half-millimetre values allowed).
struct Box {
  double xmin, xmax, ymin, ymax;
};

// The robot sweeping from (x0, y0) to (x1, y1) stays clear of `obstacle`
// when the endpoints' bounding box, grown by `margin` on every side, shares no
// interior point with it.
inline bool corridor_clear(double x0, double y0, double x1, double y1, double margin,
                           const Box& obstacle) {
  const Box swept{std::min(x0, x1) - margin, std::max(x0, x1) + margin,
                  std::min(y0, y1) - margin, std::max(y0, y1) + margin};
  const bool overlap = swept.xmax > obstacle.xmin && obstacle.xmax > swept.xmin &&
                       swept.ymax > obstacle.ymin && obstacle.ymax > swept.ymin;
  return !overlap;
}

// Random CLTLB(D) formulas over a fixed alphabet. Shifted terms and shifted
// atoms only appear under a guard (X true / Y true) so every generated
// formula is defined at every instant.
class FormulaGen {
 public:
  FormulaGen(std::mt19937_64& rng, Alphabet alphabet) : rng_(rng), a_(std::move(alphabet)) {}

  Formula formula(int depth) {
    using namespace cosmop::logic;
    if (depth <= 0 || pick(4) == 0) return leaf();
    switch (pick(13)) {
      case 0: return !formula(depth - 1);
      case 1: return land({formula(depth - 1), formula(depth - 1)});
      case 2: return lor({formula(depth - 1), formula(depth - 1)});
      case 3: return implies(formula(depth - 1), formula(depth - 1));
      case 4: return next(formula(depth - 1));
      case 5: return prev(formula(depth - 1));
      case 6: return until(formula(depth - 1), formula(depth - 1));
      case 7: return since(formula(depth - 1), formula(depth - 1));
      case 8: return eventually(formula(depth - 1));
      case 9: return always(formula(depth - 1));
      case 10: return last(formula(depth - 1));
      case 11: return land({formula(depth - 1), formula(depth - 1), formula(depth - 1)});
      default: return !until(formula(depth - 1), formula(depth - 1));
    }
  }

  Term term(int depth) {
    using namespace cosmop::logic;
    if (a_.ints.empty()) return constant(range(-1, 3));
    if (depth <= 0 || pick(3) == 0)
      return pick(3) == 0 ? constant(range(-1, 3)) : var(a_.ints[size_t(pick(int(a_.ints.size())))]);
    switch (pick(4)) {
      case 0: return sum(term(depth - 1), term(depth - 1));
      case 1: return scale(range(-2, 2), term(depth - 1));
      case 2: return min(term(depth - 1), term(depth - 1));
      default: return max(term(depth - 1), term(depth - 1));
    }
  }

 private:
  Formula leaf() {
    using namespace cosmop::logic;
    const int choice = pick(8);
    if (choice == 0) return truth(pick(2) == 0);
    if ((choice <= 2 || a_.ints.empty()) && !a_.bools.empty()) {
      const std::string& b = a_.bools[size_t(pick(int(a_.bools.size())))];
      if (choice == 2) return implies(next(truth(true)), atom(b, 1));
      return atom(b);
    }
    if (a_.ints.empty()) return truth(pick(2) == 0);
    Formula r = rel(term(1), RelOp(pick(6)), term(1));
    if (choice == 6) {
      Formula shifted = rel(next(term(0)), RelOp(pick(6)), term(1));
      return implies(next(truth(true)), shifted);
    }
    if (choice == 7) {
      Formula shifted = rel(prev(term(0)), RelOp(pick(6)), term(1));
      return implies(prev(truth(true)), shifted);
    }
    return r;
  }

  int pick(int n) { return int(std::uniform_int_distribution<int>(0, n - 1)(rng_)); }
  int64_t range(int64_t lo, int64_t hi) {
    return std::uniform_int_distribution<int64_t>(lo, hi)(rng_);
  }

  std::mt19937_64& rng_;
  Alphabet a_;
};

inline Trace random_trace(std::mt19937_64& rng, const Alphabet& a, int K) {
  Trace rho;
  rho.K = K;
  std::uniform_int_distribution<int64_t> iv(a.int_lo, a.int_hi);
  std::bernoulli_distribution bv(0.5);
  for (const auto& b : a.bools) {
    auto& v = rho.bool_vars[b];
    for (int k = 0; k <= K; ++k) v.push_back(bv(rng));
  }
  for (const auto& i : a.ints) {
    auto& v = rho.int_vars[i];
    for (int k = 0; k <= K; ++k) v.push_back(iv(rng));
  }
  return rho;
}

}  // namespace oracle
