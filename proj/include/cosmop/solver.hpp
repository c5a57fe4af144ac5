#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cosmop/encoder.hpp"
#include "cosmop/smt_term.hpp"

namespace cosmop::solver {

enum class Status { Sat, Unsat, Unknown, Timeout };

struct SatResult {
  Status status = Status::Unknown;
  smt::Model model;    // total over declared variables when Sat
  std::string reason;  // diagnostic for Unknown / Timeout
};

const char* to_string(Status s);

enum class SessionState { Open, CheckedSat, CheckedUnsat, Closed };

// One solver query. Variables are declared, assertions conjoined, then check
// is called exactly once.
class Session {
 public:
  virtual ~Session() = default;

  // Returns the variable term. Throws SolverError on a duplicate name or when
  // the session is no longer open.
  smt::Term declare(const std::string& name, smt::Sort sort);

  // Throws SolverError if the term is not boolean, references an undeclared
  // variable, or the session is no longer open.
  void assert_term(const smt::Term& term);

  SatResult check(std::chrono::milliseconds timeout);

  SessionState state() const { return state_; }
  const std::map<std::string, smt::Sort>& declared() const { return declared_; }
  const std::vector<smt::Term>& assertions() const { return assertions_; }

  // Declares and asserts a whole encoding.
  void load(const encode::AssertionSet& set);

 protected:
  virtual SatResult run(std::chrono::milliseconds timeout) = 0;

 private:
  void require_open(const char* what) const;

  SessionState state_ = SessionState::Open;
  std::map<std::string, smt::Sort> declared_;
  std::vector<std::string> order_;
  std::vector<smt::Term> assertions_;

 protected:
  const std::vector<std::string>& declaration_order() const { return order_; }
};

// `(set-option :name value)` sent ahead of the script.
using Option = std::pair<std::string, std::string>;

// Drives an SMT-LIB2 solver executable over stdin/stdout pipes.
class Smtlib2ProcessSession : public Session {
 public:
  // `command` is split on whitespace, e.g. "z3 -in".
  explicit Smtlib2ProcessSession(std::string command, std::vector<Option> options = {});

  // The script sent before (check-sat).
  std::string script() const;

 protected:
  SatResult run(std::chrono::milliseconds timeout) override;

 private:
  std::string command_;
  std::vector<Option> options_;
};

using SessionFactory = std::function<std::unique_ptr<Session>()>;

SessionFactory process_session_factory(std::string command, std::vector<Option> options = {});

// Solver command from the environment (COSMOP_SMT_CMD), else `fallback`.
std::string resolve_solver_command(const std::string& fallback = "z3 -in");

// Parses solver output following (get-model): `(define-fun name () Sort v)`
// forms, optionally wrapped in `(model ...)`. Negative literals may be given
// as `(- N)`.
smt::Model parse_model(const std::string& text);

// True iff every assertion evaluates to true under the model.
bool model_satisfies(const Session& session, const smt::Model& model, std::string* failed = nullptr);

}  // namespace cosmop::solver
