#include "cosmop/solver.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <sstream>

#include "cosmop/error.hpp"

extern char** environ;

namespace cosmop::solver {

const char* to_string(Status s) {
  switch (s) {
    case Status::Sat: return "sat";
    case Status::Unsat: return "unsat";
    case Status::Unknown: return "unknown";
    case Status::Timeout: return "timeout";
  }
  return "?";
}

// --- Session ----------------------------------------------------------------

void Session::require_open(const char* what) const {
  if (state_ != SessionState::Open)
    throw SolverError(std::string(what) + " on a session that has already been checked");
}

smt::Term Session::declare(const std::string& name, smt::Sort sort) {
  require_open("declare");
  if (name.empty() || name.find('|') != std::string::npos || name.find('\\') != std::string::npos)
    throw SolverError("invalid symbol name '" + name + "'");
  if (!declared_.emplace(name, sort).second)
    throw SolverError("duplicate declaration of '" + name + "'");
  order_.push_back(name);
  return smt::var(name, sort);
}

void Session::assert_term(const smt::Term& term) {
  require_open("assert");
  if (term.sort() != smt::Sort::Bool) throw SolverError("asserted term is not boolean");
  std::map<std::string, smt::Sort> vars;
  smt::collect_vars(term, vars);
  for (const auto& [name, sort] : vars) {
    auto it = declared_.find(name);
    if (it == declared_.end()) throw SolverError("undeclared variable '" + name + "'");
    if (it->second != sort) throw SolverError("variable '" + name + "' used with the wrong sort");
  }
  assertions_.push_back(term);
}

SatResult Session::check(std::chrono::milliseconds timeout) {
  require_open("check");
  SatResult result = run(timeout);
  if (result.status == Status::Sat) {
    for (const auto& [name, sort] : declared_) {
      if (!result.model.count(name))
        result.model.emplace(name, sort == smt::Sort::Int ? smt::Value{int64_t{0}} : smt::Value{false});
    }
    state_ = SessionState::CheckedSat;
  } else if (result.status == Status::Unsat) {
    state_ = SessionState::CheckedUnsat;
  } else {
    state_ = SessionState::Closed;
  }
  return result;
}

void Session::load(const encode::AssertionSet& set) {
  for (const encode::Declaration& d : set.declarations) declare(d.name, d.sort);
  for (const smt::Term& a : set.assertions) assert_term(a);
}

bool model_satisfies(const Session& session, const smt::Model& model, std::string* failed) {
  for (const smt::Term& a : session.assertions()) {
    if (!std::get<bool>(smt::evaluate(a, model))) {
      if (failed) *failed = smt::to_smtlib(a);
      return false;
    }
  }
  return true;
}

// --- S-expressions ----------------------------------------------------------

namespace {

struct SExpr {
  std::string atom;  // empty for lists
  std::vector<SExpr> list;
  bool is_list = false;
};

class SExprReader {
 public:
  explicit SExprReader(const std::string& text) : s_(text) {}

  bool at_end() {
    skip();
    return i_ >= s_.size();
  }

  SExpr read() {
    skip();
    if (i_ >= s_.size()) throw SolverError("unexpected end of solver output");
    if (s_[i_] == '(') {
      ++i_;
      SExpr e;
      e.is_list = true;
      for (;;) {
        skip();
        if (i_ >= s_.size()) throw SolverError("unbalanced parenthesis in solver output");
        if (s_[i_] == ')') {
          ++i_;
          return e;
        }
        e.list.push_back(read());
      }
    }
    if (s_[i_] == ')') throw SolverError("unexpected ')' in solver output");
    SExpr e;
    if (s_[i_] == '|') {
      const size_t end = s_.find('|', i_ + 1);
      if (end == std::string::npos) throw SolverError("unterminated quoted symbol");
      e.atom = s_.substr(i_ + 1, end - i_ - 1);
      i_ = end + 1;
      return e;
    }
    if (s_[i_] == '"') {
      size_t j = i_ + 1;
      while (j < s_.size()) {
        if (s_[j] == '"') {
          if (j + 1 < s_.size() && s_[j + 1] == '"') {
            j += 2;
            continue;
          }
          break;
        }
        ++j;
      }
      e.atom = s_.substr(i_, j + 1 - i_);
      i_ = j + 1;
      return e;
    }
    const size_t start = i_;
    while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != '(' &&
           s_[i_] != ')')
      ++i_;
    e.atom = s_.substr(start, i_ - start);
    return e;
  }

 private:
  void skip() {
    while (i_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[i_]))) {
        ++i_;
      } else if (s_[i_] == ';') {
        while (i_ < s_.size() && s_[i_] != '\n') ++i_;
      } else {
        break;
      }
    }
  }

  const std::string& s_;
  size_t i_ = 0;
};

bool parse_int_literal(const std::string& text, int64_t& out) {
  if (text.empty()) return false;
  for (char c : text)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  try {
    out = std::stoll(text);
  } catch (const std::out_of_range&) {
    throw SolverError("integer in model out of range: " + text);
  }
  return true;
}

smt::Value parse_value(const SExpr& e, const std::string& sort) {
  if (sort == "Bool") {
    if (!e.is_list && e.atom == "true") return true;
    if (!e.is_list && e.atom == "false") return false;
    throw SolverError("unsupported boolean model value");
  }
  if (sort != "Int") throw SolverError("unsupported sort '" + sort + "' in model");
  int64_t v = 0;
  if (!e.is_list && parse_int_literal(e.atom, v)) return v;
  if (e.is_list && e.list.size() == 2 && !e.list[0].is_list && e.list[0].atom == "-" &&
      !e.list[1].is_list && parse_int_literal(e.list[1].atom, v))
    return -v;
  throw SolverError("unsupported integer model value");
}

void collect_definitions(const SExpr& e, smt::Model& model) {
  if (!e.is_list) return;
  if (e.list.size() == 5 && !e.list[0].is_list && e.list[0].atom == "define-fun") {
    const SExpr& params = e.list[2];
    if (!params.is_list || !params.list.empty()) return;  // functions with arguments are ignored
    model[e.list[1].atom] = parse_value(e.list[4], e.list[3].atom);
    return;
  }
  for (const SExpr& child : e.list) collect_definitions(child, model);
}

}  // namespace

smt::Model parse_model(const std::string& text) {
  smt::Model model;
  SExprReader reader(text);
  while (!reader.at_end()) {
    SExpr e = reader.read();
    if (e.is_list && !e.list.empty() && !e.list[0].is_list && e.list[0].atom == "error")
      throw SolverError("solver reported an error: " + (e.list.size() > 1 ? e.list[1].atom : ""));
    collect_definitions(e, model);
  }
  return model;
}

// --- Process session --------------------------------------------------------

namespace {

using Clock = std::chrono::steady_clock;

std::vector<std::string> split_command(const std::string& command) {
  std::vector<std::string> argv;
  std::istringstream is(command);
  std::string word;
  while (is >> word) argv.push_back(word);
  return argv;
}

// Owns the pipes and pid of a running solver; kills it on destruction.
class ChildProcess {
 public:
  explicit ChildProcess(const std::vector<std::string>& argv) {
    int in_pipe[2];
    int out_pipe[2];
    if (pipe(in_pipe) != 0) throw SolverError(std::string("pipe: ") + std::strerror(errno));
    if (pipe(out_pipe) != 0) {
      close(in_pipe[0]);
      close(in_pipe[1]);
      throw SolverError(std::string("pipe: ") + std::strerror(errno));
    }
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
    posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDERR_FILENO);
    posix_spawn_file_actions_addclose(&actions, in_pipe[1]);
    posix_spawn_file_actions_addclose(&actions, out_pipe[0]);

    std::vector<char*> args;
    for (const std::string& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    const int rc = posix_spawnp(&pid_, args[0], &actions, nullptr, args.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    close(in_pipe[0]);
    close(out_pipe[1]);
    if (rc != 0) {
      close(in_pipe[1]);
      close(out_pipe[0]);
      pid_ = -1;
      spawn_error_ = "cannot start solver '" + argv[0] + "': " + std::strerror(rc);
      return;
    }
    to_child_ = in_pipe[1];
    from_child_ = out_pipe[0];
    fcntl(to_child_, F_SETFL, fcntl(to_child_, F_GETFL) | O_NONBLOCK);
    fcntl(from_child_, F_SETFL, fcntl(from_child_, F_GETFL) | O_NONBLOCK);
  }

  ~ChildProcess() {
    close_input();
    if (from_child_ >= 0) close(from_child_);
    if (pid_ > 0) {
      kill(pid_, SIGKILL);
      waitpid(pid_, nullptr, 0);
    }
  }

  ChildProcess(const ChildProcess&) = delete;
  ChildProcess& operator=(const ChildProcess&) = delete;

  const std::string& spawn_error() const { return spawn_error_; }

  void close_input() {
    if (to_child_ >= 0) {
      close(to_child_);
      to_child_ = -1;
    }
  }

  // Pumps `pending` into the child and its output into `output` until
  // `done(output)` holds, EOF, or the deadline. Returns false on deadline.
  template <class Done>
  bool pump(std::string pending, std::string& output, Clock::time_point deadline, Done done,
            bool close_after_write) {
    size_t written = 0;
    for (;;) {
      if (written == pending.size() && close_after_write) close_input();
      if (done(output)) return true;
      const auto now = Clock::now();
      if (now >= deadline) return false;
      const int wait_ms =
          int(std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count()) + 1;

      pollfd fds[2];
      nfds_t n = 0;
      fds[n++] = pollfd{from_child_, POLLIN, 0};
      const bool want_write = to_child_ >= 0 && written < pending.size();
      if (want_write) fds[n++] = pollfd{to_child_, POLLOUT, 0};
      const int rc = poll(fds, n, wait_ms);
      if (rc < 0) {
        if (errno == EINTR) continue;
        throw SolverError(std::string("poll: ") + std::strerror(errno));
      }
      if (fds[0].revents & (POLLIN | POLLHUP | POLLERR)) {
        char buf[8192];
        const ssize_t got = read(from_child_, buf, sizeof buf);
        if (got > 0) {
          output.append(buf, size_t(got));
        } else if (got == 0) {
          eof_ = true;
          return true;
        } else if (errno != EAGAIN && errno != EINTR) {
          throw SolverError(std::string("read: ") + std::strerror(errno));
        }
      }
      if (want_write && (fds[1].revents & (POLLOUT | POLLERR | POLLHUP))) {
        const ssize_t put = write_no_sigpipe(pending.data() + written, pending.size() - written);
        if (put > 0) {
          written += size_t(put);
        } else if (put < 0 && errno != EAGAIN && errno != EINTR) {
          // The child went away; whatever it printed explains why.
          close_input();
          written = pending.size();
        }
      }
    }
  }

  bool eof() const { return eof_; }

  int wait_exit_status() {
    if (pid_ <= 0) return -1;
    int status = 0;
    waitpid(pid_, &status, 0);
    pid_ = -1;
    return status;
  }

 private:
  ssize_t write_no_sigpipe(const char* data, size_t size) {
    sigset_t block;
    sigset_t old;
    sigemptyset(&block);
    sigaddset(&block, SIGPIPE);
    pthread_sigmask(SIG_BLOCK, &block, &old);
    const ssize_t put = write(to_child_, data, size);
    const int saved = errno;
    if (put < 0 && saved == EPIPE) {
      const timespec zero{0, 0};
      sigtimedwait(&block, nullptr, &zero);
    }
    pthread_sigmask(SIG_SETMASK, &old, nullptr);
    errno = saved;
    return put;
  }

  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  bool eof_ = false;
  std::string spawn_error_;
};

std::string trim(const std::string& s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Scans complete output lines for the check-sat response.
bool find_verdict(const std::string& output, std::string& verdict, size_t& end) {
  size_t start = 0;
  for (;;) {
    const size_t nl = output.find('\n', start);
    if (nl == std::string::npos) return false;
    const std::string line = trim(output.substr(start, nl - start));
    start = nl + 1;
    if (line == "sat" || line == "unsat" || line == "unknown" || line.rfind("(error", 0) == 0) {
      verdict = line;
      end = start;
      return true;
    }
  }
}

}  // namespace

Smtlib2ProcessSession::Smtlib2ProcessSession(std::string command, std::vector<Option> options)
    : command_(std::move(command)), options_(std::move(options)) {
  if (split_command(command_).empty()) throw SolverError("empty solver command");
}

std::string Smtlib2ProcessSession::script() const {
  std::string s;
  for (const auto& [name, value] : options_) s += "(set-option :" + name + " " + value + ")\n";
  s += "(set-logic QF_LIA)\n";
  for (const std::string& name : declaration_order()) {
    s += "(declare-const ";
    s += smt::quote_symbol(name);
    s += declared().at(name) == smt::Sort::Int ? " Int)\n" : " Bool)\n";
  }
  for (const smt::Term& a : assertions()) {
    s += "(assert ";
    s += smt::to_smtlib(a);
    s += ")\n";
  }
  return s;
}

SatResult Smtlib2ProcessSession::run(std::chrono::milliseconds timeout) {
  const auto deadline = Clock::now() + timeout;
  ChildProcess child(split_command(command_));
  if (!child.spawn_error().empty()) return SatResult{Status::Unknown, {}, child.spawn_error()};

  std::string output;
  std::string verdict;
  size_t verdict_end = 0;
  const bool answered = child.pump(
      script() + "(check-sat)\n", output, deadline,
      [&](const std::string& out) { return find_verdict(out, verdict, verdict_end); }, false);
  if (!answered) return SatResult{Status::Timeout, {}, "wall-clock limit exceeded"};
  if (verdict.empty()) {
    const int status = child.wait_exit_status();
    return SatResult{Status::Unknown, {},
                     "solver exited (status " + std::to_string(status) + ") without a verdict: " +
                         trim(output)};
  }
  if (verdict == "unsat") return SatResult{Status::Unsat, {}, {}};
  if (verdict != "sat") return SatResult{Status::Unknown, {}, verdict};

  std::string rest = output.substr(verdict_end);
  const bool finished = child.pump(
      "(get-model)\n(exit)\n", rest, deadline, [](const std::string&) { return false; }, true);
  if (!finished) return SatResult{Status::Timeout, {}, "wall-clock limit exceeded reading model"};
  try {
    return SatResult{Status::Sat, parse_model(rest), {}};
  } catch (const SolverError& e) {
    return SatResult{Status::Unknown, {}, e.what()};
  }
}

SessionFactory process_session_factory(std::string command, std::vector<Option> options) {
  return [command = std::move(command), options = std::move(options)]() -> std::unique_ptr<Session> {
    return std::make_unique<Smtlib2ProcessSession>(command, options);
  };
}

std::string resolve_solver_command(const std::string& fallback) {
  if (const char* env = std::getenv("COSMOP_SMT_CMD"); env && *env) return env;
  return fallback;
}

}  // namespace cosmop::solver
