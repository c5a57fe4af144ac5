#include "cosmop/config.hpp"

#include <charconv>
#include <functional>
#include <map>

#include "cosmop/error.hpp"
#include "cosmop/solver.hpp"
#include "io_util.hpp"

namespace cosmop {

namespace {

double to_double(const std::string& key, const std::string& v) {
  double out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ParseError("config: '" + key + "' expects a number, got '" + v + "'");
  return out;
}

int64_t to_int(const std::string& key, const std::string& v) {
  int64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ParseError("config: '" + key + "' expects an integer, got '" + v + "'");
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

void Config::set(const std::string& key, const std::string& value) {
  using Setter = std::function<void(const std::string&)>;
  auto dbl = [&](double& field) -> Setter {
    return [&field, key](const std::string& v) { field = to_double(key, v); };
  };
  auto integer = [&](int& field) -> Setter {
    return [&field, key](const std::string& v) { field = int(to_int(key, v)); };
  };
  const std::map<std::string, Setter> table = {
      {"solver.cmd", [this](const std::string& v) { solver_cmd = v; }},
      {"solver.timeout_ms",
       [this, key](const std::string& v) { solver_timeout = std::chrono::milliseconds(to_int(key, v)); }},
      {"dwa.v_max", dbl(dwa.v_max)},
      {"dwa.b", dbl(dwa.b)},
      {"dwa.a_max", dbl(dwa.a_max)},
      {"dwa.eps", dbl(dwa.eps)},
      {"dwa.V", dbl(dwa.V)},
      {"dwa.w_max", dbl(dwa.w_max)},
      {"dwa.alpha_max", dbl(dwa.alpha_max)},
      {"dwa.w_heading", dbl(dwa.w_heading)},
      {"dwa.w_clearance", dbl(dwa.w_clearance)},
      {"dwa.w_velocity", dbl(dwa.w_velocity)},
      {"dwa.clearance_cap", dbl(dwa.clearance_cap)},
      {"dwa.goal_tolerance", dbl(dwa.goal_tolerance)},
      {"dwa.n_v", integer(dwa.n_v)},
      {"dwa.n_w", integer(dwa.n_w)},
      {"sim.leg_max_t", dbl(leg_max_t)},
      {"bench.reps", integer(bench_reps)},
      {"bench.jobs", integer(bench_jobs)},
      {"bench.seed_option", [this](const std::string& v) { bench_seed_option = v; }},
  };
  auto it = table.find(key);
  if (it == table.end()) throw ValidationError("config: unknown key '" + key + "'");
  const Config before = *this;
  it->second(value);
  try {
    dwa.check();
    if (solver_timeout.count() <= 0) throw ValidationError("solver.timeout_ms must be > 0");
    if (!(leg_max_t > 0)) throw ValidationError("sim.leg_max_t must be > 0");
    if (bench_reps < 1) throw ValidationError("bench.reps must be >= 1");
    if (bench_jobs < 1) throw ValidationError("bench.jobs must be >= 1");
  } catch (const ValidationError& e) {
    *this = before;
    throw ValidationError("config: " + key + " = " + value + ": " + e.what());
  }
}

std::string Config::effective_solver_cmd() const { return solver::resolve_solver_command(solver_cmd); }

Config parse_config(std::string_view text) {
  Config cfg;
  std::string section;
  size_t line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t nl = std::min(text.find('\n', pos), text.size());
    std::string_view raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;

    // Strip comments outside quotes.
    bool quoted = false;
    size_t cut = raw.size();
    for (size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '"') quoted = !quoted;
      if (raw[i] == '#' && !quoted) {
        cut = i;
        break;
      }
    }
    const std::string line = trim(raw.substr(0, cut));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("config: unterminated section header", int(line_no), 1);
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("config: expected key = value", int(line_no), 1);
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    if (!section.empty()) key = section + "." + key;
    cfg.set(key, value);
  }
  return cfg;
}

Config load_config_file(const std::string& path) { return parse_config(detail::read_file(path)); }

}  // namespace cosmop
