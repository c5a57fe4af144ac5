#pragma once

#include <chrono>
#include <string>
#include <string_view>

#include "cosmop/dwa.hpp"

namespace cosmop {

// Tool-wide settings. Files are TOML-style `key = value` lines; `[section]`
// headers prefix the keys that follow, `#` starts a comment, strings may be
// quoted.
struct Config {
  std::string solver_cmd = "z3 -in";
  std::chrono::milliseconds solver_timeout{120000};
  dwa::DwaParams dwa;
  double leg_max_t = 60;  // seconds per GoTo leg
  int bench_reps = 35;
  int bench_jobs = 1;
  // Solver option that receives the repetition index as random seed; empty
  // disables seeding.
  std::string bench_seed_option = "smt.random_seed";

  // Throws ValidationError for unknown keys, ParseError for bad values.
  void set(const std::string& key, const std::string& value);

  // COSMOP_SMT_CMD when set, else solver_cmd.
  std::string effective_solver_cmd() const;
};

Config parse_config(std::string_view text);
Config load_config_file(const std::string& path);

}  // namespace cosmop
