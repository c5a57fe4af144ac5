#pragma once

#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include "cosmop/logic.hpp"
#include "cosmop/scene.hpp"
#include "cosmop/solver.hpp"

namespace cosmop::bench {

struct RoomsOptions {
  int64_t agent_l = 400;
  int64_t door_clearance = 200;  // door opening = agent side + clearance
  bool sealed = false;           // no doors into the goal room
};

struct RoomsScene {
  SceneDescription scene;
  logic::Formula goal = logic::truth(true);
  int n = 0;           // grid is n x n
  int min_K = 0;       // shortest horizon that reaches the goal room
};

// n x n grid of rooms over an env_side_m-metre square: zero-thickness wall
// segments, one door at the middle of every shared wall segment, start in
// the lower-left room, goal Last[robot inside the upper-right room].
// Throws ValidationError unless rooms = n^2 with n >= 2.
RoomsScene make_rooms_scene(int env_side_m, int rooms, const RoomsOptions& opt = {});

struct BenchScenario {
  int env_side_m = 0;
  int rooms = 0;
  int K = 0;
  int repetitions = 1;
};

struct BenchRow {
  BenchScenario scenario;
  double mean_ms = 0;
  double std_ms = 0;
  bool sat = false;
  std::string note;
};

// Named suites: size, rooms, k, complexity.
std::vector<BenchScenario> suite(const std::string& name, int repetitions);

// Solver sessions for repetition `rep` of a row.
using RepFactory = std::function<solver::SessionFactory(int rep)>;

// Process sessions whose random seed is the repetition index, passed through
// `seed_option` (e.g. "smt.random_seed"); an empty option name sends none.
RepFactory seeded_process_factory(const std::string& command, const std::string& seed_option);

// Times encode+solve at the scenario's fixed K over all repetitions.
BenchRow run_scenario(const BenchScenario& s, const RepFactory& factory,
                      std::chrono::milliseconds timeout);

// Rows run in parallel on `jobs` threads; repetitions within a row stay
// sequential.
std::vector<BenchRow> run_suite(const std::vector<BenchScenario>& scenarios,
                                const RepFactory& factory, std::chrono::milliseconds timeout,
                                int jobs);

std::string rows_csv(const std::vector<BenchRow>& rows);

}  // namespace cosmop::bench
