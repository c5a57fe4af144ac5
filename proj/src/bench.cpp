#include "cosmop/bench.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

#include "cosmop/error.hpp"
#include "cosmop/planner.hpp"
#include "cosmop/primitives.hpp"

namespace cosmop::bench {

RoomsScene make_rooms_scene(int env_side_m, int rooms, const RoomsOptions& opt) {
  const int n = int(std::lround(std::sqrt(double(rooms))));
  if (n < 2 || n * n != rooms)
    throw ValidationError("rooms must be a perfect square n^2 with n >= 2, got " +
                          std::to_string(rooms));
  if (env_side_m <= 0) throw ValidationError("environment side must be positive");

  const int64_t side = int64_t(env_side_m) * 1000;
  const int64_t half = side / 2;
  // Room boundaries along either axis.
  std::vector<int64_t> edge(size_t(n) + 1);
  for (int i = 0; i <= n; ++i) edge[size_t(i)] = -half + (int64_t(i) * side) / n;
  const int64_t offset = (opt.agent_l + opt.door_clearance) / 2;
  if (edge[1] - edge[0] < 2 * offset)
    throw ValidationError("rooms too small for the door poses");

  RoomsScene out;
  out.n = n;
  SceneDescription& s = out.scene;
  s.workspace = {0, 0, side};
  s.agent = {opt.agent_l};
  auto mid = [&](int i) { return (edge[size_t(i)] + edge[size_t(i) + 1]) / 2; };
  s.robot_initial = {mid(0), mid(0), 0};

  auto into_goal = [&](int col, int row) { return col == n - 1 && row == n - 1; };

  // Vertical walls at x = edge[i], one segment per row; doors face +x.
  for (int i = 1; i < n; ++i) {
    for (int r = 0; r < n; ++r) {
      s.obstacles.push_back({{edge[size_t(i)], edge[size_t(r)]}, {edge[size_t(i)], edge[size_t(r) + 1]}});
      if (opt.sealed && into_goal(i, r)) continue;
      const int64_t x = edge[size_t(i)], y = mid(r);
      s.doors.push_back({{x - offset, y, 0}, {x + offset, y, 180}});
    }
  }
  // Horizontal walls at y = edge[j], one segment per column; doors face +y.
  for (int j = 1; j < n; ++j) {
    for (int c = 0; c < n; ++c) {
      s.obstacles.push_back({{edge[size_t(c)], edge[size_t(j)]}, {edge[size_t(c) + 1], edge[size_t(j)]}});
      if (opt.sealed && into_goal(c, j)) continue;
      const int64_t x = mid(c), y = edge[size_t(j)];
      s.doors.push_back({{x, y - offset, 90}, {x, y + offset, 270}});
    }
  }
  validate(s);

  using namespace logic;
  namespace sym = primitives::sym;
  const int64_t m = opt.agent_l / 2 + opt.agent_l % 2;
  Term x = var(sym::kRobotX), y = var(sym::kRobotY);
  out.goal = last(land({ge(x, constant(edge[size_t(n) - 1] + m)), le(x, constant(edge[size_t(n)] - m)),
                        ge(y, constant(edge[size_t(n) - 1] + m)), le(y, constant(edge[size_t(n)] - m))}));
  // One GoTo to the door pose and one Push through it per crossed wall.
  out.min_K = 4 * (n - 1);
  return out;
}

std::vector<BenchScenario> suite(const std::string& name, int repetitions) {
  if (repetitions < 1) throw ValidationError("repetitions must be >= 1");
  std::vector<BenchScenario> out;
  if (name == "size") {
    for (int m : {4, 8, 16, 32, 64, 128, 256}) out.push_back({m, 9, 14, repetitions});
  } else if (name == "rooms") {
    for (int r : {9, 25, 49, 81}) out.push_back({32, r, 50, repetitions});
  } else if (name == "k") {
    for (int K = 26; K <= 50; K += 6) out.push_back({32, 25, K, repetitions});
  } else if (name == "complexity") {
    const std::pair<int, int> rows[] = {{9, 14}, {16, 20}, {25, 26}, {36, 32}, {49, 38}, {64, 44}, {81, 50}};
    for (auto [r, K] : rows) out.push_back({32, r, K, repetitions});
  } else {
    throw ValidationError("unknown suite '" + name + "' (size|rooms|k|complexity)");
  }
  return out;
}

RepFactory seeded_process_factory(const std::string& command, const std::string& seed_option) {
  return [command, seed_option](int rep) {
    std::vector<solver::Option> options;
    if (!seed_option.empty()) options.emplace_back(seed_option, std::to_string(rep));
    return solver::process_session_factory(command, std::move(options));
  };
}

BenchRow run_scenario(const BenchScenario& sc, const RepFactory& factory,
                      std::chrono::milliseconds timeout) {
  const RoomsScene rooms = make_rooms_scene(sc.env_side_m, sc.rooms);
  BenchRow row;
  row.scenario = sc;
  row.sat = true;
  std::vector<double> times;
  for (int i = 0; i < sc.repetitions; ++i) {
    planner::PlanRequest req{rooms.scene, rooms.goal, sc.K, sc.K, timeout};
    const planner::SynthesisResult r = planner::synthesize(req, factory(i));
    times.push_back(r.attempts.empty() ? 0.0 : r.attempts.back().ms);
    if (r.outcome != planner::Outcome::Found) {
      row.sat = false;
      row.note = std::string("expected sat, got ") + planner::to_string(r.outcome);
      break;
    }
  }
  double sum = 0;
  for (double t : times) sum += t;
  row.mean_ms = sum / double(times.size());
  double var = 0;
  for (double t : times) var += (t - row.mean_ms) * (t - row.mean_ms);
  row.std_ms = times.size() > 1 ? std::sqrt(var / double(times.size() - 1)) : 0.0;
  return row;
}

std::vector<BenchRow> run_suite(const std::vector<BenchScenario>& scenarios,
                                const RepFactory& factory, std::chrono::milliseconds timeout,
                                int jobs) {
  std::vector<BenchRow> rows(scenarios.size());
  std::vector<std::string> errors(scenarios.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < scenarios.size(); i = next++) {
      try {
        rows[i] = run_scenario(scenarios[i], factory, timeout);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const int n = std::max(1, std::min(jobs, int(scenarios.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  for (const std::string& e : errors)
    if (!e.empty()) throw SolverError("bench: " + e);
  return rows;
}

std::string rows_csv(const std::vector<BenchRow>& rows) {
  std::string out = "env_m,rooms,K,mean_ms,std_ms,sat\n";
  char buf[128];
  for (const BenchRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%.3f,%.3f,%s\n", r.scenario.env_side_m,
                  r.scenario.rooms, r.scenario.K, r.mean_ms, r.std_ms, r.sat ? "true" : "false");
    out += buf;
  }
  return out;
}

}  // namespace cosmop::bench
