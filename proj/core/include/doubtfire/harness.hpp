#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "doubtfire/criteria.hpp"
#include "doubtfire/fault_injector.hpp"
#include "doubtfire/outcome_cache.hpp"
#include "doubtfire/solver.hpp"
#include "doubtfire/team.hpp"
#include "doubtfire/trace.hpp"

namespace doubtfire {

/// Inter-team transport in simulated cost units.
struct ChannelModel {
  double latency = 0.0;
  /// Uniform extra delay in [0, jitter); 0 keeps per-sender FIFO order.
  double jitter = 0.0;
  std::uint64_t jitter_seed = 0;
  /// Test scaffold: messages to this team are never delivered.
  std::optional<TeamId> blackhole;
};

struct CostModel {
  double task = 1.0;
  /// NaN, PA and dt criteria together.
  double criteria_cheap = 0.02;
  double criteria_der = 0.15;
  /// One compare/resolve or one unsuccessful check-task poll.
  double check = 0.01;
  double adopt = 0.0;
};

enum class Bias { Forward, Reverse };

struct SimConfig {
  Grid grid{20, 1};
  SolverOptions solver;
  InitialCondition initial = InitialCondition::SmoothWave;

  Tolerances tol{0.0, 0.02, 10000.0, EvaluationMode::Lazy};
  CriterionSet criteria;
  double denom_floor = 1e-12;
  bool der_all_unknowns = true;

  ChannelModel channel;
  FaultPlan faults;
  CostModel cost;

  std::uint32_t steps = 50;
  std::uint64_t seed = 0;
  /// Outcome sharing between teams; off means fully redundant execution.
  bool sharing = true;
  std::uint64_t starvation_bound = 1'000'000;
  bool trace = true;
};

/// Throws ConfigError describing the first invalid field.
void validate(const SimConfig& config);

CriteriaConfig criteria_config(const SimConfig& config);

struct RunMetrics {
  std::array<std::uint64_t, 2> tasks_computed{};
  std::array<std::uint64_t, 2> tasks_adopted{};
  std::uint64_t total_tasks = 0;  // per team
  std::uint64_t checks_performed = 0;
  std::uint64_t corrections = 0;
  std::uint64_t moderations = 0;
  std::uint64_t fatals = 0;
  std::uint64_t gc_discards = 0;
  std::uint64_t check_reschedules = 0;
  std::uint64_t dubious_outcomes = 0;
  std::array<double, 2> team_cost{};
  /// Mean simulated completion time of the two teams.
  double simulated_cost = 0.0;

  double sharing_ratio(TeamId t) const {
    return total_tasks == 0 ? 0.0 : static_cast<double>(tasks_adopted[index(t)]) / static_cast<double>(total_tasks);
  }
  double computed_share(TeamId t) const {
    return total_tasks == 0 ? 0.0 : static_cast<double>(tasks_computed[index(t)]) / static_cast<double>(total_tasks);
  }
};

struct SimResult {
  RunMetrics metrics;
  std::array<SolverState, 2> final_states;
  std::vector<InjectionRecord> injections;
  TraceLog trace;
  /// Set when a Fatal verdict aborted the run.
  std::optional<std::string> fatal;
};

/// Low-priority task that polls the local cache until the counterpart outcome
/// of a dubious local result has arrived.
class CheckTask {
 public:
  enum class Poll { Ready, Rescheduled };

  explicit CheckTask(TaskId id, std::uint64_t bound = 1'000'000) : id_(id), bound_(bound) {}

  /// Ready once a remote outcome for the task is cached; otherwise counts a
  /// reschedule and throws StarvationGuard past the bound.
  Poll poll(const OutcomeCache& cache);

  const TaskId& id() const { return id_; }
  std::uint64_t reschedules() const { return reschedules_; }

 private:
  TaskId id_;
  std::uint64_t bound_;
  std::uint64_t reschedules_ = 0;
};

CheckTask spawn_check_task(const TaskId& id, std::uint64_t bound = 1'000'000);

/// Runs both replica teams under a deterministic discrete-event clock.
/// A Fatal verdict stops the run and is reported in SimResult::fatal. When
/// `reference` is given, injection records are scored against it.
SimResult run_simulation(const SimConfig& config, const SolverState* reference = nullptr);

/// Fault-free single-team run of the same configuration.
SolverState run_baseline(const SimConfig& config);

/// True if both teams' final fields equal `reference` bit for bit.
bool matches_reference(const SimResult& result, const SolverState& reference);

}  // namespace doubtfire
