#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "doubtfire/resilience.hpp"
#include "doubtfire/team.hpp"

namespace doubtfire {

/// One additive value error: coefficient (unknown, node) of the outcome of
/// task (step, cell) gets `error` added. Without a team, the first team that
/// computes the task is hit.
struct FaultEvent {
  std::optional<TeamId> team;
  std::uint32_t step = 0;
  std::uint32_t cell = 0;
  int unknown = 0;
  std::size_t node = 0;
  double error = 0.0;
};

struct FaultPlan {
  enum class Mode { None, RandomOnce, Scripted };

  Mode mode = Mode::None;
  double error = 0.0;
  std::uint64_t seed = 0;
  /// Restrict random draws to the density unknown.
  bool density_only = false;
  std::vector<FaultEvent> scripted;
};

struct InjectionRecord {
  TeamId team = TeamId::A;
  std::uint32_t step = 0;
  std::uint32_t cell = 0;
  int unknown = 0;
  std::size_t node = 0;
  double error = 0.0;
  bool detected = false;
  bool corrected = false;
};

/// Extent of the task space faults are drawn from.
struct RunShape {
  std::uint32_t steps = 0;
  std::uint32_t cells = 0;
  int unknowns = 0;
  std::size_t nodes = 0;
};

/// Uniform draw of (step, cell, unknown, node) from a seeded generator.
FaultEvent draw_fault_site(std::uint64_t seed, const RunShape& shape, bool density_only, double error);

/// Applies a fault plan to predictor outcomes. Each planned event fires at most
/// once, and only in one team.
class FaultInjector {
 public:
  FaultInjector() = default;
  FaultInjector(const FaultPlan& plan, const RunShape& shape);

  /// Adds the planned error if (team, step, cell) matches a pending event.
  /// Must run before criteria evaluation. Returns true if the outcome changed
  /// hands through the injector (also for a zero error).
  bool maybe_inject(TaskOutcome& outcome, TeamId team);

  const std::vector<InjectionRecord>& log() const { return log_; }
  std::vector<InjectionRecord>& log() { return log_; }
  const std::vector<FaultEvent>& pending() const { return pending_; }

 private:
  std::vector<FaultEvent> pending_;
  std::vector<InjectionRecord> log_;
};

/// CSV: run_id,team,step,cell,unknown,node,e,detected,corrected
void write_injection_csv(std::ostream& os, std::uint64_t run_id, const std::vector<InjectionRecord>& records,
                         bool header = true);

}  // namespace doubtfire
