#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "doubtfire/resilience.hpp"
#include "doubtfire/team.hpp"

namespace doubtfire {

enum class EventKind { Compute, Share, Adopt, CheckSpawn, CheckResolve, Correct, Moderate, Gc, Fatal };

const char* to_string(EventKind kind);

/// Line-oriented event trace: "<sim_time> <team> <event_kind> <step> <cell> [detail]".
class TraceLog {
 public:
  explicit TraceLog(bool enabled = true) : enabled_(enabled) {}

  bool enabled() const { return enabled_; }
  void record(double time, TeamId team, EventKind kind, const TaskId& id, std::string_view detail = {});

  const std::vector<std::string>& lines() const { return lines_; }
  void write(std::ostream& os) const;

 private:
  bool enabled_;
  std::vector<std::string> lines_;
};

}  // namespace doubtfire
