#include "doubtfire/trace.hpp"

#include <cstdio>
#include <ostream>

namespace doubtfire {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Compute: return "COMPUTE";
    case EventKind::Share: return "SHARE";
    case EventKind::Adopt: return "ADOPT";
    case EventKind::CheckSpawn: return "CHECK_SPAWN";
    case EventKind::CheckResolve: return "CHECK_RESOLVE";
    case EventKind::Correct: return "CORRECT";
    case EventKind::Moderate: return "MODERATE";
    case EventKind::Gc: return "GC";
    case EventKind::Fatal: return "FATAL";
  }
  return "?";
}

void TraceLog::record(double time, TeamId team, EventKind kind, const TaskId& id, std::string_view detail) {
  if (!enabled_) return;
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.6f %c %s %u %u", time, team_letter(team), to_string(kind), id.step, id.cell);
  std::string line(buf);
  if (!detail.empty()) {
    line += ' ';
    line += detail;
  }
  lines_.push_back(std::move(line));
}

void TraceLog::write(std::ostream& os) const {
  for (const auto& line : lines_) os << line << '\n';
}

}  // namespace doubtfire
