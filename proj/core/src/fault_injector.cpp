#include "doubtfire/fault_injector.hpp"

#include <cstdio>
#include <ostream>
#include <random>
#include <stdexcept>

#include "doubtfire/errors.hpp"

namespace doubtfire {

FaultEvent draw_fault_site(std::uint64_t seed, const RunShape& shape, bool density_only, double error) {
  if (shape.steps == 0 || shape.cells == 0 || shape.unknowns == 0 || shape.nodes == 0) {
    throw std::invalid_argument("draw_fault_site: empty task space");
  }
  std::mt19937_64 rng(seed);
  FaultEvent e;
  e.step = std::uniform_int_distribution<std::uint32_t>(0, shape.steps - 1)(rng);
  e.cell = std::uniform_int_distribution<std::uint32_t>(0, shape.cells - 1)(rng);
  e.unknown = density_only ? 0 : std::uniform_int_distribution<int>(0, shape.unknowns - 1)(rng);
  e.node = std::uniform_int_distribution<std::size_t>(0, shape.nodes - 1)(rng);
  e.error = error;
  return e;
}

FaultInjector::FaultInjector(const FaultPlan& plan, const RunShape& shape) {
  switch (plan.mode) {
    case FaultPlan::Mode::None:
      break;
    case FaultPlan::Mode::RandomOnce:
      pending_.push_back(draw_fault_site(plan.seed, shape, plan.density_only, plan.error));
      break;
    case FaultPlan::Mode::Scripted:
      for (const auto& e : plan.scripted) {
        if (e.step >= shape.steps || e.cell >= shape.cells || e.unknown < 0 || e.unknown >= shape.unknowns ||
            e.node >= shape.nodes) {
          throw ConfigError("scripted fault outside the task space");
        }
      }
      pending_ = plan.scripted;
      break;
  }
}

bool FaultInjector::maybe_inject(TaskOutcome& outcome, TeamId team) {
  for (auto it = pending_.begin(); it != pending_.end(); ++it) {
    if (it->step != outcome.id.step || it->cell != outcome.id.cell) continue;
    if (it->team && *it->team != team) continue;
    outcome.payload.at(it->unknown, it->node) += it->error;
    log_.push_back({team, it->step, it->cell, it->unknown, it->node, it->error, false, false});
    pending_.erase(it);
    return true;
  }
  return false;
}

void write_injection_csv(std::ostream& os, std::uint64_t run_id, const std::vector<InjectionRecord>& records,
                         bool header) {
  if (header) os << "run_id,team,step,cell,unknown,node,e,detected,corrected\n";
  char buf[64];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%.17g", r.error);
    os << run_id << ',' << team_letter(r.team) << ',' << r.step << ',' << r.cell << ',' << r.unknown << ','
       << r.node << ',' << buf << ',' << (r.detected ? "true" : "false") << ','
       << (r.corrected ? "true" : "false") << '\n';
  }
}

}  // namespace doubtfire
