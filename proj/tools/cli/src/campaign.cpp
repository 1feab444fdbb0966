#include "doubtfire/cli/campaign.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <algorithm>

namespace doubtfire::cli {

namespace {

const char* mode_name(EvaluationMode m) { return m == EvaluationMode::Rigorous ? "rigorous" : "lazy"; }

std::string baseline_key(const SimConfig& c) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d/%d/%d/%.17g/%.17g/%d/%d/%u", c.grid.cells_per_dim, c.grid.dim, c.solver.order,
                c.solver.cfl, c.solver.gamma, static_cast<int>(c.solver.scheme), static_cast<int>(c.initial),
                c.steps);
  return buf;
}

}  // namespace

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

const SolverState& BaselineCache::get(const SimConfig& config) {
  const auto key = baseline_key(config);
  auto it = states_.find(key);
  if (it == states_.end()) it = states_.emplace(key, run_baseline(config)).first;
  return it->second;
}

SimConfig campaign_run_config(const SimConfig& base, const CriterionProfile& profile, double error,
                              std::uint32_t run) {
  SimConfig c = base;
  c.criteria = profile.set;
  c.tol.mode = profile.mode;
  c.trace = false;
  c.faults.mode = FaultPlan::Mode::RandomOnce;
  c.faults.error = error;
  c.faults.scripted.clear();
  c.faults.seed = base.seed + run;
  return c;
}

RunRow run_campaign_point(const SimConfig& config, const CriterionProfile& profile, double error, std::uint32_t run,
                          const SolverState& baseline) {
  const SimConfig c = campaign_run_config(config, profile, error, run);
  const SimResult r = run_simulation(c, &baseline);
  RunRow row;
  row.profile = profile.name;
  row.mode = c.tol.mode;
  row.tol_dt = c.tol.tol_dt;
  row.tol_der = c.tol.tol_der;
  row.error = error;
  row.run = run;
  row.seed = c.faults.seed;
  if (!r.injections.empty()) {
    row.injection = r.injections.front();
    row.detected = row.injection->detected;
    row.corrected = row.injection->corrected;
  }
  row.moderated = r.metrics.moderations > 0;
  row.fatal = r.fatal.has_value();
  row.simulated_cost = r.metrics.simulated_cost;
  row.sharing_ratio = 0.5 * (r.metrics.sharing_ratio(TeamId::A) + r.metrics.sharing_ratio(TeamId::B));
  return row;
}

std::vector<RunRow> run_sensitivity(const Config& config, BaselineCache& baselines) {
  const SolverState& baseline = baselines.get(config.sim);
  std::vector<RunRow> rows;
  for (const auto& profile : config.campaign.profiles) {
    for (double e : config.campaign.errors) {
      for (std::uint32_t run = 0; run < config.campaign.runs_per_point; ++run) {
        rows.push_back(run_campaign_point(config.sim, profile, e, run, baseline));
      }
    }
  }
  return rows;
}

double sensitivity(const std::vector<RunRow>& rows, const std::function<bool(const RunRow&)>& filter) {
  std::uint64_t total = 0;
  std::uint64_t corrected = 0;
  for (const auto& r : rows) {
    if (filter && !filter(r)) continue;
    ++total;
    corrected += r.corrected ? 1 : 0;
  }
  return total == 0 ? 0.0 : static_cast<double>(corrected) / static_cast<double>(total);
}

TradeoffResult run_tradeoff(const Config& config, BaselineCache& baselines) {
  const SolverState& baseline = baselines.get(config.sim);
  TradeoffResult out;
  for (const auto& profile : {parse_profile("all-rigorous"), parse_profile("all-lazy")}) {
    for (double tol_dt : config.campaign.tol_dt_grid) {
      for (double tol_der : config.campaign.tol_der_grid) {
        SimConfig sim = config.sim;
        sim.tol.tol_dt = tol_dt;
        sim.tol.tol_der = tol_der;
        TradeoffRow row{profile.name, profile.mode, tol_dt, tol_der, 0.0, 0.0, 0};
        const std::size_t first = out.runs.size();
        double cost = 0.0;
        for (double e : config.campaign.errors) {
          for (std::uint32_t run = 0; run < config.campaign.runs_per_point; ++run) {
            out.runs.push_back(run_campaign_point(sim, profile, e, run, baseline));
            cost += out.runs.back().simulated_cost;
          }
        }
        row.runs = out.runs.size() - first;
        std::vector<RunRow> mine(out.runs.begin() + static_cast<std::ptrdiff_t>(first), out.runs.end());
        row.sensitivity = sensitivity(mine);
        row.simulated_cost = row.runs ? cost / static_cast<double>(row.runs) : 0.0;
        out.rows.push_back(row);
      }
    }
  }

  // Fault-free reference points; their cost does not depend on a seed.
  for (bool sharing : {true, false}) {
    SimConfig sim = config.sim;
    sim.criteria = CriterionSet::disabled();
    sim.sharing = sharing;
    sim.trace = false;
    sim.faults = FaultPlan{};
    const SimResult r = run_simulation(sim, &baseline);
    TradeoffRow row{sharing ? "checks-disabled" : "fully-redundant", sim.tol.mode, sim.tol.tol_dt, sim.tol.tol_der,
                    0.0, r.metrics.simulated_cost, 1};
    out.rows.push_back(row);
  }
  return out;
}

void write_run_csv(std::ostream& os, const std::vector<RunRow>& rows, const std::string& digest) {
  os << "profile,mode,tol_dt,tol_der,e,run,seed,detected,corrected,moderated,fatal,simulated_cost,sharing_ratio\n";
  char cost[32];
  char share[32];
  for (const auto& r : rows) {
    std::snprintf(cost, sizeof cost, "%.6f", r.simulated_cost);
    std::snprintf(share, sizeof share, "%.6f", r.sharing_ratio);
    os << r.profile << ',' << mode_name(r.mode) << ',' << format_real(r.tol_dt) << ',' << format_real(r.tol_der)
       << ',' << format_real(r.error) << ',' << r.run << ',' << r.seed << ',' << (r.detected ? 1 : 0) << ','
       << (r.corrected ? 1 : 0) << ',' << (r.moderated ? 1 : 0) << ',' << (r.fatal ? 1 : 0) << ',' << cost << ','
       << share << '\n';
  }

  // Footer: sensitivity per (profile, e) and per profile, in first-seen order.
  os << "# config_digest," << digest << '\n';
  std::vector<std::string> profiles;
  std::vector<double> errors;
  for (const auto& r : rows) {
    if (std::find(profiles.begin(), profiles.end(), r.profile) == profiles.end()) profiles.push_back(r.profile);
    const bool seen = std::any_of(errors.begin(), errors.end(), [&](double e) {
      return e == r.error || (std::isnan(e) && std::isnan(r.error));
    });
    if (!seen) errors.push_back(r.error);
  }
  char buf[32];
  for (const auto& p : profiles) {
    for (double e : errors) {
      const auto same = [&](const RunRow& r) {
        return r.profile == p && (r.error == e || (std::isnan(r.error) && std::isnan(e)));
      };
      if (std::none_of(rows.begin(), rows.end(), same)) continue;
      std::snprintf(buf, sizeof buf, "%.4f", sensitivity(rows, same));
      os << "# sensitivity," << p << ',' << format_real(e) << ',' << buf << '\n';
    }
    std::snprintf(buf, sizeof buf, "%.4f", sensitivity(rows, [&](const RunRow& r) { return r.profile == p; }));
    os << "# sensitivity," << p << ",all," << buf << '\n';
  }
}

void write_tradeoff_csv(std::ostream& os, const std::vector<TradeoffRow>& rows, const std::string& digest) {
  os << "label,mode,tol_dt,tol_der,sensitivity,simulated_cost,runs\n";
  char sens[32];
  char cost[32];
  for (const auto& r : rows) {
    std::snprintf(sens, sizeof sens, "%.4f", r.sensitivity);
    std::snprintf(cost, sizeof cost, "%.6f", r.simulated_cost);
    os << r.label << ',' << mode_name(r.mode) << ',' << format_real(r.tol_dt) << ',' << format_real(r.tol_der) << ','
       << sens << ',' << cost << ',' << r.runs << '\n';
  }
  os << "# config_digest," << digest << '\n';
}

void write_campaign_injections(std::ostream& os, const std::vector<RunRow>& rows) {
  os << "run_id,team,step,cell,unknown,node,e,detected,corrected\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].injection) write_injection_csv(os, i, {*rows[i].injection}, false);
  }
}

}  // namespace doubtfire::cli
