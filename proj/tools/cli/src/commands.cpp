#include "doubtfire/cli/commands.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "doubtfire/cli/campaign.hpp"
#include "doubtfire/errors.hpp"
#include "doubtfire/harness.hpp"

namespace doubtfire::cli {

namespace {

class IoError : public Error {
 public:
  using Error::Error;
};

std::ostream& summary(const Output& out) { return out.summary ? *out.summary : std::cout; }

void prepare(const Output& out) {
  std::error_code ec;
  std::filesystem::create_directories(out.dir, ec);
  if (ec) throw IoError("cannot create output directory " + out.dir.string() + ": " + ec.message());
}

template <typename Fn>
void write_file(const Output& out, const std::string& name, Fn&& fn) {
  const auto path = out.dir / name;
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  fn(os);
  os.flush();
  if (!os) throw IoError("write to " + path.string() + " failed");
}

nlohmann::json metrics_json(const RunMetrics& m) {
  nlohmann::json j;
  j["total_tasks_per_team"] = m.total_tasks;
  for (TeamId t : {TeamId::A, TeamId::B}) {
    const std::string key(1, team_letter(t));
    j["teams"][key] = {{"tasks_computed", m.tasks_computed[index(t)]},
                       {"tasks_adopted", m.tasks_adopted[index(t)]},
                       {"sharing_ratio", m.sharing_ratio(t)},
                       {"simulated_cost", m.team_cost[index(t)]}};
  }
  j["checks_performed"] = m.checks_performed;
  j["check_reschedules"] = m.check_reschedules;
  j["dubious_outcomes"] = m.dubious_outcomes;
  j["corrections"] = m.corrections;
  j["moderations"] = m.moderations;
  j["fatals"] = m.fatals;
  j["gc_discards"] = m.gc_discards;
  j["simulated_cost"] = m.simulated_cost;
  return j;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const IoError& e) {
    std::cerr << "doubtfire: " << e.what() << '\n';
    return kIo;
  } catch (const ConfigError& e) {
    std::cerr << "doubtfire: config error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "doubtfire: config error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "doubtfire: " << e.what() << '\n';
    return kIo;
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int cmd_run(const Config& config, const Output& out) {
  return guarded([&] {
    validate(config.sim);
    SimConfig sim = config.sim;
    sim.faults.seed = sim.seed;
    prepare(out);
    const auto t0 = std::chrono::steady_clock::now();
    const SolverState baseline = run_baseline(sim);
    const SimResult r = run_simulation(sim, &baseline);
    const Solver solver(sim.grid, sim.solver);

    nlohmann::json j = metrics_json(r.metrics);
    j["config_digest"] = config_digest(config);
    j["matches_baseline"] = matches_reference(r, baseline);
    j["fatal"] = r.fatal ? nlohmann::json(*r.fatal) : nlohmann::json(nullptr);
    j["final_time"] = r.final_states[0].time;
    j["injections"] = nlohmann::json::array();
    for (const auto& rec : r.injections) {
      j["injections"].push_back({{"team", std::string(1, team_letter(rec.team))},
                                 {"step", rec.step},
                                 {"cell", rec.cell},
                                 {"unknown", rec.unknown},
                                 {"node", rec.node},
                                 {"e", format_real(rec.error)},
                                 {"detected", rec.detected},
                                 {"corrected", rec.corrected}});
    }
    write_file(out, "metrics.json", [&](std::ostream& os) { os << j.dump(2) << '\n'; });
    write_file(out, "trace.log", [&](std::ostream& os) { r.trace.write(os); });
    write_file(out, "field_A.csv", [&](std::ostream& os) { write_field_csv(os, solver, r.final_states[0]); });
    write_file(out, "field_B.csv", [&](std::ostream& os) { write_field_csv(os, solver, r.final_states[1]); });
    write_file(out, "injections.csv", [&](std::ostream& os) { write_injection_csv(os, 0, r.injections); });

    auto& s = summary(out);
    char line[160];
    std::snprintf(line, sizeof line, "steps %u  cells %zu  simulated cost %.3f  corrections %llu  moderations %llu\n",
                  sim.steps, sim.grid.cell_count(), r.metrics.simulated_cost,
                  static_cast<unsigned long long>(r.metrics.corrections),
                  static_cast<unsigned long long>(r.metrics.moderations));
    s << line;
    std::snprintf(line, sizeof line, "team A computed %.1f%%, team B computed %.1f%%, matches baseline: %s\n",
                  100.0 * r.metrics.computed_share(TeamId::A), 100.0 * r.metrics.computed_share(TeamId::B),
                  matches_reference(r, baseline) ? "yes" : "no");
    s << line;
    std::cerr << "wall clock " << seconds_since(t0) << " s\n";
    if (r.fatal) {
      std::cerr << "doubtfire: fatal: " << *r.fatal << '\n';
      return static_cast<int>(kFatal);
    }
    return static_cast<int>(kOk);
  });
}

int cmd_sensitivity(const Config& config, const Output& out) {
  return guarded([&] {
    validate(config.sim);
    if (config.campaign.runs_per_point < 1) throw ConfigError("campaign.runs_per_point must be >= 1");
    prepare(out);
    const auto t0 = std::chrono::steady_clock::now();
    BaselineCache baselines;
    const auto rows = run_sensitivity(config, baselines);
    const auto digest = config_digest(config);
    write_file(out, "campaign.csv", [&](std::ostream& os) { write_run_csv(os, rows, digest); });
    write_file(out, "injections.csv", [&](std::ostream& os) { write_campaign_injections(os, rows); });

    auto& s = summary(out);
    char cell[32];
    s << "profile      ";
    for (double e : config.campaign.errors) {
      std::snprintf(cell, sizeof cell, "%9s", format_real(e).c_str());
      s << cell;
    }
    s << "      all\n";
    for (const auto& p : config.campaign.profiles) {
      std::snprintf(cell, sizeof cell, "%-13s", p.name.c_str());
      s << cell;
      for (double e : config.campaign.errors) {
        std::snprintf(cell, sizeof cell, "%9.2f", sensitivity(rows, [&](const RunRow& r) {
                        return r.profile == p.name && (r.error == e || (std::isnan(e) && std::isnan(r.error)));
                      }));
        s << cell;
      }
      std::snprintf(cell, sizeof cell, "%9.2f\n", sensitivity(rows, [&](const RunRow& r) { return r.profile == p.name; }));
      s << cell;
    }
    std::cerr << "wall clock " << seconds_since(t0) << " s for " << rows.size() << " runs\n";
    return static_cast<int>(kOk);
  });
}

int cmd_tradeoff(const Config& config, const Output& out) {
  return guarded([&] {
    validate(config.sim);
    if (config.campaign.runs_per_point < 1) throw ConfigError("campaign.runs_per_point must be >= 1");
    prepare(out);
    const auto t0 = std::chrono::steady_clock::now();
    BaselineCache baselines;
    const auto result = run_tradeoff(config, baselines);
    const auto digest = config_digest(config);
    write_file(out, "campaign.csv", [&](std::ostream& os) { write_tradeoff_csv(os, result.rows, digest); });
    write_file(out, "runs.csv", [&](std::ostream& os) { write_run_csv(os, result.runs, digest); });

    auto& s = summary(out);
    char line[128];
    s << "label             mode      tol_dt   tol_der  sensitivity  cost/team\n";
    for (const auto& r : result.rows) {
      std::snprintf(line, sizeof line, "%-17s %-8s %7s %9s %12.3f %10.2f\n", r.label.c_str(),
                    r.mode == EvaluationMode::Rigorous ? "rigorous" : "lazy", format_real(r.tol_dt).c_str(),
                    format_real(r.tol_der).c_str(), r.sensitivity, r.simulated_cost);
      s << line;
    }
    std::cerr << "wall clock " << seconds_since(t0) << " s for " << result.runs.size() << " runs\n";
    return static_cast<int>(kOk);
  });
}

int cmd_baseline(const Config& config, const Output& out) {
  return guarded([&] {
    validate(config.sim);
    prepare(out);
    const Solver solver(config.sim.grid, config.sim.solver);
    const SolverState initial = solver.initial_state(config.sim.initial);
    const SolverState state = run_reference(solver, config.sim.initial, config.sim.steps);
    nlohmann::json j;
    j["config_digest"] = config_digest(config);
    j["steps"] = state.step;
    j["final_time"] = state.time;
    j["global_dt"] = state.global_dt;
    j["mass_initial"] = solver.integral(initial, 0);
    j["mass_final"] = solver.integral(state, 0);
    write_file(out, "metrics.json", [&](std::ostream& os) { os << j.dump(2) << '\n'; });
    write_file(out, "field_baseline.csv", [&](std::ostream& os) { write_field_csv(os, solver, state); });
    char line[128];
    std::snprintf(line, sizeof line, "baseline: %u steps to t = %.6f, mass drift %.3e\n", state.step, state.time,
                  solver.integral(state, 0) - solver.integral(initial, 0));
    summary(out) << line;
    return static_cast<int>(kOk);
  });
}

}  // namespace doubtfire::cli
