#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "doubtfire/cli/config_file.hpp"
#include "doubtfire/harness.hpp"

namespace doubtfire::cli {

/// Outcome of one fault-injection run.
struct RunRow {
  std::string profile;
  EvaluationMode mode = EvaluationMode::Rigorous;
  double tol_dt = 0.0;
  double tol_der = 0.0;
  double error = 0.0;
  std::uint32_t run = 0;
  std::uint64_t seed = 0;
  std::optional<InjectionRecord> injection;
  bool detected = false;
  bool corrected = false;
  bool moderated = false;
  bool fatal = false;
  double simulated_cost = 0.0;
  double sharing_ratio = 0.0;
};

/// Caches fault-free baselines per solver setup so campaign points share them.
class BaselineCache {
 public:
  const SolverState& get(const SimConfig& config);

 private:
  std::map<std::string, SolverState> states_;
};

/// Configuration of run `run` of a campaign point: random single fault of size
/// `error`, seed = base seed + run index.
SimConfig campaign_run_config(const SimConfig& base, const CriterionProfile& profile, double error,
                              std::uint32_t run);

RunRow run_campaign_point(const SimConfig& config, const CriterionProfile& profile, double error, std::uint32_t run,
                          const SolverState& baseline);

/// Every (profile, e, run) of the sensitivity table with the configured tolerances.
std::vector<RunRow> run_sensitivity(const Config& config, BaselineCache& baselines);

/// Corrected runs / runs over the rows accepted by `filter` (all rows if empty).
double sensitivity(const std::vector<RunRow>& rows, const std::function<bool(const RunRow&)>& filter = {});

struct TradeoffRow {
  std::string label;
  EvaluationMode mode = EvaluationMode::Rigorous;
  double tol_dt = 0.0;
  double tol_der = 0.0;
  /// Averaged over the error grid.
  double sensitivity = 0.0;
  /// Mean simulated cost per team.
  double simulated_cost = 0.0;
  std::uint64_t runs = 0;
};

struct TradeoffResult {
  std::vector<TradeoffRow> rows;
  /// Per-run rows of every tolerance configuration (not of the baselines).
  std::vector<RunRow> runs;
};

/// Sweeps mode x tol_dt grid x tol_der grid with all criteria, then appends
/// the fault-free reference rows "checks-disabled" (sharing on) and
/// "fully-redundant" (sharing off).
TradeoffResult run_tradeoff(const Config& config, BaselineCache& baselines);

void write_run_csv(std::ostream& os, const std::vector<RunRow>& rows, const std::string& digest);
void write_tradeoff_csv(std::ostream& os, const std::vector<TradeoffRow>& rows, const std::string& digest);
void write_campaign_injections(std::ostream& os, const std::vector<RunRow>& rows);

std::string format_real(double v);

}  // namespace doubtfire::cli
