#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "doubtfire/cli/campaign.hpp"
#include "doubtfire/cli/commands.hpp"
#include "doubtfire/cli/config_file.hpp"
#include "doubtfire/errors.hpp"

using namespace doubtfire;
using namespace doubtfire::cli;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("doubtfire_cli_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Output quiet(const std::filesystem::path& dir, std::ostringstream& sink) {
  Output out;
  out.dir = dir;
  out.summary = &sink;
  return out;
}

}  // namespace

TEST(ConfigFile, ParsesSectionsAndComments) {
  const auto c = parse_config(
      "; comment\n[grid]\ncells = 12\ndim = 2\n[solver]\norder = 2\nscheme = ssprk2\ninitial = gaussian_bump\n"
      "[tolerances]\nmode = rigorous\ntol_der = 100\ncriteria = der\n[faults]\nmode = scripted\n"
      "events = A:3:7:0:1:-1000; *:1:2:1:0:nan\n[campaign]\nerrors = -1, 1, nan\nprofiles = der, all-lazy\n");
  EXPECT_EQ(c.sim.grid.cells_per_dim, 12);
  EXPECT_EQ(c.sim.grid.dim, 2);
  EXPECT_EQ(c.sim.solver.order, 2);
  EXPECT_EQ(c.sim.solver.scheme, TimeScheme::SspRk2);
  EXPECT_EQ(c.sim.initial, InitialCondition::GaussianBump);
  EXPECT_EQ(c.sim.tol.mode, EvaluationMode::Rigorous);
  EXPECT_EQ(c.sim.tol.tol_der, 100.0);
  EXPECT_EQ(c.sim.criteria, CriterionSet::der_only());
  ASSERT_EQ(c.sim.faults.scripted.size(), 2u);
  EXPECT_EQ(c.sim.faults.scripted[0].team, TeamId::A);
  EXPECT_EQ(c.sim.faults.scripted[0].error, -1000.0);
  EXPECT_FALSE(c.sim.faults.scripted[1].team.has_value());
  EXPECT_TRUE(std::isnan(c.sim.faults.scripted[1].error));
  ASSERT_EQ(c.campaign.errors.size(), 3u);
  EXPECT_TRUE(std::isnan(c.campaign.errors[2]));
  ASSERT_EQ(c.campaign.profiles.size(), 2u);
  EXPECT_EQ(c.campaign.profiles[1].mode, EvaluationMode::Lazy);
}

TEST(ConfigFile, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(parse_config("[grid]\ncellz = 3\n"), ConfigError);
  EXPECT_THROW(parse_config("[gird]\ncells = 3\n"), ConfigError);
  EXPECT_THROW(parse_config("[grid]\ncells = three\n"), ConfigError);
  EXPECT_THROW(parse_config("[grid]\ncells = -3\n"), ConfigError);
  EXPECT_THROW(parse_config("[tolerances]\nmode = sloppy\n"), ConfigError);
  EXPECT_THROW(parse_config("[faults]\nevents = A:1:2\n"), ConfigError);
  EXPECT_THROW(parse_config("[solver]\ncfl = 1e999\n"), ConfigError);
  EXPECT_THROW(parse_config("[grid\ncells = 3\n"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/doubtfire.cfg"), ConfigError);
}

TEST(ConfigFile, OverridesAndDigest) {
  Config c = default_config();
  const auto before = config_digest(c);
  apply_override(c, "tolerances.tol_dt=0.5");
  EXPECT_EQ(c.sim.tol.tol_dt, 0.5);
  EXPECT_NE(config_digest(c), before);
  EXPECT_EQ(config_digest(c), config_digest(c));
  EXPECT_THROW(apply_override(c, "tol_dt=0.5"), ConfigError);
  EXPECT_THROW(apply_override(c, "tolerances.tol_dt"), ConfigError);
  // The canonical form parses back to the same configuration.
  std::string ini;
  std::string section;
  std::istringstream in(canonical_form(c));
  for (std::string line; std::getline(in, line);) {
    const auto dot = line.find('.');
    const auto eq = line.find(" = ");
    const std::string sec = line.substr(0, dot);
    if (sec != section) ini += "[" + (section = sec) + "]\n";
    const std::string value = line.substr(eq + 3);
    if (value.empty()) continue;
    ini += line.substr(dot + 1, eq - dot - 1) + " = " + value + "\n";
  }
  EXPECT_EQ(canonical_form(parse_config(ini)), canonical_form(c));
}

TEST(Campaign, ZeroErrorIsNeverCorrected) {
  Config c = default_config();
  c.sim.steps = 10;
  c.campaign.runs_per_point = 5;
  c.campaign.errors = {0.0};
  c.campaign.profiles = {parse_profile("all-rigorous")};
  BaselineCache baselines;
  const auto rows = run_sensitivity(c, baselines);
  ASSERT_EQ(rows.size(), 5u);
  for (const auto& r : rows) EXPECT_FALSE(r.corrected);
  EXPECT_EQ(sensitivity(rows), 0.0);
}

TEST(Campaign, CsvHasFixedHeaderAndFooter) {
  Config c = default_config();
  c.sim.steps = 8;
  c.campaign.runs_per_point = 3;
  c.campaign.errors = {-1000, 1000};
  c.campaign.profiles = {parse_profile("der")};
  BaselineCache baselines;
  const auto rows = run_sensitivity(c, baselines);
  std::ostringstream os;
  write_run_csv(os, rows, "abc");
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "profile,mode,tol_dt,tol_der,e,run,seed,detected,corrected,moderated,fatal,simulated_cost,sharing_ratio");
  int body = 0, footer = 0;
  while (std::getline(in, line)) {
    if (line.rfind("#", 0) == 0) {
      ++footer;
    } else {
      EXPECT_EQ(footer, 0) << "body row after footer";
      ++body;
    }
  }
  EXPECT_EQ(body, 6);
  EXPECT_EQ(footer, 1 + 3);
}

TEST(Commands, RunFaultFree) {
  std::ostringstream sink;
  const auto dir = scratch("run");
  Config c = default_config();
  c.sim.steps = 10;
  EXPECT_EQ(cmd_run(c, quiet(dir, sink)), kOk);
  const auto metrics = nlohmann::json::parse(slurp(dir / "metrics.json"));
  EXPECT_EQ(metrics["corrections"], 0);
  EXPECT_EQ(metrics["matches_baseline"], true);
  for (const char* f : {"trace.log", "field_A.csv", "field_B.csv", "injections.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
}

TEST(Commands, RunScriptedFaultRigorous) {
  std::ostringstream sink;
  const auto dir = scratch("scripted");
  Config c = default_config();
  c.sim.steps = 10;
  apply_override(c, "tolerances.mode=rigorous");
  apply_override(c, "tolerances.tol_dt=0");
  apply_override(c, "tolerances.tol_der=0");
  apply_override(c, "faults.mode=scripted");
  apply_override(c, "faults.events=A:3:7:0:1:-1000");
  EXPECT_EQ(cmd_run(c, quiet(dir, sink)), kOk);
  const auto metrics = nlohmann::json::parse(slurp(dir / "metrics.json"));
  EXPECT_EQ(metrics["corrections"], 1);
  EXPECT_EQ(metrics["injections"][0]["corrected"], true);
}

TEST(Commands, DoubleNanExitsFatal) {
  std::ostringstream sink;
  Config c = default_config();
  c.sim.steps = 10;
  apply_override(c, "faults.mode=scripted");
  apply_override(c, "faults.events=A:2:3:0:0:nan; B:2:3:0:0:nan");
  EXPECT_EQ(cmd_run(c, quiet(scratch("fatal"), sink)), kFatal);
}

TEST(Commands, InvalidConfigIsUsageError) {
  std::ostringstream sink;
  Config c = default_config();
  c.sim.grid.cells_per_dim = 1;
  EXPECT_EQ(cmd_run(c, quiet(scratch("usage"), sink)), kUsage);
  c = default_config();
  c.campaign.runs_per_point = 0;
  EXPECT_EQ(cmd_sensitivity(c, quiet(scratch("usage2"), sink)), kUsage);
}

TEST(Commands, UnwritableOutputIsIoError) {
  std::ostringstream sink;
  const auto blocker = scratch("blocker");
  std::ofstream(blocker) << "file, not a directory";
  Config c = default_config();
  c.sim.steps = 2;
  EXPECT_EQ(cmd_run(c, quiet(blocker / "sub", sink)), kIo);
  std::filesystem::remove(blocker);
}

TEST(Commands, BaselineWritesField) {
  std::ostringstream sink;
  const auto dir = scratch("baseline");
  Config c = default_config();
  c.sim.steps = 5;
  EXPECT_EQ(cmd_baseline(c, quiet(dir, sink)), kOk);
  EXPECT_TRUE(std::filesystem::exists(dir / "field_baseline.csv"));
  const auto metrics = nlohmann::json::parse(slurp(dir / "metrics.json"));
  EXPECT_EQ(metrics["steps"], 5);
}

TEST(Commands, TradeoffHasReferenceRows) {
  std::ostringstream sink;
  const auto dir = scratch("tradeoff");
  Config c = default_config();
  c.sim.steps = 8;
  c.campaign.runs_per_point = 2;
  c.campaign.errors = {-1000, 1000};
  EXPECT_EQ(cmd_tradeoff(c, quiet(dir, sink)), kOk);
  const auto csv = slurp(dir / "campaign.csv");
  EXPECT_NE(csv.find("\nchecks-disabled,"), std::string::npos);
  EXPECT_NE(csv.find("\nfully-redundant,"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(dir / "runs.csv"));
}
