#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "doubtfire/errors.hpp"
#include "doubtfire/fault_injector.hpp"

using namespace doubtfire;

namespace {

const RunShape kShape{50, 20, 3, 4};

TaskOutcome blank(std::uint32_t step, std::uint32_t cell) {
  TaskOutcome o;
  o.id = {step, cell};
  o.payload = CellPolynomial(PolynomialShape{3, 1, 3}, 1.0);
  return o;
}

}  // namespace

TEST(FaultInjector, ZeroErrorStillCountsAsInjected) {
  FaultPlan plan;
  plan.mode = FaultPlan::Mode::Scripted;
  plan.scripted = {{TeamId::A, 2, 5, 1, 3, 0.0}};
  FaultInjector inj(plan, kShape);
  auto o = blank(2, 5);
  const auto before = o.payload;
  EXPECT_TRUE(inj.maybe_inject(o, TeamId::A));
  EXPECT_TRUE(o.payload.bitwise_equal(before));
  ASSERT_EQ(inj.log().size(), 1u);
  EXPECT_EQ(inj.log()[0].error, 0.0);
}

TEST(FaultInjector, ScriptedHitsExactlyOneCoefficient) {
  FaultPlan plan;
  plan.mode = FaultPlan::Mode::Scripted;
  plan.scripted = {{TeamId::A, 3, 7, 0, 1, -1e3}};
  FaultInjector inj(plan, kShape);
  auto other_team = blank(3, 7);
  EXPECT_FALSE(inj.maybe_inject(other_team, TeamId::B));
  auto o = blank(3, 7);
  EXPECT_TRUE(inj.maybe_inject(o, TeamId::A));
  const auto ref = blank(3, 7).payload;
  for (int u = 0; u < 3; ++u) {
    for (std::size_t n = 0; n < 4; ++n) {
      if (u == 0 && n == 1) {
        EXPECT_EQ(o.payload.at(u, n), ref.at(u, n) - 1e3);
      } else {
        EXPECT_EQ(o.payload.at(u, n), ref.at(u, n));
      }
    }
  }
  // Consumed: the same task in the same team is not hit again.
  auto again = blank(3, 7);
  EXPECT_FALSE(inj.maybe_inject(again, TeamId::A));
}

TEST(FaultInjector, NanErrorPoisonsCoefficient) {
  FaultPlan plan;
  plan.mode = FaultPlan::Mode::Scripted;
  plan.scripted = {{std::nullopt, 0, 0, 2, 0, std::nan("")}};
  FaultInjector inj(plan, kShape);
  auto o = blank(0, 0);
  EXPECT_TRUE(inj.maybe_inject(o, TeamId::B));
  EXPECT_TRUE(std::isnan(o.payload.at(2, 0)));
  EXPECT_EQ(inj.log()[0].team, TeamId::B);
}

TEST(FaultInjector, RandomOnceIsSeededAndFiresOnceInOneTeam) {
  FaultPlan plan;
  plan.mode = FaultPlan::Mode::RandomOnce;
  plan.error = 10.0;
  plan.seed = 1234;
  const FaultEvent a = draw_fault_site(plan.seed, kShape, false, plan.error);
  const FaultEvent b = draw_fault_site(plan.seed, kShape, false, plan.error);
  EXPECT_EQ(a.step, b.step);
  EXPECT_EQ(a.cell, b.cell);
  EXPECT_EQ(a.unknown, b.unknown);
  EXPECT_EQ(a.node, b.node);

  FaultInjector inj(plan, kShape);
  int hits = 0;
  for (std::uint32_t s = 0; s < kShape.steps; ++s) {
    for (std::uint32_t c = 0; c < kShape.cells; ++c) {
      for (TeamId t : {TeamId::B, TeamId::A}) {
        auto o = blank(s, c);
        hits += inj.maybe_inject(o, t) ? 1 : 0;
      }
    }
  }
  EXPECT_EQ(hits, 1);
  ASSERT_EQ(inj.log().size(), 1u);
  EXPECT_EQ(inj.log()[0].team, TeamId::B);
  EXPECT_EQ(inj.log()[0].step, a.step);
  EXPECT_TRUE(inj.pending().empty());
}

TEST(FaultInjector, DensityOnlyDraws) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) EXPECT_EQ(draw_fault_site(seed, kShape, true, 1.0).unknown, 0);
}

TEST(FaultInjector, SiteDrawsAreUniformWithinFiveSigma) {
  constexpr int kDraws = 10000;
  const double sites = static_cast<double>(kShape.steps) * kShape.cells;
  const double p = 1.0 / sites;
  const double mean = kDraws * p;
  const double sigma = std::sqrt(kDraws * p * (1 - p));
  std::vector<int> counts(static_cast<std::size_t>(sites), 0);
  std::map<int, int> unknowns;
  std::map<std::size_t, int> nodes;
  for (std::uint64_t seed = 0; seed < kDraws; ++seed) {
    const auto e = draw_fault_site(seed, kShape, false, 1.0);
    ++counts[e.step * kShape.cells + e.cell];
    ++unknowns[e.unknown];
    ++nodes[e.node];
  }
  for (int c : counts) EXPECT_LE(std::abs(c - mean), 5 * sigma);
  const double su = std::sqrt(kDraws * (1.0 / 3) * (2.0 / 3));
  for (auto [u, c] : unknowns) EXPECT_LE(std::abs(c - kDraws / 3.0), 5 * su) << "unknown " << u;
  const double sn = std::sqrt(kDraws * 0.25 * 0.75);
  for (auto [n, c] : nodes) EXPECT_LE(std::abs(c - kDraws / 4.0), 5 * sn) << "node " << n;
}

TEST(FaultInjector, ScriptedOutsideTaskSpaceIsRejected) {
  FaultPlan plan;
  plan.mode = FaultPlan::Mode::Scripted;
  plan.scripted = {{TeamId::A, 50, 0, 0, 0, 1.0}};
  EXPECT_THROW(FaultInjector(plan, kShape), ConfigError);
  plan.scripted = {{TeamId::A, 0, 0, 3, 0, 1.0}};
  EXPECT_THROW(FaultInjector(plan, kShape), ConfigError);
}

TEST(FaultInjector, NoneNeverInjects) {
  FaultInjector inj(FaultPlan{}, kShape);
  auto o = blank(0, 0);
  EXPECT_FALSE(inj.maybe_inject(o, TeamId::A));
  EXPECT_TRUE(inj.log().empty());
}

TEST(FaultInjector, CsvLog) {
  std::ostringstream os;
  write_injection_csv(os, 7, {{TeamId::B, 3, 4, 1, 2, -1000.0, true, false}});
  EXPECT_EQ(os.str(), "run_id,team,step,cell,unknown,node,e,detected,corrected\n7,B,3,4,1,2,-1000,true,false\n");
}
