#include <gtest/gtest.h>

#include <thread>
#include <vector>

#include "doubtfire/errors.hpp"
#include "doubtfire/outcome_cache.hpp"

using namespace doubtfire;

namespace {

TaskOutcome make(std::uint32_t step, std::uint32_t cell, bool dubious = false, double fill = 1.0) {
  TaskOutcome o;
  o.id = {step, cell};
  o.payload = CellPolynomial(PolynomialShape{2, 1, 3}, fill);
  o.dubious = dubious;
  return o;
}

}  // namespace

TEST(OutcomeCache, TakeReturnsBothOrigins) {
  OutcomeCache cache;
  cache.insert(Origin::Local, make(1, 3, true, 1.0));
  cache.insert(Origin::Remote, make(1, 3, false, 2.0));
  auto pair = cache.take({1, 3});
  ASSERT_TRUE(pair.local && pair.remote);
  EXPECT_EQ(pair.local->payload.at(0, 0), 1.0);
  EXPECT_EQ(pair.remote->payload.at(0, 0), 2.0);
  EXPECT_FALSE(cache.contains({1, 3}, Origin::Local));
  EXPECT_FALSE(cache.contains({1, 3}, Origin::Remote));
  EXPECT_TRUE(cache.empty());
}

TEST(OutcomeCache, DuplicateInsertThrows) {
  OutcomeCache cache;
  cache.insert(Origin::Local, make(0, 0));
  EXPECT_THROW(cache.insert(Origin::Local, make(0, 0)), DuplicateEntry);
  EXPECT_NO_THROW(cache.insert(Origin::Remote, make(0, 0)));
}

TEST(OutcomeCache, GcDropsEntriesOlderThanOneStep) {
  OutcomeCache cache;
  cache.insert(Origin::Remote, make(2, 0));
  cache.insert(Origin::Remote, make(4, 1));
  cache.insert(Origin::Local, make(5, 2));
  EXPECT_EQ(cache.gc(5), 1u);
  EXPECT_FALSE(cache.contains({2, 0}, Origin::Remote));
  EXPECT_TRUE(cache.contains({4, 1}, Origin::Remote));
  EXPECT_EQ(cache.size(), 2u);
}

TEST(OutcomeCache, TakeSingleOriginKeepsTheOther) {
  OutcomeCache cache;
  cache.insert(Origin::Local, make(1, 1, true));
  cache.insert(Origin::Remote, make(1, 1, false));
  EXPECT_EQ(cache.dubious({1, 1}, Origin::Remote), std::optional<bool>(false));
  auto remote = cache.take({1, 1}, Origin::Remote);
  ASSERT_TRUE(remote);
  EXPECT_FALSE(cache.contains({1, 1}, Origin::Remote));
  EXPECT_TRUE(cache.contains({1, 1}, Origin::Local));
  EXPECT_EQ(cache.dubious({1, 1}, Origin::Remote), std::nullopt);
  EXPECT_FALSE(cache.take({9, 9}, Origin::Local));
  EXPECT_FALSE(cache.take({9, 9}).local);
}

TEST(OutcomeCache, ConcurrentWritersOnDistinctTasks) {
  OutcomeCache cache;
  std::vector<std::thread> workers;
  for (std::uint32_t t = 0; t < 4; ++t) {
    workers.emplace_back([&cache, t] {
      for (std::uint32_t c = 0; c < 250; ++c) cache.insert(Origin::Local, make(0, t * 250 + c));
    });
  }
  for (auto& w : workers) w.join();
  EXPECT_EQ(cache.size(), 1000u);
}
