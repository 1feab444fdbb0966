#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "doubtfire/errors.hpp"
#include "doubtfire/trace.hpp"
#include "doubtfire/wire.hpp"

using namespace doubtfire;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TeamMessage random_message(std::mt19937_64& rng, const PolynomialShape& shape) {
  std::normal_distribution<double> g(0.0, 10.0);
  std::uniform_int_distribution<std::uint32_t> u(0, 1u << 30);
  TeamMessage m;
  m.sender = u(rng) % 2 ? TeamId::A : TeamId::B;
  m.outcome.id = {u(rng), u(rng)};
  m.outcome.dubious = u(rng) % 2 == 0;
  m.outcome.criteria = {u(rng) % 3 == 0 ? kInf : 0.0, u(rng) % 3 == 0 ? kInf : 0.0, std::abs(g(rng)),
                        std::abs(g(rng)), true};
  m.outcome.local_dt = std::abs(g(rng));
  m.outcome.payload = CellPolynomial(shape);
  for (double& c : m.outcome.payload.coefficients()) c = g(rng);
  return m;
}

}  // namespace

TEST(Wire, FrameLayoutIsLittleEndian) {
  TeamMessage m;
  m.sender = TeamId::B;
  m.outcome.id = {0x01020304u, 5};
  m.outcome.dubious = true;
  m.outcome.payload = CellPolynomial(PolynomialShape{1, 1, 3}, 1.0);
  const auto frame = encode(m);
  ASSERT_EQ(frame.size(), frame_size(6));
  EXPECT_EQ(frame.size(), 1u + 4 + 4 + 1 + 4 * 8 + 8 + 4 + 6 * 8);
  EXPECT_EQ(frame[0], 1);
  EXPECT_EQ(frame[1], 0x04);
  EXPECT_EQ(frame[4], 0x01);
  EXPECT_EQ(frame[5], 5);
  EXPECT_EQ(frame[9], 1);
  // Coefficient count after the header, four criteria and local_dt.
  EXPECT_EQ(frame[10 + 40], 6);
  // 1.0 = 0x3FF0000000000000, least significant byte first.
  EXPECT_EQ(frame[frame.size() - 1], 0x3F);
  EXPECT_EQ(frame[frame.size() - 2], 0xF0);
}

TEST(Wire, RoundTripIsBitExact) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const PolynomialShape shape{1 + trial % 5, 1 + trial % 2, 3 + trial % 2};
    const auto m = random_message(rng, shape);
    const auto back = decode(encode(m), shape);
    EXPECT_EQ(back.sender, m.sender);
    EXPECT_EQ(back.outcome.id, m.outcome.id);
    EXPECT_EQ(back.outcome.dubious, m.outcome.dubious);
    EXPECT_EQ(back.outcome.criteria.f_nan, m.outcome.criteria.f_nan);
    EXPECT_EQ(back.outcome.criteria.f_pa, m.outcome.criteria.f_pa);
    EXPECT_EQ(back.outcome.criteria.f_der, m.outcome.criteria.f_der);
    EXPECT_EQ(back.outcome.criteria.f_dt, m.outcome.criteria.f_dt);
    EXPECT_EQ(back.outcome.local_dt, m.outcome.local_dt);
    EXPECT_TRUE(back.outcome.payload.bitwise_equal(m.outcome.payload));
    EXPECT_EQ(encode(back), encode(m));
  }
}

TEST(Wire, NanPayloadSurvives) {
  std::mt19937_64 rng(32);
  const PolynomialShape shape{3, 1, 3};
  auto m = random_message(rng, shape);
  m.outcome.payload.at(1, 1) = std::nan("");
  const auto back = decode(encode(m), shape);
  EXPECT_TRUE(std::isnan(back.outcome.payload.at(1, 1)));
}

TEST(Wire, MalformedFramesAreRejected) {
  std::mt19937_64 rng(33);
  const PolynomialShape shape{2, 1, 3};
  auto frame = encode(random_message(rng, shape));
  auto truncated = frame;
  truncated.pop_back();
  EXPECT_THROW(decode(truncated, shape), Error);
  auto trailing = frame;
  trailing.push_back(0);
  EXPECT_THROW(decode(trailing, shape), Error);
  auto bad_team = frame;
  bad_team[0] = 7;
  EXPECT_THROW(decode(bad_team, shape), Error);
  auto bad_flag = frame;
  bad_flag[9] = 2;
  EXPECT_THROW(decode(bad_flag, shape), Error);
  EXPECT_THROW(decode(frame, PolynomialShape{3, 1, 3}), ShapeMismatch);
  EXPECT_THROW(decode({}, shape), Error);
}

TEST(Trace, LineFormat) {
  TraceLog log;
  log.record(1.5, TeamId::A, EventKind::Compute, {3, 7}, "dubious");
  log.record(2.0, TeamId::B, EventKind::Gc, {4, 0});
  ASSERT_EQ(log.lines().size(), 2u);
  EXPECT_EQ(log.lines()[0], "1.500000 A COMPUTE 3 7 dubious");
  EXPECT_EQ(log.lines()[1], "2.000000 B GC 4 0");
  TraceLog off(false);
  off.record(1.0, TeamId::A, EventKind::Fatal, {0, 0});
  EXPECT_TRUE(off.lines().empty());
}

TEST(Trace, EventKindNames) {
  EXPECT_STREQ(to_string(EventKind::CheckSpawn), "CHECK_SPAWN");
  EXPECT_STREQ(to_string(EventKind::CheckResolve), "CHECK_RESOLVE");
  EXPECT_STREQ(to_string(EventKind::Moderate), "MODERATE");
}
