#include <gtest/gtest.h>

#include "pmt/error.hpp"
#include "pmt/vclock.hpp"

using namespace pmt;

namespace {

// 20x compression: one virtual minute every 3000 real ms, counted from 06:30.
VirtualMinutes oracle_minute(RealMillis ms) { return std::min<RealMillis>(390 + ms / 3000, 1350); }

}  // namespace

TEST(VClock, ThreeRealMinutesIsOneVirtualHour) {
  VirtualClock clock;
  EXPECT_EQ(to_virtual(clock, 0), 390);
  EXPECT_EQ(to_virtual(clock, 180000), 450);
  EXPECT_EQ(to_virtual(clock, 179999), 449);
}

TEST(VClock, FullDayIsFortyEightRealMinutes) {
  VirtualClock clock;
  EXPECT_EQ(clock.day_length_ms(), 48 * 60 * 1000);
  EXPECT_EQ(to_virtual(clock, 2880000), 1350);
  EXPECT_EQ(to_virtual(clock, 2879999), 1349);
}

TEST(VClock, MatchesIntegerOracleEverywhere) {
  VirtualClock clock;
  for (RealMillis ms = 0; ms <= 2880000; ms += 7) ASSERT_EQ(to_virtual(clock, ms), oracle_minute(ms)) << ms;
}

TEST(VClock, ToRealIsExactInverse) {
  VirtualClock clock;
  for (VirtualMinutes m = 390; m <= 1350; ++m) {
    const RealMillis r = to_real(clock, m);
    EXPECT_EQ(r, (m - 390) * 3000);
    EXPECT_EQ(to_virtual(clock, r), m);
    if (r > 0) EXPECT_EQ(to_virtual(clock, r - 1), m - 1);
  }
  EXPECT_THROW(to_real(clock, 389), std::out_of_range);
  EXPECT_THROW(to_real(clock, 1351), std::out_of_range);
}

TEST(VClock, VirtualSeconds) {
  VirtualClock clock;
  EXPECT_EQ(to_virtual_seconds(clock, 0), 390 * 60);
  EXPECT_EQ(to_virtual_seconds(clock, 50), 390 * 60 + 1);
  EXPECT_EQ(to_virtual_seconds(clock, 1050), 390 * 60 + 21);
}

TEST(VClock, WholeDayInOneStepTicksEveryMinuteThenEnds) {
  const auto r = advance(VirtualClock{}, 2880000);
  ASSERT_EQ(r.events.size(), 961u);
  for (int i = 0; i < 960; ++i) {
    EXPECT_EQ(r.events[i].kind, ClockEvent::Kind::MinuteTick);
    EXPECT_EQ(r.events[i].vtime, 391 + i);
    EXPECT_EQ(r.events[i].real_ms, (i + 1) * 3000);
  }
  EXPECT_EQ(r.events.back().kind, ClockEvent::Kind::DayEnd);
  EXPECT_TRUE(r.clock.day_ended());
}

TEST(VClock, ChunkedAdvanceMatchesSingleStep) {
  const auto whole = advance(VirtualClock{}, 2880000);
  VirtualClock clock;
  std::vector<ClockEvent> events;
  RealMillis i = 0;
  while (!clock.day_ended()) {
    const RealMillis step = 1 + (i++ * 7919) % 5000;
    auto r = advance(clock, step);
    clock = r.clock;
    events.insert(events.end(), r.events.begin(), r.events.end());
  }
  EXPECT_EQ(events, whole.events);
}

TEST(VClock, PausedAndFinishedClocksDoNotMove) {
  VirtualClock clock;
  clock.paused = true;
  auto r = advance(clock, 100000);
  EXPECT_TRUE(r.events.empty());
  EXPECT_EQ(r.clock.elapsed_real_ms, 0);

  auto done = advance(VirtualClock{}, 3000000).clock;
  EXPECT_EQ(done.elapsed_real_ms, 2880000);
  EXPECT_TRUE(advance(done, 5000).events.empty());
}

TEST(VClock, RealSpan) {
  EXPECT_EQ(real_span(ClockConfig{}, 1), 3000);
  EXPECT_EQ(real_span(ClockConfig{}, 5), 15000);
  EXPECT_EQ(real_span(ClockConfig{}, 0), 0);
}

TEST(VClock, ConfigValidation) {
  EXPECT_THROW((ClockConfig{0.0, 390, 1350}).validate(), ValidationError);
  EXPECT_THROW((ClockConfig{20.0, 600, 600}).validate(), ValidationError);
  EXPECT_NO_THROW(ClockConfig{}.validate());
}

TEST(VClock, TextFormats) {
  EXPECT_EQ(format_hhmm(390), "06:30");
  EXPECT_EQ(parse_hhmm("22:30"), 1350);
  EXPECT_THROW(parse_hhmm("7:5"), ValidationError);
  EXPECT_THROW(parse_hhmm("25:00"), ValidationError);
  EXPECT_EQ(format_mmss(21), "00:21");
  EXPECT_EQ(parse_mmss("05:56"), 356);
  EXPECT_THROW(parse_mmss("1:99"), ValidationError);
}
