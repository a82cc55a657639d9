#include <gtest/gtest.h>

#include <sstream>

#include "pmt/agents.hpp"
#include "pmt/error.hpp"
#include "support.hpp"

using namespace pmt;
namespace cmd = pmt::command;

namespace {

ReplayResult replay_text(const std::string& text) {
  std::istringstream in(text);
  return replay(in);
}

// Rewrites a log through a fresh writer so the checksum stays valid after `edit`.
std::string resign(const std::string& text, const std::function<void(std::vector<EventLogEntry>&)>& edit) {
  std::istringstream in(text);
  auto log = read_log(in);
  edit(log.entries);
  std::ostringstream out;
  EventLogWriter w(out, log.header.at("plan"));
  for (const auto& e : log.entries) w.append(e);
  w.close();
  return out.str();
}

}  // namespace

TEST(Replay, PerfectAgentSessionReproduces) {
  for (int session = 5; session <= 8; ++session) {
    const auto plan = make_session_plan(session, testkit::content(), 4, "a");
    testkit::LogCapture cap(plan);
    const auto record = run_headless(plan, AgentPolicy::parse("perfect"), cap.sink());
    const auto result = replay_text(cap.close());
    EXPECT_EQ(result.record, record);
    EXPECT_EQ(result.record.rates.total.rate(), 1.0);
    EXPECT_EQ(result.entries, cap.entries);
  }
}

TEST(Replay, ImmediateExecutionGivesTwentyOneSeconds) {
  const auto plan = make_session_plan(8, testkit::content(), 2, "B");
  testkit::LogCapture cap(plan);
  SessionRunner runner(plan, cap.sink());
  runner.start();
  runner.submit(cmd::AckBriefing{});
  runner.submit(cmd::Move{"arcade"});
  runner.advance_to(to_real(runner.engine().state().clock, parse_hhmm("12:00")) + 1050);
  const auto out = runner.submit(cmd::Interact{"matsuda", "give_photos"});
  ASSERT_NE(testkit::find_kind(out, MessageKind::TaskResult), nullptr);
  runner.advance(10'000'000);

  const auto result = replay_text(cap.close());
  const auto it = std::find_if(result.record.durations.begin(), result.record.durations.end(),
                               [](const TaskDuration& d) { return d.task_id == "ER6"; });
  ASSERT_NE(it, result.record.durations.end());
  EXPECT_EQ(format_mmss(it->seconds), "00:21");
}

TEST(Replay, RejectionsAreReplayed) {
  const auto plan = make_session_plan(5, testkit::content(), 9, "p");
  testkit::LogCapture cap(plan);
  SessionRunner runner(plan, cap.sink());
  runner.start();
  const auto early = runner.submit(cmd::Move{"kitchen"});
  ASSERT_EQ(early.size(), 1u);
  EXPECT_EQ(early[0].kind, MessageKind::Rejected);
  runner.submit(cmd::AckBriefing{});
  runner.advance(4000);
  runner.reject_frame("malformed frame");
  runner.submit(cmd::Interact{"spaceship", std::nullopt});
  runner.advance(50000);
  runner.abort();
  const auto text = cap.close();
  const auto result = replay_text(text);
  EXPECT_EQ(result.entries, cap.entries);
  EXPECT_EQ(result.record.end_reason, "abort");
}

TEST(Replay, DivergenceIsAnError) {
  const auto plan = make_session_plan(6, testkit::content(), 1, "a");
  testkit::LogCapture cap(plan);
  run_headless(plan, AgentPolicy::parse("perfect"), cap.sink());
  const auto text = cap.close();

  const auto forged = resign(text, [](auto& entries) {
    for (auto& e : entries)
      if (e.kind == MessageKind::TaskResult) {
        e.payload["duration_s"] = 1;
        return;
      }
  });
  EXPECT_THROW(replay_text(forged), LogError);

  const auto moved = resign(text, [](auto& entries) {
    for (auto& e : entries)
      if (e.kind == MessageKind::Move) {
        e.payload["to"] = "bathroom";
        return;
      }
  });
  EXPECT_THROW(replay_text(moved), LogError);

  const auto unfinished = resign(text, [](auto& entries) { entries.pop_back(); });
  EXPECT_THROW(replay_text(unfinished), LogError);
}

TEST(Replay, TruncatedLogCarriesLastGoodSeq) {
  const auto plan = make_session_plan(5, testkit::content(), 1, "a");
  testkit::LogCapture cap(plan);
  run_headless(plan, AgentPolicy::parse("perfect"), cap.sink());
  const auto text = cap.close();
  const auto cut = text.substr(0, text.size() / 2);
  try {
    replay_text(cut);
    FAIL();
  } catch (const LogError& e) {
    EXPECT_GT(e.last_good_seq(), 0u);
    EXPECT_LT(e.last_good_seq(), cap.entries.size());
  }
}
