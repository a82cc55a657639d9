#include <gtest/gtest.h>

#include "fuzz.hpp"

using namespace pmt;

TEST(Errorless, FuzzedSessionsStayNeutral) {
  const auto r = testkit::fuzz_errorless(10000, 2024);
  EXPECT_EQ(r.commands, 10000);
  EXPECT_GT(r.sessions, 1);
  EXPECT_GT(r.task_results, 0);
  for (const auto& v : r.violations) ADD_FAILURE() << v;
}

TEST(Errorless, RejectionReasonsAreNeutral) {
  const auto plan = make_session_plan(5, testkit::content(), 1, "p");
  SessionRunner runner(plan);
  runner.start();
  std::vector<ProtocolMessage> all;
  for (const Command& c : std::vector<Command>{command::Move{"kitchen"}, command::AckBriefing{}, command::AckBriefing{},
                                               command::Move{"moon"}, command::Interact{"atm", std::nullopt},
                                               command::SelectChoice{"desk", "juggle"}, command::Resume{},
                                               command::VitAnswer{0, "x"}, command::StartDistractor{"street_game"}}) {
    auto out = runner.submit(c);
    all.insert(all.end(), out.begin(), out.end());
  }
  int rejected = 0;
  for (const auto& m : all) {
    if (m.kind != MessageKind::Rejected) continue;
    ++rejected;
    std::vector<std::string> text;
    testkit::collect_text(m.payload, text);
    for (const auto& s : text)
      for (const auto& w : testkit::banned_words()) EXPECT_EQ(s.find(w), std::string::npos) << s;
  }
  EXPECT_EQ(rejected, 8);
}

TEST(Errorless, WrongChoicesNeverCostAnything) {
  const auto plan = make_session_plan(5, testkit::content(), 1, "p");
  Engine e(plan);
  e.start();
  e.handle(command::AckBriefing{});
  e.handle(command::Move{"kitchen"});
  for (const char* choice : {"wash_pot", "unplug", "wash_pot"}) {
    const auto out = e.handle(command::SelectChoice{"rice_cooker", choice});
    for (const auto& ev : out) EXPECT_NE(ev.kind, MessageKind::TaskResult);
  }
  const auto out = e.handle(command::SelectChoice{"rice_cooker", "cook_rice"});
  EXPECT_EQ(out.back().payload.at("achieved"), true);
}
