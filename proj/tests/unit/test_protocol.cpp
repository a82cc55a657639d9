#include <gtest/gtest.h>

#include "pmt/error.hpp"
#include "pmt/protocol.hpp"

using namespace pmt;
using nlohmann::json;
namespace cmd = pmt::command;

TEST(Protocol, ClockTickFrame) {
  const ProtocolMessage m{MessageKind::ClockTick, 17, {{"vtime", 630}}};
  EXPECT_EQ(encode(m), R"({"kind":"clock_tick","seq":17,"payload":{"vtime":630}})");
}

TEST(Protocol, PayloadKeysAreSorted) {
  const ProtocolMessage m{MessageKind::TaskResult, 3, {{"task_id", "RE1"}, {"achieved", true}, {"duration_s", 60}}};
  EXPECT_EQ(encode(m), R"({"kind":"task_result","seq":3,"payload":{"achieved":true,"duration_s":60,"task_id":"RE1"}})");
}

TEST(Protocol, EveryKindRoundTrips) {
  const json samples[] = {
      {{"participant", "p01"}}, json::object(), {{"to", "kitchen"}}, {{"object", "atm"}, {"action", "withdraw_money"}},
      {{"object", "atm"}, {"choice", "check_balance"}}, {{"point", "home_game"}}, json::object(), json::object(),
      json::object(), {{"index", 2}, {"choice", "apple"}},
      {{"reason", "start"}, {"npcs_present", json::array()}, {"distractor", nullptr}}, {{"vtime", 391}},
      {{"mode", "vrt"}, {"tasks", json::array({{{"id", "RT1"}}})}}, {{"task", {{"id", "ER6"}}}},
      {{"task_id", "RT1"}, {"message", "Oops, it's time for your scheduled task."}}, {{"object", "atm"}},
      {{"message", "Done."}, {"options", {"a", "b"}}}, {{"task_id", "RE1"}, {"duration_s", 21}},
      {{"index", 0}, {"options", {"x", "y", "z"}}}, {{"reason", "day_end"}, {"rates", {{"total", 0.5}}}},
      {{"npc", "matsuda"}}, {{"reason", "briefing not acknowledged yet"}},
  };
  for (int k = 0; k <= static_cast<int>(MessageKind::Rejected); ++k) {
    const ProtocolMessage m{static_cast<MessageKind>(k), static_cast<std::uint64_t>(k * 7 + 1), samples[k]};
    const auto text = encode(m);
    EXPECT_EQ(text.find('\n'), std::string::npos);
    EXPECT_EQ(decode(text), m) << text;
    EXPECT_EQ(decode(text + "\n"), m);
    EXPECT_EQ(message_kind_from_string(to_string(m.kind)), m.kind);
  }
}

TEST(Protocol, UnknownKindIsNamed) {
  try {
    decode(R"({"kind":"teleport","seq":1,"payload":{}})");
    FAIL();
  } catch (const ProtocolError& e) {
    EXPECT_NE(std::string(e.what()).find("teleport"), std::string::npos);
  }
}

TEST(Protocol, MalformedFrames) {
  EXPECT_THROW(decode("{not json"), ProtocolError);
  EXPECT_THROW(decode("[1,2]"), ProtocolError);
  EXPECT_THROW(decode(R"({"seq":1,"payload":{}})"), ProtocolError);
  EXPECT_THROW(decode(R"({"kind":"move","seq":-1,"payload":{}})"), ProtocolError);
  EXPECT_THROW(decode(R"({"kind":"move","seq":1,"payload":[]})"), ProtocolError);
  EXPECT_THROW(decode(R"({"kind":"move","seq":1,"payload":{},"extra":0})"), ProtocolError);
}

TEST(Protocol, CommandsRoundTripThroughFrames) {
  const Command commands[] = {cmd::Join{"p01"},
                              cmd::AckBriefing{},
                              cmd::Move{"arcade"},
                              cmd::Interact{"atm", std::nullopt},
                              cmd::Interact{"atm", "withdraw_money"},
                              cmd::SelectChoice{"desk", "read_book"},
                              cmd::StartDistractor{"street_game"},
                              cmd::StopDistractor{},
                              cmd::Pause{},
                              cmd::Resume{},
                              cmd::VitAnswer{4, "bread"}};
  std::uint64_t seq = 1;
  for (const auto& c : commands) {
    const auto m = to_message(c, seq++);
    EXPECT_EQ(m.direction(), Direction::ClientToEngine);
    EXPECT_EQ(to_command(decode(encode(m))), c);
  }
}

TEST(Protocol, CommandPayloadsAreChecked) {
  EXPECT_THROW(to_command({MessageKind::Move, 1, json::object()}), ProtocolError);
  EXPECT_THROW(to_command({MessageKind::Move, 1, {{"to", 3}}}), ProtocolError);
  EXPECT_THROW(to_command({MessageKind::Pause, 1, {{"now", true}}}), ProtocolError);
  EXPECT_THROW(to_command({MessageKind::VitAnswer, 1, {{"index", "0"}, {"choice", "a"}}}), ProtocolError);
  EXPECT_THROW(to_command({MessageKind::ClockTick, 1, {{"vtime", 400}}}), ProtocolError);
}

TEST(Protocol, DirectionSplit) {
  EXPECT_EQ(direction_of(MessageKind::VitAnswer), Direction::ClientToEngine);
  EXPECT_EQ(direction_of(MessageKind::StateSnapshot), Direction::EngineToClient);
  EXPECT_EQ(direction_of(MessageKind::Rejected), Direction::EngineToClient);
}

TEST(Protocol, SequenceGuard) {
  SequenceGuard g;
  EXPECT_FALSE(g.last());
  g.accept(1);
  g.accept(5);
  EXPECT_THROW(g.accept(5), ProtocolError);
  EXPECT_THROW(g.accept(2), ProtocolError);
  EXPECT_EQ(g.last(), 5u);
}
