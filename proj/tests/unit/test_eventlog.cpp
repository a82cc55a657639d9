#include <gtest/gtest.h>

#include <sstream>

#include "pmt/error.hpp"
#include "support.hpp"

using namespace pmt;

namespace {

// Bitwise reflected CRC-32 (polynomial 0xEDB88320).
std::uint32_t crc32_oracle(const std::string& bytes) {
  std::uint32_t c = 0xFFFFFFFFu;
  for (unsigned char b : bytes) {
    c ^= b;
    for (int k = 0; k < 8; ++k) c = (c >> 1) ^ (0xEDB88320u & (0u - (c & 1u)));
  }
  return ~c;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string join(const std::vector<std::string>& lines) {
  std::string s;
  for (const auto& l : lines) s += l + "\n";
  return s;
}

std::string full_day_log() {
  const auto plan = make_session_plan(5, testkit::content(), 2, "p01");
  testkit::LogCapture cap(plan);
  SessionRunner runner(plan, cap.sink());
  runner.start();
  runner.submit(command::AckBriefing{});
  runner.submit(command::Move{"kitchen"});
  runner.submit(command::Interact{"rice_cooker", "cook_rice"});
  runner.advance(10'000'000);
  return cap.close();
}

std::uint64_t last_good_of(const std::string& text) {
  std::istringstream in(text);
  try {
    read_log(in);
  } catch (const LogError& e) {
    return e.last_good_seq();
  }
  ADD_FAILURE() << "log was accepted";
  return 0;
}

}  // namespace

TEST(EventLog, FullDayReparsesAndCounts) {
  const auto text = full_day_log();
  const auto lines = lines_of(text);
  std::size_t ticks = 0, outs = 0, ins = 0;
  for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
    const auto j = nlohmann::json::parse(lines[i]);
    EXPECT_EQ(j.at("seq"), i);
    if (j.at("kind") == "clock_tick") ++ticks;
    (j.at("dir") == "in" ? ins : outs) += 1;
  }
  EXPECT_EQ(ticks, 960u);
  EXPECT_EQ(ins, 3u);

  std::istringstream in(text);
  const auto log = read_log(in);
  EXPECT_EQ(log.entries.size(), lines.size() - 2);
  EXPECT_EQ(log.header.at("format"), "pmtlog/1");
  EXPECT_FALSE(log.header.contains("created_at"));
  EXPECT_EQ(log.entries.back().kind, MessageKind::SessionEnd);

  const auto trailer = nlohmann::json::parse(lines.back());
  std::string body;
  for (std::size_t i = 0; i + 1 < lines.size(); ++i) body += lines[i] + "\n";
  char hex[9];
  std::snprintf(hex, sizeof hex, "%08x", crc32_oracle(body));
  EXPECT_EQ(trailer.at("checksum"), hex);
  EXPECT_EQ(trailer.at("entries"), log.entries.size());
}

TEST(EventLog, EntryRoundTrip) {
  const EventLogEntry e{12, 36000, 402, MessageKind::Move, {{"to", "arcade"}}};
  const auto line = encode_entry(e);
  EXPECT_NE(line.find(R"("dir":"in")"), std::string::npos);
  EXPECT_EQ(decode_entry(line), e);
  auto flipped = line;
  flipped.replace(flipped.find(R"("dir":"in")"), 10, R"("dir":"ou")");
  EXPECT_THROW(decode_entry(flipped), std::exception);
}

TEST(EventLog, WriterRejectsOutOfOrder) {
  std::ostringstream out;
  EventLogWriter w(out, nlohmann::json::object());
  w.append({1, 0, 390, MessageKind::StateSnapshot, {}});
  EXPECT_THROW(w.append({3, 0, 390, MessageKind::ClockTick, {}}), LogError);
  EXPECT_THROW(w.append({1, 0, 390, MessageKind::ClockTick, {}}), LogError);
  w.append({2, 3000, 391, MessageKind::ClockTick, {}});
  EXPECT_THROW(w.append({3, 3000, 390, MessageKind::ClockTick, {}}), LogError);
  w.close();
  EXPECT_THROW(w.append({3, 6000, 392, MessageKind::ClockTick, {}}), LogError);
}

TEST(EventLog, AbortBeforeStartIsHeaderOnly) {
  const auto plan = make_session_plan(6, testkit::content(), 1);
  testkit::LogCapture cap(plan);
  SessionRunner runner(plan, cap.sink());
  EXPECT_TRUE(runner.abort().empty());
  const auto text = cap.close();
  EXPECT_EQ(lines_of(text).size(), 2u);
  std::istringstream in(text);
  const auto log = read_log(in);
  EXPECT_TRUE(log.entries.empty());
  EXPECT_EQ(log.header.at("plan").at("session_number"), 6);
}

TEST(EventLog, TruncationReportsLastGoodSeq) {
  const auto text = full_day_log();
  auto lines = lines_of(text);
  // Cut in the middle of entry 100: entries 1..99 are intact.
  std::string cut = join({lines.begin(), lines.begin() + 100}) + lines[100].substr(0, lines[100].size() / 2);
  EXPECT_EQ(last_good_of(cut), 99u);
  // Whole lines but no trailer.
  EXPECT_EQ(last_good_of(join({lines.begin(), lines.begin() + 51})), 50u);
  // Trailer without its newline.
  EXPECT_EQ(last_good_of(text.substr(0, text.size() - 1)), lines.size() - 2);
}

TEST(EventLog, CorruptionIsDetected) {
  auto lines = lines_of(full_day_log());
  const auto last_entry = lines.size() - 2;

  auto gap = lines;
  gap.erase(gap.begin() + 40);
  EXPECT_EQ(last_good_of(join(gap)), 39u);

  auto tampered = lines;
  const auto pos = tampered[200].find("\"vtime\":");
  ASSERT_NE(pos, std::string::npos);
  tampered[200].insert(pos, "\"note\":1,");
  EXPECT_EQ(last_good_of(join(tampered)), last_entry);

  auto extra = lines;
  extra.push_back("{}");
  EXPECT_EQ(last_good_of(join(extra)), last_entry);

  auto garbage = lines;
  garbage[10] = "not json";
  EXPECT_EQ(last_good_of(join(garbage)), 9u);

  EXPECT_EQ(last_good_of(""), 0u);
  EXPECT_EQ(last_good_of("{\"kind\":\"header\",\"seq\":0,\"payload\":{\"format\":\"other\"}}\n"), 0u);
}
