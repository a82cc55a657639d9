#pragma once

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "pmt/content.hpp"
#include "pmt/eventlog.hpp"
#include "pmt/session.hpp"

namespace pmt::testkit {

inline const Content& content() {
  static const Content c = load_content(PMT_TEST_CONTENT_DIR);
  return c;
}

inline std::filesystem::path fixture_dir() { return PMT_TEST_FIXTURE_DIR; }

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("pmt-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Collects log entries and writes them to an in-memory .pmtlog when closed.
struct LogCapture {
  std::ostringstream text;
  EventLogWriter writer;
  std::vector<EventLogEntry> entries;

  explicit LogCapture(const SessionPlan& plan) : writer(text, plan.to_json()) {}

  LogSink sink() {
    return [this](const EventLogEntry& e) {
      entries.push_back(e);
      writer.append(e);
    };
  }

  std::string close() {
    writer.close();
    return text.str();
  }
};

inline std::vector<std::string> kinds(const std::vector<ProtocolMessage>& messages) {
  std::vector<std::string> out;
  for (const auto& m : messages) out.emplace_back(to_string(m.kind));
  return out;
}

inline const ProtocolMessage* find_kind(const std::vector<ProtocolMessage>& messages, MessageKind kind) {
  for (const auto& m : messages)
    if (m.kind == kind) return &m;
  return nullptr;
}

}  // namespace pmt::testkit
