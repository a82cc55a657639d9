#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "pmt/engine.hpp"
#include "pmt/eventlog.hpp"
#include "pmt/protocol.hpp"

namespace pmt {

using LogSink = std::function<void(const EventLogEntry&)>;

/// Engine plus the session-wide seq counter. Commands and engine events share one numbering so
/// the log is contiguous; rejected commands are answered with a `rejected` event instead of an exception.
class SessionRunner {
 public:
  explicit SessionRunner(SessionPlan plan, LogSink sink = {});

  std::vector<ProtocolMessage> start();
  std::vector<ProtocolMessage> submit(const Command& cmd);
  std::vector<ProtocolMessage> advance(RealMillis delta);
  /// Advances the engine clock to an absolute elapsed time. Throws std::invalid_argument when that is in the past.
  std::vector<ProtocolMessage> advance_to(RealMillis elapsed);
  /// Answers a frame that never became a command (malformed, out of order). Logged so replay can repeat it.
  std::vector<ProtocolMessage> reject_frame(const std::string& reason);
  /// Ends the session early. A session never started produces nothing.
  std::vector<ProtocolMessage> abort();

  const Engine& engine() const { return engine_; }
  bool started() const { return started_; }
  bool ended() const { return engine_.ended(); }
  std::uint64_t last_seq() const { return seq_; }

 private:
  std::vector<ProtocolMessage> publish(const std::vector<Event>& events);

  Engine engine_;
  LogSink sink_;
  std::uint64_t seq_ = 0;
  bool started_ = false;
};

struct ReplayResult {
  SessionPlan plan;
  SessionRecord record;
  std::vector<EventLogEntry> entries;
};

/// Re-drives a fresh engine with the logged commands at their logged times and checks that every
/// regenerated entry matches the log. Divergence, truncation and checksum errors raise LogError.
ReplayResult replay(std::istream& log);

}  // namespace pmt
