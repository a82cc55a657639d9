#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <boost/crc.hpp>
#include <nlohmann/json.hpp>

#include "pmt/messages.hpp"
#include "pmt/vclock.hpp"

namespace pmt {

inline constexpr const char* kLogFormat = "pmtlog/1";

struct EventLogEntry {
  std::uint64_t seq = 0;
  RealMillis real_ms = 0;
  VirtualMinutes vtime = 0;
  MessageKind kind = MessageKind::ClockTick;
  nlohmann::json payload = nlohmann::json::object();

  Direction direction() const { return direction_of(kind); }
  bool operator==(const EventLogEntry&) const = default;
};

std::string encode_entry(const EventLogEntry& entry);
EventLogEntry decode_entry(const std::string& line);

/// Line-per-entry writer. The header is entry 0; the last line carries a CRC-32 of everything before it.
class EventLogWriter {
 public:
  /// `created_at` is informational; leave it empty for byte-identical logs across runs.
  EventLogWriter(std::ostream& sink, const nlohmann::json& plan, const std::string& created_at = {});

  /// Requires entry.seq == previous + 1 and non-decreasing vtime; throws LogError otherwise.
  void append(const EventLogEntry& entry);
  /// Writes the checksum line and flushes. Further appends are errors.
  void close();

  std::uint64_t last_seq() const { return last_seq_; }
  bool closed() const { return closed_; }

 private:
  void write_line(const std::string& line);

  std::ostream& sink_;
  boost::crc_32_type crc_;
  std::uint64_t last_seq_ = 0;
  VirtualMinutes last_vtime_ = 0;
  bool closed_ = false;
};

struct EventLog {
  nlohmann::json header;  // payload of entry 0
  std::vector<EventLogEntry> entries;
};

/// Parses and verifies a complete log. Truncation, malformed lines, seq gaps and checksum
/// mismatches raise LogError carrying the last seq that parsed cleanly.
EventLog read_log(std::istream& in);

}  // namespace pmt
