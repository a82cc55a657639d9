#include "pmt/eventlog.hpp"

#include <cstdio>
#include <istream>
#include <ostream>

#include "pmt/error.hpp"

namespace pmt {

namespace {

using json = nlohmann::json;

std::string hex32(std::uint32_t v) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", v);
  return buf;
}

}  // namespace

std::string encode_entry(const EventLogEntry& e) {
  std::string out = R"({"kind":")";
  out += to_string(e.kind);
  out += R"(","seq":)" + std::to_string(e.seq);
  out += R"(,"real_ms":)" + std::to_string(e.real_ms);
  out += R"(,"vtime":)" + std::to_string(e.vtime);
  out += R"(,"dir":")";
  out += e.direction() == Direction::ClientToEngine ? "in" : "out";
  out += R"(","payload":)" + e.payload.dump() + "}";
  return out;
}

EventLogEntry decode_entry(const std::string& line) {
  const json j = json::parse(line);
  const auto name = j.at("kind").get<std::string>();
  const auto kind = message_kind_from_string(name);
  if (!kind) throw std::invalid_argument("unknown kind '" + name + "'");
  EventLogEntry e{j.at("seq").get<std::uint64_t>(), j.at("real_ms").get<RealMillis>(), j.at("vtime").get<VirtualMinutes>(),
                  *kind, j.at("payload")};
  const auto dir = j.at("dir").get<std::string>();
  if (dir != (e.direction() == Direction::ClientToEngine ? "in" : "out"))
    throw std::invalid_argument("direction does not match kind '" + name + "'");
  return e;
}

EventLogWriter::EventLogWriter(std::ostream& sink, const json& plan, const std::string& created_at) : sink_(sink) {
  json payload{{"format", kLogFormat}, {"plan", plan}};
  if (!created_at.empty()) payload["created_at"] = created_at;
  write_line(R"({"kind":"header","seq":0,"payload":)" + payload.dump() + "}");
}

void EventLogWriter::write_line(const std::string& line) {
  crc_.process_bytes(line.data(), line.size());
  crc_.process_byte('\n');
  sink_ << line << '\n';
  if (!sink_) throw LogError("log sink write failed", last_seq_);
}

void EventLogWriter::append(const EventLogEntry& entry) {
  if (closed_) throw LogError("log already closed", last_seq_);
  if (entry.seq != last_seq_ + 1)
    throw LogError("out-of-order seq " + std::to_string(entry.seq) + " after " + std::to_string(last_seq_), last_seq_);
  if (entry.vtime < last_vtime_) throw LogError("vtime went backwards at seq " + std::to_string(entry.seq), last_seq_);
  write_line(encode_entry(entry));
  last_seq_ = entry.seq;
  last_vtime_ = entry.vtime;
}

void EventLogWriter::close() {
  if (closed_) return;
  const json trailer{{"checksum", hex32(crc_.checksum())}, {"entries", last_seq_}};
  sink_ << trailer.dump() << '\n';
  sink_.flush();
  closed_ = true;
  if (!sink_) throw LogError("log sink flush failed", last_seq_);
}

EventLog read_log(std::istream& in) {
  EventLog log;
  boost::crc_32_type crc;
  std::string line;
  std::uint64_t last_good = 0;
  bool have_header = false;
  VirtualMinutes last_vtime = 0;
  while (std::getline(in, line)) {
    if (in.eof()) throw LogError("truncated log: last line has no terminator", last_good);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error&) {
      throw LogError("malformed log line after seq " + std::to_string(last_good), last_good);
    }
    if (!have_header) {
      if (j.value("kind", std::string()) != "header" || !j.contains("payload") ||
          j["payload"].value("format", std::string()) != kLogFormat)
        throw LogError("missing or unsupported log header", 0);
      log.header = j["payload"];
      have_header = true;
    } else if (j.contains("checksum")) {
      if (j.value("entries", std::uint64_t{0}) != last_good)
        throw LogError("checksum line counts " + std::to_string(j.value("entries", 0)) + " entries, log has " +
                           std::to_string(last_good),
                       last_good);
      if (j["checksum"].get<std::string>() != hex32(crc.checksum())) throw LogError("checksum mismatch", last_good);
      if (std::getline(in, line)) throw LogError("data after checksum line", last_good);
      return log;
    } else {
      EventLogEntry e;
      try {
        e = decode_entry(line);
      } catch (const std::exception&) {
        throw LogError("malformed log entry after seq " + std::to_string(last_good), last_good);
      }
      if (e.seq != last_good + 1)
        throw LogError("seq gap: " + std::to_string(e.seq) + " after " + std::to_string(last_good), last_good);
      if (e.vtime < last_vtime) throw LogError("vtime went backwards at seq " + std::to_string(e.seq), last_good);
      last_vtime = e.vtime;
      last_good = e.seq;
      log.entries.push_back(std::move(e));
    }
    crc.process_bytes(line.data(), line.size());
    crc.process_byte('\n');
  }
  throw LogError(have_header ? "truncated log: no checksum line" : "empty log", last_good);
}

}  // namespace pmt
