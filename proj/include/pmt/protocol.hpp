#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "pmt/engine.hpp"
#include "pmt/messages.hpp"

namespace pmt {

struct ProtocolMessage {
  MessageKind kind = MessageKind::Join;
  std::uint64_t seq = 0;
  nlohmann::json payload = nlohmann::json::object();

  Direction direction() const { return direction_of(kind); }
  bool operator==(const ProtocolMessage&) const = default;
};

/// One line, no trailing newline: {"kind":..,"seq":..,"payload":{..}} with payload keys sorted.
std::string encode(const ProtocolMessage& message);
/// Throws ProtocolError for malformed frames and unknown kinds (naming the kind).
ProtocolMessage decode(std::string_view frame);

/// Payload <-> command. Payload fields are validated by kind; extra fields are rejected.
ProtocolMessage to_message(const Command& cmd, std::uint64_t seq);
Command to_command(const ProtocolMessage& message);

ProtocolMessage to_message(const Event& event, std::uint64_t seq);

/// Enforces strictly increasing seq on one direction of one connection.
class SequenceGuard {
 public:
  /// Throws ProtocolError when `seq` does not exceed the last accepted one.
  void accept(std::uint64_t seq);
  std::optional<std::uint64_t> last() const { return last_; }

 private:
  std::optional<std::uint64_t> last_;
};

}  // namespace pmt
