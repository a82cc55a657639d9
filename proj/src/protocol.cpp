#include "pmt/protocol.hpp"

#include <set>

#include "pmt/error.hpp"

namespace pmt {

namespace {

using json = nlohmann::json;

void expect_fields(const ProtocolMessage& m, std::initializer_list<const char*> required,
                   std::initializer_list<const char*> optional = {}) {
  const std::string kind(to_string(m.kind));
  std::set<std::string> allowed;
  for (const char* f : required) {
    allowed.insert(f);
    if (!m.payload.contains(f)) throw ProtocolError(kind + ": missing field '" + f + "'");
  }
  for (const char* f : optional) allowed.insert(f);
  for (const auto& [key, _] : m.payload.items())
    if (!allowed.count(key)) throw ProtocolError(kind + ": unexpected field '" + key + "'");
}

std::string text_field(const ProtocolMessage& m, const char* key) {
  const auto& v = m.payload.at(key);
  if (!v.is_string()) throw ProtocolError(std::string(to_string(m.kind)) + ": '" + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

std::string encode(const ProtocolMessage& message) {
  if (!message.payload.is_object()) throw ProtocolError("payload must be an object");
  std::string out = R"({"kind":")";
  out += to_string(message.kind);
  out += R"(","seq":)";
  out += std::to_string(message.seq);
  out += R"(,"payload":)";
  try {
    out += message.payload.dump(-1, ' ', false, json::error_handler_t::strict);
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("unserializable payload: ") + e.what());
  }
  out += '}';
  return out;
}

ProtocolMessage decode(std::string_view frame) {
  if (!frame.empty() && frame.back() == '\n') frame.remove_suffix(1);
  if (!frame.empty() && frame.back() == '\r') frame.remove_suffix(1);
  json doc;
  try {
    doc = json::parse(frame);
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("malformed frame: ") + e.what());
  }
  if (!doc.is_object()) throw ProtocolError("frame must be an object");
  for (const auto& [key, _] : doc.items())
    if (key != "kind" && key != "seq" && key != "payload") throw ProtocolError("frame has unexpected field '" + key + "'");
  if (!doc.contains("kind") || !doc["kind"].is_string()) throw ProtocolError("frame has no kind");
  const auto name = doc["kind"].get<std::string>();
  const auto kind = message_kind_from_string(name);
  if (!kind) throw ProtocolError("unknown message kind '" + name + "'");
  if (!doc.contains("seq") || !doc["seq"].is_number_unsigned()) throw ProtocolError(name + ": seq must be a non-negative integer");
  ProtocolMessage m{*kind, doc["seq"].get<std::uint64_t>(), doc.value("payload", json::object())};
  if (!m.payload.is_object()) throw ProtocolError(name + ": payload must be an object");
  return m;
}

ProtocolMessage to_message(const Command& cmd, std::uint64_t seq) {
  ProtocolMessage m{kind_of(cmd), seq, json::object()};
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, command::Join>) {
          m.payload["participant"] = c.participant;
        } else if constexpr (std::is_same_v<T, command::Move>) {
          m.payload["to"] = c.to;
        } else if constexpr (std::is_same_v<T, command::Interact>) {
          m.payload["object"] = c.object;
          if (c.action) m.payload["action"] = *c.action;
        } else if constexpr (std::is_same_v<T, command::SelectChoice>) {
          m.payload["object"] = c.object;
          m.payload["choice"] = c.choice;
        } else if constexpr (std::is_same_v<T, command::StartDistractor>) {
          m.payload["point"] = c.point;
        } else if constexpr (std::is_same_v<T, command::VitAnswer>) {
          m.payload["index"] = c.index;
          m.payload["choice"] = c.choice;
        }
      },
      cmd);
  return m;
}

Command to_command(const ProtocolMessage& m) {
  if (m.direction() != Direction::ClientToEngine)
    throw ProtocolError("'" + std::string(to_string(m.kind)) + "' is not a client command");
  switch (m.kind) {
    case MessageKind::Join:
      expect_fields(m, {}, {"participant"});
      return command::Join{m.payload.contains("participant") ? text_field(m, "participant") : std::string()};
    case MessageKind::AckBriefing:
      expect_fields(m, {});
      return command::AckBriefing{};
    case MessageKind::Move:
      expect_fields(m, {"to"});
      return command::Move{text_field(m, "to")};
    case MessageKind::Interact: {
      expect_fields(m, {"object"}, {"action"});
      command::Interact c{text_field(m, "object"), std::nullopt};
      if (m.payload.contains("action")) c.action = text_field(m, "action");
      return c;
    }
    case MessageKind::SelectChoice:
      expect_fields(m, {"object", "choice"});
      return command::SelectChoice{text_field(m, "object"), text_field(m, "choice")};
    case MessageKind::StartDistractor:
      expect_fields(m, {"point"});
      return command::StartDistractor{text_field(m, "point")};
    case MessageKind::StopDistractor:
      expect_fields(m, {});
      return command::StopDistractor{};
    case MessageKind::Pause:
      expect_fields(m, {});
      return command::Pause{};
    case MessageKind::Resume:
      expect_fields(m, {});
      return command::Resume{};
    case MessageKind::VitAnswer: {
      expect_fields(m, {"index", "choice"});
      if (!m.payload["index"].is_number_integer()) throw ProtocolError("vit_answer: 'index' must be an integer");
      return command::VitAnswer{m.payload["index"].get<int>(), text_field(m, "choice")};
    }
    default:
      break;
  }
  throw ProtocolError("'" + std::string(to_string(m.kind)) + "' is not a client command");
}

ProtocolMessage to_message(const Event& event, std::uint64_t seq) { return {event.kind, seq, event.payload}; }

void SequenceGuard::accept(std::uint64_t seq) {
  if (last_ && seq <= *last_)
    throw ProtocolError("out-of-order seq " + std::to_string(seq) + " after " + std::to_string(*last_));
  last_ = seq;
}

}  // namespace pmt
