#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace pmt {

enum class Direction { ClientToEngine, EngineToClient };

enum class MessageKind {
  // client -> engine
  Join,
  AckBriefing,
  Move,
  Interact,
  SelectChoice,
  StartDistractor,
  StopDistractor,
  Pause,
  Resume,
  VitAnswer,
  // engine -> client
  StateSnapshot,
  ClockTick,
  TaskBriefing,
  TaskPopup,
  Reminder,
  AlertSound,
  DialogConfirm,
  TaskResult,
  VitItem,
  SessionEnd,
  Cue,
  Rejected,
};

std::string_view to_string(MessageKind kind);
std::optional<MessageKind> message_kind_from_string(std::string_view name);
Direction direction_of(MessageKind kind);

namespace command {

struct Join {
  std::string participant;
  bool operator==(const Join&) const = default;
};
struct AckBriefing {
  bool operator==(const AckBriefing&) const = default;
};
struct Move {
  std::string to;
  bool operator==(const Move&) const = default;
};
/// Without an action this opens the object's dialog; with one it also performs the choice.
struct Interact {
  std::string object;
  std::optional<std::string> action;
  bool operator==(const Interact&) const = default;
};
struct SelectChoice {
  std::string object;
  std::string choice;
  bool operator==(const SelectChoice&) const = default;
};
struct StartDistractor {
  std::string point;
  bool operator==(const StartDistractor&) const = default;
};
struct StopDistractor {
  bool operator==(const StopDistractor&) const = default;
};
struct Pause {
  bool operator==(const Pause&) const = default;
};
struct Resume {
  bool operator==(const Resume&) const = default;
};
struct VitAnswer {
  int index = 0;
  std::string choice;
  bool operator==(const VitAnswer&) const = default;
};

}  // namespace command

using Command = std::variant<command::Join, command::AckBriefing, command::Move, command::Interact,
                             command::SelectChoice, command::StartDistractor, command::StopDistractor,
                             command::Pause, command::Resume, command::VitAnswer>;

MessageKind kind_of(const Command& cmd);

}  // namespace pmt
