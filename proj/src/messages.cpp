#include "pmt/messages.hpp"

#include <array>
#include <utility>

namespace pmt {

namespace {

constexpr std::array<std::pair<MessageKind, std::string_view>, 22> kNames{{
    {MessageKind::Join, "join"},
    {MessageKind::AckBriefing, "ack_briefing"},
    {MessageKind::Move, "move"},
    {MessageKind::Interact, "interact"},
    {MessageKind::SelectChoice, "select_choice"},
    {MessageKind::StartDistractor, "start_distractor"},
    {MessageKind::StopDistractor, "stop_distractor"},
    {MessageKind::Pause, "pause"},
    {MessageKind::Resume, "resume"},
    {MessageKind::VitAnswer, "vit_answer"},
    {MessageKind::StateSnapshot, "state_snapshot"},
    {MessageKind::ClockTick, "clock_tick"},
    {MessageKind::TaskBriefing, "task_briefing"},
    {MessageKind::TaskPopup, "task_popup"},
    {MessageKind::Reminder, "reminder"},
    {MessageKind::AlertSound, "alert_sound"},
    {MessageKind::DialogConfirm, "dialog_confirm"},
    {MessageKind::TaskResult, "task_result"},
    {MessageKind::VitItem, "vit_item"},
    {MessageKind::SessionEnd, "session_end"},
    {MessageKind::Cue, "cue"},
    {MessageKind::Rejected, "rejected"},
}};

}  // namespace

std::string_view to_string(MessageKind kind) {
  for (const auto& [k, name] : kNames)
    if (k == kind) return name;
  return {};
}

std::optional<MessageKind> message_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kNames)
    if (n == name) return k;
  return std::nullopt;
}

Direction direction_of(MessageKind kind) {
  return static_cast<int>(kind) <= static_cast<int>(MessageKind::VitAnswer) ? Direction::ClientToEngine
                                                                             : Direction::EngineToClient;
}

MessageKind kind_of(const Command& cmd) {
  return static_cast<MessageKind>(cmd.index());
}

}  // namespace pmt
