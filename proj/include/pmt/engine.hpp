#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pmt/messages.hpp"
#include "pmt/taskmodel.hpp"
#include "pmt/vclock.hpp"
#include "pmt/vit.hpp"
#include "pmt/world.hpp"

namespace pmt {

enum class Phase { VitPlusPractice, Tutorial, Vrt };

std::string to_string(Phase p);
Phase phase_from_string(const std::string& s);

inline constexpr const char* kDefaultReminderMessage = "Oops, it's time for your scheduled task.";

/// Everything one session needs, self-contained so a log header can carry it verbatim.
struct SessionPlan {
  int session_number = 5;
  Phase phase = Phase::Vrt;
  std::string participant;
  std::vector<int> vit_levels;
  std::optional<int> vrt_level;
  DayPlan day_plan;
  bool scored = true;
  std::vector<VitItem> vit_items;
  std::shared_ptr<const WorldModel> world;
  ClockConfig clock;
  PlanRules rules;
  std::string reminder_message = kDefaultReminderMessage;
  std::uint64_t seed = 0;

  /// Checks the schedule shape (sessions 1-3 VIT, 4 tutorial, 5-8 levels 1-4) and the day plan against the world.
  void validate() const;

  nlohmann::json to_json() const;
  static SessionPlan from_json(const nlohmann::json& node);
};

/// Earlier sessions of the eight-session program whose day contained `task`.
int prior_exposures(const PmTask& task, int session_number);

/// One emitted engine event, stamped with the engine clock at emission.
struct Event {
  MessageKind kind;
  nlohmann::json payload;
  RealMillis real_ms = 0;
  VirtualMinutes vtime = 0;

  bool operator==(const Event&) const = default;
};

struct TaskSlot {
  PmTask task;
  bool presented = false;
  VirtualMinutes remembered_at = 0;
  VirtualSeconds remembered_at_s = 0;
  bool resolved = false;
  bool reminded = false;
  bool wrong_attempt = false;
  bool cue_seen = false;
};

struct SessionState {
  VirtualClock clock;
  std::string location;
  bool in_transit = false;
  std::vector<TaskSlot> tasks;
  std::vector<TaskOutcome> outcomes;  // in resolution order
  std::optional<std::string> distractor;
  std::vector<std::string> npcs_here;
  bool started = false;
  bool briefing_pending = false;
  bool vit_pending = false;
  bool operator_paused = false;
  bool day_ended = false;
  std::string end_reason;
  std::size_t vit_cursor = 0;
  std::vector<VitLevelResult> vit_results;
  int achieved_count = 0;

  bool running() const { return started && !briefing_pending && !vit_pending && !operator_paused && !day_ended; }
};

struct CategoryRate {
  int achieved = 0;
  int total = 0;

  std::optional<double> rate() const {
    if (total == 0) return std::nullopt;
    return static_cast<double>(achieved) / total;
  }
  bool operator==(const CategoryRate&) const = default;
};

struct AchievementRates {
  CategoryRate total, regular, irregular, time_based, event_based;
  bool operator==(const AchievementRates&) const = default;
};

AchievementRates compute_rates(const std::vector<PmTask>& tasks, const std::vector<TaskOutcome>& outcomes);

struct TaskDuration {
  std::string task_id;
  VirtualSeconds seconds = 0;
  bool operator==(const TaskDuration&) const = default;
};

/// Immutable outcome of one session.
struct SessionRecord {
  int session_number = 0;
  Phase phase = Phase::Vrt;
  std::string participant;
  std::optional<int> vrt_level;
  bool scored = false;
  std::uint64_t seed = 0;
  std::vector<TaskOutcome> outcomes;  // plan order
  AchievementRates rates;
  std::vector<TaskDuration> durations;  // executed tasks only
  std::vector<VitLevelResult> vit_results;
  std::string end_reason;
  VirtualMinutes end_vtime = 0;

  bool operator==(const SessionRecord&) const = default;

  nlohmann::json to_json() const;
  static SessionRecord from_json(const nlohmann::json& node);
};

/// Single-writer session state machine. Every call returns the events it emitted, in order.
class Engine {
 public:
  explicit Engine(SessionPlan plan);

  /// Presents the briefing (or the first imagery item). The clock stays paused until the briefing is acknowledged.
  std::vector<Event> start();
  /// Throws CommandError when the command cannot apply; the state is then unchanged.
  std::vector<Event> handle(const Command& cmd);
  std::vector<Event> tick(RealMillis delta_real_ms);
  /// Operator abort: finalizes unresolved tasks and emits session_end.
  std::vector<Event> abort();
  /// Requires a finished session (day end or abort).
  SessionRecord finish() const;

  const SessionState& state() const { return state_; }
  const SessionPlan& plan() const { return plan_; }
  const WorldModel& world() const { return *plan_.world; }
  bool ended() const { return state_.day_ended; }

  /// Whether the cue of an event-based task is satisfied in the current context.
  bool cue_active(const CueCondition& cue) const;
  /// Whether `target` (object or character id) can be touched from the current location right now.
  bool reachable(const std::string& target) const;
  /// Task ids presented and not yet resolved, in plan order.
  std::vector<std::string> active_task_ids() const;

 private:
  void emit(std::vector<Event>& out, MessageKind kind, nlohmann::json payload) const;
  void snapshot(std::vector<Event>& out, const std::string& reason) const;
  void present(TaskSlot& slot);
  void brief(std::vector<Event>& out, const std::string& mode);
  void advance_clock(RealMillis delta, std::vector<Event>& out);
  void process_minute(VirtualMinutes minute, std::vector<Event>& out);
  void refresh_context(std::vector<Event>& out);
  void finalize(const std::string& reason, std::vector<Event>& out);
  void resolve_choice(const std::string& target, const std::string& choice, std::vector<Event>& out);
  void execute(TaskSlot& slot, const std::string& action, std::vector<Event>& out);
  void require_running() const;
  const std::vector<std::string>& menu_of(const std::string& target) const;

  void on(const command::Join& c, std::vector<Event>& out);
  void on(const command::AckBriefing& c, std::vector<Event>& out);
  void on(const command::Move& c, std::vector<Event>& out);
  void on(const command::Interact& c, std::vector<Event>& out);
  void on(const command::SelectChoice& c, std::vector<Event>& out);
  void on(const command::StartDistractor& c, std::vector<Event>& out);
  void on(const command::StopDistractor& c, std::vector<Event>& out);
  void on(const command::Pause& c, std::vector<Event>& out);
  void on(const command::Resume& c, std::vector<Event>& out);
  void on(const command::VitAnswer& c, std::vector<Event>& out);

  SessionPlan plan_;
  SessionState state_;
};

nlohmann::json public_task_json(const PmTask& task);

}  // namespace pmt
