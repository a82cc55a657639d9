#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pmt/vclock.hpp"
#include "pmt/world.hpp"

namespace pmt {

enum class CueType { TimeBased, EventBased };
enum class Regularity { Regular, Irregular };

struct CueCondition {
  enum class Kind { NpcEncounter, LocationEnter, Activity, ObjectProximity };

  Kind kind = Kind::LocationEnter;
  std::string ref;  // npc, location, activity or object id

  bool operator==(const CueCondition&) const = default;
};

struct PmTask {
  std::string id;
  std::string description;
  CueType cue_type = CueType::EventBased;
  Regularity regularity = Regularity::Regular;
  /// Mid-day presentation minute; nullopt means the task is shown at the briefing.
  std::optional<VirtualMinutes> presented_at;
  std::optional<VirtualMinutes> designated_time;  // time-based only
  std::optional<CueCondition> cue;                // event-based only
  std::string target_object;                      // object or character id
  std::string target_action;
  /// Training level this catalog entry is tied to (irregular tasks only).
  std::optional<int> pinned_level;

  bool time_based() const { return cue_type == CueType::TimeBased; }
  bool regular() const { return regularity == Regularity::Regular; }
  VirtualMinutes presentation_minute(const ClockConfig& clock) const { return presented_at.value_or(clock.day_start); }

  bool operator==(const PmTask&) const = default;
};

/// Acceptance window around a designated time, in virtual minutes (inclusive on both ends).
inline constexpr int kWindowBefore = 15;
inline constexpr int kWindowAfter = 10;

enum class TimingStatus { OnTime, Early, Late };

enum class OutcomeStatus { OnTime, Early, LateAfterReminder, WrongActionThenCorrect, Missed };

std::string to_string(TimingStatus s);
std::string to_string(OutcomeStatus s);
OutcomeStatus outcome_status_from_string(const std::string& s);
std::string to_string(CueType t);
std::string to_string(Regularity r);
std::string to_string(CueCondition::Kind k);

struct TaskOutcome {
  std::string task_id;
  OutcomeStatus status = OutcomeStatus::Missed;
  VirtualMinutes remembered_at = 0;
  std::optional<VirtualMinutes> executed_at;
  VirtualSeconds remembered_at_s = 0;
  std::optional<VirtualSeconds> executed_at_s;
  bool achieved = false;
  bool reminded = false;
  /// Event-based only: whether the cue context was present at the moment of execution.
  std::optional<bool> cue_active;

  std::optional<VirtualSeconds> duration_s() const {
    if (!executed_at_s) return std::nullopt;
    return *executed_at_s - remembered_at_s;
  }

  bool operator==(const TaskOutcome&) const = default;
};

/// Irregular tasks per level: how many time-based and how many event-based.
struct LevelMix {
  int time_based = 0;
  int event_based = 0;
  int total() const { return time_based + event_based; }
  bool operator==(const LevelMix&) const = default;
};

struct PlanRules {
  int regular_time = 2;
  int regular_event = 3;
  std::array<LevelMix, 4> irregular{{{1, 1}, {2, 1}, {2, 2}, {3, 2}}};
  int min_spacing = 60;  // minimum gap between designated times, virtual minutes

  bool operator==(const PlanRules&) const = default;
};

struct DayPlan {
  int level = 0;  // 1..4 for scored days, 0 for practice and tutorial days
  std::vector<PmTask> tasks;

  int count(Regularity r, CueType c) const;
  const PmTask* find(const std::string& id) const;
  bool operator==(const DayPlan&) const = default;
};

struct TaskCatalog {
  std::vector<PmTask> tasks;

  std::vector<const PmTask*> select(Regularity r, CueType c) const;
  const PmTask* find(const std::string& id) const;
};

/// on_time iff designated - 15 <= executed_at <= designated + 10.
TimingStatus evaluate_time_based(const PmTask& task, VirtualMinutes executed_at);

/// Completion-only scoring: executed at or after presentation and no later than day end.
bool evaluate_event_based(const PmTask& task, std::optional<VirtualMinutes> executed_at,
                          const ClockConfig& clock = {});

/// Builds all four scored day plans at once so irregular tasks never repeat across levels.
std::array<DayPlan, 4> build_program(const TaskCatalog& catalog, std::uint64_t seed, const PlanRules& rules = {});
DayPlan build_day_plan(int level, const TaskCatalog& catalog, std::uint64_t seed, const PlanRules& rules = {});
/// Unscored practice day (regular event-based tasks) and tutorial day (all regular tasks).
DayPlan practice_plan(const TaskCatalog& catalog);
DayPlan tutorial_plan(const TaskCatalog& catalog);

/// Ids of time-based tasks whose window closed at exactly `vtime - 1` without an execution.
std::vector<std::string> due_reminders(const DayPlan& plan, const std::vector<TaskOutcome>& resolved,
                                       VirtualMinutes vtime);

/// Checks counts and spacing of a scored day plan against the rules.
void validate_day_plan(const DayPlan& plan, const PlanRules& rules, const ClockConfig& clock);

/// Structural checks on each entry plus cross-checks of targets, cues and choice menus against the world.
void validate_catalog(const TaskCatalog& catalog, const WorldModel& world, const ClockConfig& clock);

nlohmann::json to_json(const PmTask& task);
PmTask task_from_json(const nlohmann::json& node);
nlohmann::json to_json(const TaskOutcome& outcome);
TaskOutcome outcome_from_json(const nlohmann::json& node);
nlohmann::json to_json(const DayPlan& plan);
DayPlan day_plan_from_json(const nlohmann::json& node);

nlohmann::json to_json(const PlanRules& rules);
PlanRules plan_rules_from_json(const nlohmann::json& node);
nlohmann::json to_json(const ClockConfig& clock);
ClockConfig clock_config_from_json(const nlohmann::json& node);

TaskCatalog load_catalog(const nlohmann::json& doc);
TaskCatalog load_catalog_files(const std::vector<std::filesystem::path>& paths);

}  // namespace pmt
