#include "pmt/taskmodel.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "pmt/error.hpp"
#include "pmt/json_util.hpp"
#include "pmt/rng.hpp"

namespace pmt {

std::string to_string(TimingStatus s) {
  switch (s) {
    case TimingStatus::OnTime: return "on_time";
    case TimingStatus::Early: return "early";
    case TimingStatus::Late: return "late";
  }
  return "";
}

std::string to_string(OutcomeStatus s) {
  switch (s) {
    case OutcomeStatus::OnTime: return "on_time";
    case OutcomeStatus::Early: return "early";
    case OutcomeStatus::LateAfterReminder: return "late_after_reminder";
    case OutcomeStatus::WrongActionThenCorrect: return "wrong_action_then_correct";
    case OutcomeStatus::Missed: return "missed";
  }
  return "";
}

OutcomeStatus outcome_status_from_string(const std::string& s) {
  for (auto st : {OutcomeStatus::OnTime, OutcomeStatus::Early, OutcomeStatus::LateAfterReminder,
                  OutcomeStatus::WrongActionThenCorrect, OutcomeStatus::Missed})
    if (to_string(st) == s) return st;
  throw ValidationError("unknown outcome status '" + s + "'");
}

std::string to_string(CueType t) { return t == CueType::TimeBased ? "time_based" : "event_based"; }
std::string to_string(Regularity r) { return r == Regularity::Regular ? "regular" : "irregular"; }

std::string to_string(CueCondition::Kind k) {
  switch (k) {
    case CueCondition::Kind::NpcEncounter: return "npc_encounter";
    case CueCondition::Kind::LocationEnter: return "location_enter";
    case CueCondition::Kind::Activity: return "activity";
    case CueCondition::Kind::ObjectProximity: return "object_proximity";
  }
  return "";
}

namespace {

CueCondition::Kind cue_kind_from_string(const std::string& s) {
  for (auto k : {CueCondition::Kind::NpcEncounter, CueCondition::Kind::LocationEnter, CueCondition::Kind::Activity,
                 CueCondition::Kind::ObjectProximity})
    if (to_string(k) == s) return k;
  throw ValidationError("unknown cue kind '" + s + "'");
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

int DayPlan::count(Regularity r, CueType c) const {
  return static_cast<int>(std::count_if(tasks.begin(), tasks.end(),
                                        [&](const PmTask& t) { return t.regularity == r && t.cue_type == c; }));
}

const PmTask* DayPlan::find(const std::string& id) const {
  for (const auto& t : tasks)
    if (t.id == id) return &t;
  return nullptr;
}

std::vector<const PmTask*> TaskCatalog::select(Regularity r, CueType c) const {
  std::vector<const PmTask*> out;
  for (const auto& t : tasks)
    if (t.regularity == r && t.cue_type == c) out.push_back(&t);
  return out;
}

const PmTask* TaskCatalog::find(const std::string& id) const {
  for (const auto& t : tasks)
    if (t.id == id) return &t;
  return nullptr;
}

TimingStatus evaluate_time_based(const PmTask& task, VirtualMinutes executed_at) {
  if (!task.time_based() || !task.designated_time)
    throw std::invalid_argument("evaluate_time_based: task '" + task.id + "' is not time-based");
  const VirtualMinutes d = *task.designated_time;
  if (executed_at < d - kWindowBefore) return TimingStatus::Early;
  if (executed_at > d + kWindowAfter) return TimingStatus::Late;
  return TimingStatus::OnTime;
}

bool evaluate_event_based(const PmTask& task, std::optional<VirtualMinutes> executed_at, const ClockConfig& clock) {
  if (task.time_based()) throw std::invalid_argument("evaluate_event_based: task '" + task.id + "' is time-based");
  return executed_at && *executed_at <= clock.day_end && *executed_at >= task.presentation_minute(clock);
}

namespace {

bool spaced(VirtualMinutes candidate, const std::vector<VirtualMinutes>& taken, int spacing) {
  return std::all_of(taken.begin(), taken.end(), [&](VirtualMinutes t) { return std::abs(t - candidate) >= spacing; });
}

}  // namespace

std::array<DayPlan, 4> build_program(const TaskCatalog& catalog, std::uint64_t seed, const PlanRules& rules) {
  Rng rng(seed);
  std::array<DayPlan, 4> program;

  auto regular_time = catalog.select(Regularity::Regular, CueType::TimeBased);
  auto regular_event = catalog.select(Regularity::Regular, CueType::EventBased);
  if (static_cast<int>(regular_time.size()) < rules.regular_time ||
      static_cast<int>(regular_event.size()) < rules.regular_event)
    throw ValidationError("catalog: not enough regular tasks (need " + std::to_string(rules.regular_time) +
                          " time-based and " + std::to_string(rules.regular_event) + " event-based)");
  regular_time.resize(static_cast<std::size_t>(rules.regular_time));
  regular_event.resize(static_cast<std::size_t>(rules.regular_event));

  // Unpinned irregular entries form one pool per cue type, drawn without replacement across the program.
  std::map<CueType, std::vector<const PmTask*>> pool;
  for (auto type : {CueType::TimeBased, CueType::EventBased}) {
    for (const PmTask* t : catalog.select(Regularity::Irregular, type))
      if (!t->pinned_level) pool[type].push_back(t);
    shuffle(pool[type], rng);
  }

  for (int level = 1; level <= 4; ++level) {
    DayPlan& plan = program[static_cast<std::size_t>(level - 1)];
    plan.level = level;
    std::vector<VirtualMinutes> times;
    for (const PmTask* t : regular_time) {
      plan.tasks.push_back(*t);
      times.push_back(*t->designated_time);
    }
    for (const PmTask* t : regular_event) plan.tasks.push_back(*t);

    const LevelMix& mix = rules.irregular[static_cast<std::size_t>(level - 1)];
    for (auto type : {CueType::TimeBased, CueType::EventBased}) {
      const int wanted = type == CueType::TimeBased ? mix.time_based : mix.event_based;
      int taken = 0;
      for (const PmTask* t : catalog.select(Regularity::Irregular, type)) {
        if (t->pinned_level != level) continue;
        if (taken == wanted)
          throw ValidationError("catalog: more " + to_string(type) + " tasks pinned to level " +
                                std::to_string(level) + " than the level allows");
        if (t->time_based()) {
          if (!spaced(*t->designated_time, times, rules.min_spacing))
            throw ValidationError("catalog: task '" + t->id + "' is pinned too close to another designated time");
          times.push_back(*t->designated_time);
        }
        plan.tasks.push_back(*t);
        ++taken;
      }
      auto& candidates = pool[type];
      for (auto it = candidates.begin(); it != candidates.end() && taken < wanted;) {
        const PmTask* t = *it;
        if (t->time_based() && !spaced(*t->designated_time, times, rules.min_spacing)) {
          ++it;
          continue;
        }
        if (t->time_based()) times.push_back(*t->designated_time);
        plan.tasks.push_back(*t);
        it = candidates.erase(it);
        ++taken;
      }
      if (taken < wanted)
        throw ValidationError("catalog: insufficient irregular " + to_string(type) + " tasks for level " +
                              std::to_string(level) + " (need " + std::to_string(wanted) + ", found " +
                              std::to_string(taken) + ")");
    }
  }
  return program;
}

DayPlan build_day_plan(int level, const TaskCatalog& catalog, std::uint64_t seed, const PlanRules& rules) {
  if (level < 1 || level > 4) throw std::invalid_argument("build_day_plan: level must be 1..4");
  return build_program(catalog, seed, rules)[static_cast<std::size_t>(level - 1)];
}

DayPlan practice_plan(const TaskCatalog& catalog) {
  DayPlan plan;
  for (const PmTask* t : catalog.select(Regularity::Regular, CueType::EventBased)) plan.tasks.push_back(*t);
  return plan;
}

DayPlan tutorial_plan(const TaskCatalog& catalog) {
  DayPlan plan;
  for (const auto& t : catalog.tasks)
    if (t.regular()) plan.tasks.push_back(t);
  return plan;
}

std::vector<std::string> due_reminders(const DayPlan& plan, const std::vector<TaskOutcome>& resolved,
                                       VirtualMinutes vtime) {
  std::vector<std::string> due;
  for (const auto& t : plan.tasks) {
    if (!t.time_based() || !t.designated_time) continue;
    if (vtime != *t.designated_time + kWindowAfter + 1) continue;
    const bool executed = std::any_of(resolved.begin(), resolved.end(), [&](const TaskOutcome& o) {
      return o.task_id == t.id && o.executed_at.has_value();
    });
    if (!executed) due.push_back(t.id);
  }
  return due;
}

void validate_day_plan(const DayPlan& plan, const PlanRules& rules, const ClockConfig& clock) {
  const std::string owner = "day plan (level " + std::to_string(plan.level) + ")";
  std::set<std::string> ids;
  std::vector<VirtualMinutes> times;
  for (const auto& t : plan.tasks) {
    if (!ids.insert(t.id).second) throw ValidationError(owner + ": task '" + t.id + "' appears twice");
    const VirtualMinutes shown = t.presentation_minute(clock);
    if (shown < clock.day_start || shown >= clock.day_end)
      throw ValidationError(owner + ": task '" + t.id + "' is presented outside the day");
    if (t.time_based()) {
      if (!t.designated_time) throw ValidationError(owner + ": task '" + t.id + "' has no designated time");
      if (*t.designated_time < clock.day_start || *t.designated_time > clock.day_end)
        throw ValidationError(owner + ": task '" + t.id + "' is designated outside the day");
      if (shown >= *t.designated_time - kWindowBefore)
        throw ValidationError(owner + ": task '" + t.id + "' is presented after its window opens");
      times.push_back(*t.designated_time);
    } else if (!t.cue) {
      throw ValidationError(owner + ": task '" + t.id + "' has no cue condition");
    }
  }
  std::sort(times.begin(), times.end());
  for (std::size_t i = 1; i < times.size(); ++i)
    if (times[i] - times[i - 1] < rules.min_spacing)
      throw ValidationError(owner + ": designated times " + format_hhmm(times[i - 1]) + " and " +
                            format_hhmm(times[i]) + " are closer than " + std::to_string(rules.min_spacing) +
                            " minutes");
  if (plan.level == 0) return;
  if (plan.level < 1 || plan.level > 4) throw ValidationError(owner + ": level must be 1..4");
  const LevelMix& mix = rules.irregular[static_cast<std::size_t>(plan.level - 1)];
  if (plan.count(Regularity::Regular, CueType::TimeBased) != rules.regular_time ||
      plan.count(Regularity::Regular, CueType::EventBased) != rules.regular_event)
    throw ValidationError(owner + ": regular task counts do not match the rules");
  if (plan.count(Regularity::Irregular, CueType::TimeBased) != mix.time_based ||
      plan.count(Regularity::Irregular, CueType::EventBased) != mix.event_based)
    throw ValidationError(owner + ": irregular task counts do not match the rules");
}

void validate_catalog(const TaskCatalog& catalog, const WorldModel& world, const ClockConfig& clock) {
  std::set<std::string> ids;
  std::map<std::string, std::set<std::string>> actions_by_target;
  for (const auto& t : catalog.tasks) {
    const std::string owner = "task '" + t.id + "'";
    if (!ids.insert(t.id).second) throw ValidationError("catalog: duplicate task id '" + t.id + "'");
    if (t.time_based()) {
      if (!t.designated_time) throw ValidationError(owner + ": time-based task needs a designated time");
      if (*t.designated_time < clock.day_start || *t.designated_time > clock.day_end)
        throw ValidationError(owner + ": designated time " + format_hhmm(*t.designated_time) + " is outside the day");
      if (t.presentation_minute(clock) >= *t.designated_time - kWindowBefore)
        throw ValidationError(owner + ": presented after its window opens");
      if (t.cue) throw ValidationError(owner + ": time-based task must not carry a cue condition");
    } else {
      if (!t.cue) throw ValidationError(owner + ": event-based task needs a cue condition");
      if (t.designated_time) throw ValidationError(owner + ": event-based task must not carry a designated time");
      const auto& ref = t.cue->ref;
      bool ok = false;
      switch (t.cue->kind) {
        case CueCondition::Kind::NpcEncounter: ok = world.find_npc(ref) != nullptr; break;
        case CueCondition::Kind::LocationEnter: ok = world.has_location(ref); break;
        case CueCondition::Kind::ObjectProximity: ok = world.find_object(ref) != nullptr; break;
        case CueCondition::Kind::Activity: {
          ok = world.find_distractor(ref) != nullptr;
          for (auto g : {GameKind::WhackAMole, GameKind::ShootingGallery, GameKind::Generic}) ok = ok || ref == to_string(g);
          break;
        }
      }
      if (!ok) throw ValidationError(owner + ": cue refers to unknown " + to_string(t.cue->kind) + " '" + ref + "'");
    }
    if (t.presented_at && (*t.presented_at < clock.day_start || *t.presented_at >= clock.day_end))
      throw ValidationError(owner + ": presentation time outside the day");
    if (t.pinned_level && (t.regular() || *t.pinned_level < 1 || *t.pinned_level > 4))
      throw ValidationError(owner + ": only irregular tasks may be pinned, to sessions 5-8");

    std::vector<std::string> menu;
    if (const auto* obj = world.find_object(t.target_object)) {
      menu = obj->menu();
    } else if (const auto* npc = world.find_npc(t.target_object)) {
      menu = npc->supported_actions;
    } else {
      throw ValidationError(owner + ": target '" + t.target_object + "' is not an object or character in the world");
    }
    if (!contains(menu, t.target_action))
      throw ValidationError(owner + ": action '" + t.target_action + "' is not offered by '" + t.target_object + "'");
    actions_by_target[t.target_object].insert(t.target_action);
  }
  for (const auto& [target, actions] : actions_by_target) {
    std::size_t offered = 0;
    if (const auto* obj = world.find_object(target); obj && obj->choice_options)
      offered = obj->choice_options->size();
    else if (const auto* npc = world.find_npc(target))
      offered = npc->supported_actions.size();
    else
      continue;
    if (offered < actions.size() + 2)
      throw ValidationError("choice menu of '" + target + "' needs at least two foils besides its task answers");
  }
}

nlohmann::json to_json(const PmTask& t) {
  nlohmann::json j{{"id", t.id},
                   {"description", t.description},
                   {"cue_type", to_string(t.cue_type)},
                   {"regularity", to_string(t.regularity)},
                   {"presentation", t.presented_at ? format_hhmm(*t.presented_at) : std::string("before")},
                   {"target", {{"object", t.target_object}, {"action", t.target_action}}}};
  if (t.designated_time) j["designated_time"] = format_hhmm(*t.designated_time);
  if (t.cue) j["cue"] = {{"kind", to_string(t.cue->kind)}, {"ref", t.cue->ref}};
  if (t.pinned_level) j["session"] = *t.pinned_level + 4;
  return j;
}

PmTask task_from_json(const nlohmann::json& node) {
  using json_util::require;
  using json_util::require_string;
  PmTask t;
  t.id = require_string(node, "id", "catalog entry");
  const std::string owner = "task '" + t.id + "'";
  t.description = require_string(node, "description", owner);
  const auto cue_type = require_string(node, "cue_type", owner);
  if (cue_type == "time_based") t.cue_type = CueType::TimeBased;
  else if (cue_type == "event_based") t.cue_type = CueType::EventBased;
  else throw ValidationError(owner + ": cue_type must be time_based or event_based");
  const auto regularity = require_string(node, "regularity", owner);
  if (regularity == "regular") t.regularity = Regularity::Regular;
  else if (regularity == "irregular") t.regularity = Regularity::Irregular;
  else throw ValidationError(owner + ": regularity must be regular or irregular");
  const auto presentation = node.value("presentation", std::string("before"));
  if (presentation != "before") t.presented_at = parse_hhmm(presentation);
  if (node.contains("designated_time")) t.designated_time = parse_hhmm(require_string(node, "designated_time", owner));
  if (node.contains("cue")) {
    const auto& c = node.at("cue");
    t.cue = CueCondition{cue_kind_from_string(require_string(c, "kind", owner + " cue")),
                         require_string(c, "ref", owner + " cue")};
  }
  const auto& target = require(node, "target", owner);
  t.target_object = require_string(target, "object", owner + " target");
  t.target_action = require_string(target, "action", owner + " target");
  if (node.contains("session")) {
    if (!node.at("session").is_number_integer()) throw ValidationError(owner + ": session must be an integer");
    t.pinned_level = node.at("session").get<int>() - 4;
  }
  return t;
}

nlohmann::json to_json(const TaskOutcome& o) {
  nlohmann::json j{{"task_id", o.task_id},
                   {"status", to_string(o.status)},
                   {"remembered_at", o.remembered_at},
                   {"remembered_at_s", o.remembered_at_s},
                   {"achieved", o.achieved},
                   {"reminded", o.reminded}};
  if (o.executed_at) j["executed_at"] = *o.executed_at;
  if (o.executed_at_s) j["executed_at_s"] = *o.executed_at_s;
  if (o.cue_active) j["cue_active"] = *o.cue_active;
  return j;
}

TaskOutcome outcome_from_json(const nlohmann::json& j) {
  TaskOutcome o;
  o.task_id = j.at("task_id").get<std::string>();
  o.status = outcome_status_from_string(j.at("status").get<std::string>());
  o.remembered_at = j.at("remembered_at").get<VirtualMinutes>();
  o.remembered_at_s = j.at("remembered_at_s").get<VirtualSeconds>();
  o.achieved = j.at("achieved").get<bool>();
  o.reminded = j.at("reminded").get<bool>();
  if (j.contains("executed_at")) o.executed_at = j.at("executed_at").get<VirtualMinutes>();
  if (j.contains("executed_at_s")) o.executed_at_s = j.at("executed_at_s").get<VirtualSeconds>();
  if (j.contains("cue_active")) o.cue_active = j.at("cue_active").get<bool>();
  return o;
}

nlohmann::json to_json(const DayPlan& plan) {
  nlohmann::json tasks = nlohmann::json::array();
  for (const auto& t : plan.tasks) tasks.push_back(to_json(t));
  return {{"level", plan.level}, {"tasks", tasks}};
}

DayPlan day_plan_from_json(const nlohmann::json& node) {
  DayPlan plan;
  plan.level = node.at("level").get<int>();
  for (const auto& t : node.at("tasks")) plan.tasks.push_back(task_from_json(t));
  return plan;
}

nlohmann::json to_json(const PlanRules& rules) {
  nlohmann::json irregular = nlohmann::json::array();
  for (const auto& mix : rules.irregular) irregular.push_back({{"time_based", mix.time_based}, {"event_based", mix.event_based}});
  return {{"regular_time", rules.regular_time},
          {"regular_event", rules.regular_event},
          {"irregular", irregular},
          {"min_spacing", rules.min_spacing}};
}

PlanRules plan_rules_from_json(const nlohmann::json& node) {
  PlanRules rules;
  rules.regular_time = node.value("regular_time", rules.regular_time);
  rules.regular_event = node.value("regular_event", rules.regular_event);
  rules.min_spacing = node.value("min_spacing", rules.min_spacing);
  if (node.contains("irregular")) {
    const auto& arr = node.at("irregular");
    if (!arr.is_array() || arr.size() != 4) throw ValidationError("rules: 'irregular' needs one entry per level 1-4");
    for (std::size_t i = 0; i < 4; ++i) {
      rules.irregular[i].time_based = arr[i].at("time_based").get<int>();
      rules.irregular[i].event_based = arr[i].at("event_based").get<int>();
      if (rules.irregular[i].time_based < 0 || rules.irregular[i].event_based < 0)
        throw ValidationError("rules: irregular counts must be non-negative");
      if (i > 0 && rules.irregular[i].total() < rules.irregular[i - 1].total())
        throw ValidationError("rules: irregular task count must not decrease with level");
    }
  }
  if (rules.regular_time < 0 || rules.regular_event < 0 || rules.min_spacing <= kWindowBefore + kWindowAfter)
    throw ValidationError("rules: counts must be non-negative and spacing wider than the acceptance window");
  return rules;
}

nlohmann::json to_json(const ClockConfig& clock) {
  return {{"compression_factor", clock.compression_factor},
          {"day_start", format_hhmm(clock.day_start)},
          {"day_end", format_hhmm(clock.day_end)}};
}

ClockConfig clock_config_from_json(const nlohmann::json& node) {
  ClockConfig clock;
  if (node.contains("compression_factor")) clock.compression_factor = node.at("compression_factor").get<double>();
  if (node.contains("day_start")) clock.day_start = parse_hhmm(node.at("day_start").get<std::string>());
  if (node.contains("day_end")) clock.day_end = parse_hhmm(node.at("day_end").get<std::string>());
  clock.validate();
  return clock;
}

TaskCatalog load_catalog(const nlohmann::json& doc) {
  const auto& tasks = json_util::require(doc, "tasks", "catalog");
  if (!tasks.is_array()) throw ValidationError("catalog: 'tasks' must be an array");
  TaskCatalog catalog;
  for (const auto& t : tasks) catalog.tasks.push_back(task_from_json(t));
  return catalog;
}

TaskCatalog load_catalog_files(const std::vector<std::filesystem::path>& paths) {
  TaskCatalog catalog;
  for (const auto& p : paths) {
    auto part = load_catalog(json_util::read_file(p));
    for (auto& t : part.tasks) catalog.tasks.push_back(std::move(t));
  }
  return catalog;
}

}  // namespace pmt
