#include "pmt/engine.hpp"

#include <algorithm>
#include <variant>

#include "pmt/error.hpp"

namespace pmt {

std::string to_string(Phase p) {
  switch (p) {
    case Phase::VitPlusPractice: return "vit_plus_practice";
    case Phase::Tutorial: return "tutorial";
    case Phase::Vrt: return "vrt";
  }
  return "";
}

Phase phase_from_string(const std::string& s) {
  for (auto p : {Phase::VitPlusPractice, Phase::Tutorial, Phase::Vrt})
    if (to_string(p) == s) return p;
  throw ValidationError("unknown session phase '" + s + "'");
}

namespace {

const std::vector<int>& vit_levels_for(int session) {
  static const std::vector<int> kLevels[3] = {{1, 2, 3}, {4, 5, 6}, {7, 8}};
  return kLevels[session - 1];
}

// What the trainee sees before answering: nothing that singles out the correct option.
nlohmann::json vit_prompt(const VitItem& item, std::size_t index) {
  nlohmann::json j = to_json(item);
  j.erase("correct_response");
  j.erase("foils");
  j.erase("response_image");
  j["index"] = static_cast<int>(index);
  return j;
}

nlohmann::json rate_json(const CategoryRate& c) {
  nlohmann::json j{{"achieved", c.achieved}, {"total", c.total}};
  if (auto r = c.rate()) j["rate"] = *r;
  return j;
}

CategoryRate rate_from_json(const nlohmann::json& j) {
  return {j.at("achieved").get<int>(), j.at("total").get<int>()};
}

nlohmann::json rates_json(const AchievementRates& r) {
  return {{"total", rate_json(r.total)},
          {"regular", rate_json(r.regular)},
          {"irregular", rate_json(r.irregular)},
          {"time_based", rate_json(r.time_based)},
          {"event_based", rate_json(r.event_based)}};
}

}  // namespace

void SessionPlan::validate() const {
  const std::string owner = "session " + std::to_string(session_number);
  if (session_number < 1 || session_number > 8) throw ValidationError("session number must be 1..8");
  if (!world) throw ValidationError(owner + ": no world");
  clock.validate();
  if (session_number <= 3) {
    if (phase != Phase::VitPlusPractice) throw ValidationError(owner + ": sessions 1-3 run imagery training plus practice");
    if (vit_levels != vit_levels_for(session_number))
      throw ValidationError(owner + ": imagery levels do not match the schedule");
    if (vit_items.empty()) throw ValidationError(owner + ": no imagery items");
    for (const auto& item : vit_items)
      if (std::find(vit_levels.begin(), vit_levels.end(), item.level) == vit_levels.end())
        throw ValidationError(owner + ": imagery item from level " + std::to_string(item.level));
  } else if (session_number == 4) {
    if (phase != Phase::Tutorial) throw ValidationError(owner + ": session 4 is the tutorial");
  } else {
    if (phase != Phase::Vrt || vrt_level != session_number - 4 || day_plan.level != session_number - 4)
      throw ValidationError(owner + ": sessions 5-8 run day levels 1-4");
  }
  validate_day_plan(day_plan, rules, clock);
  validate_catalog(TaskCatalog{day_plan.tasks}, *world, clock);
}

nlohmann::json SessionPlan::to_json() const {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& item : vit_items) items.push_back(pmt::to_json(item));
  nlohmann::json j{{"session_number", session_number},
                   {"phase", to_string(phase)},
                   {"participant", participant},
                   {"vit_levels", vit_levels},
                   {"day_plan", pmt::to_json(day_plan)},
                   {"scored", scored},
                   {"vit_items", items},
                   {"world", world ? world->document() : nlohmann::json()},
                   {"clock", pmt::to_json(clock)},
                   {"rules", pmt::to_json(rules)},
                   {"reminder_message", reminder_message},
                   {"seed", seed}};
  if (vrt_level) j["vrt_level"] = *vrt_level;
  return j;
}

SessionPlan SessionPlan::from_json(const nlohmann::json& j) {
  SessionPlan plan;
  plan.session_number = j.at("session_number").get<int>();
  plan.phase = phase_from_string(j.at("phase").get<std::string>());
  plan.participant = j.value("participant", std::string());
  plan.vit_levels = j.at("vit_levels").get<std::vector<int>>();
  if (j.contains("vrt_level")) plan.vrt_level = j.at("vrt_level").get<int>();
  plan.day_plan = day_plan_from_json(j.at("day_plan"));
  plan.scored = j.at("scored").get<bool>();
  for (const auto& item : j.at("vit_items")) plan.vit_items.push_back(vit_item_from_json(item));
  plan.world = std::make_shared<const WorldModel>(load_world(j.at("world")));
  plan.clock = clock_config_from_json(j.at("clock"));
  plan.rules = plan_rules_from_json(j.at("rules"));
  plan.reminder_message = j.at("reminder_message").get<std::string>();
  plan.seed = j.at("seed").get<std::uint64_t>();
  return plan;
}

int prior_exposures(const PmTask& task, int session_number) {
  if (!task.regular()) return 0;
  int n = 0;
  for (int s = 1; s < session_number && s <= 8; ++s) {
    if (s <= 3 && task.time_based()) continue;  // practice days carry only the regular event-based tasks
    ++n;
  }
  return n;
}

AchievementRates compute_rates(const std::vector<PmTask>& tasks, const std::vector<TaskOutcome>& outcomes) {
  AchievementRates r;
  for (const auto& t : tasks) {
    auto it = std::find_if(outcomes.begin(), outcomes.end(), [&](const TaskOutcome& o) { return o.task_id == t.id; });
    const int hit = (it != outcomes.end() && it->achieved) ? 1 : 0;
    for (CategoryRate* c : {&r.total, t.regular() ? &r.regular : &r.irregular,
                            t.time_based() ? &r.time_based : &r.event_based}) {
      c->total += 1;
      c->achieved += hit;
    }
  }
  return r;
}

nlohmann::json SessionRecord::to_json() const {
  nlohmann::json outs = nlohmann::json::array();
  for (const auto& o : outcomes) outs.push_back(pmt::to_json(o));
  nlohmann::json durs = nlohmann::json::array();
  for (const auto& d : durations) durs.push_back({{"task_id", d.task_id}, {"seconds", d.seconds}, {"mmss", format_mmss(d.seconds)}});
  nlohmann::json vits = nlohmann::json::array();
  for (const auto& v : vit_results) vits.push_back(pmt::to_json(v));
  nlohmann::json j{{"session_number", session_number},
                   {"phase", to_string(phase)},
                   {"participant", participant},
                   {"scored", scored},
                   {"seed", seed},
                   {"outcomes", outs},
                   {"rates", rates_json(rates)},
                   {"durations", durs},
                   {"vit_results", vits},
                   {"end_reason", end_reason},
                   {"end_vtime", format_hhmm(end_vtime)}};
  if (vrt_level) j["vrt_level"] = *vrt_level;
  return j;
}

SessionRecord SessionRecord::from_json(const nlohmann::json& j) {
  SessionRecord r;
  r.session_number = j.at("session_number").get<int>();
  r.phase = phase_from_string(j.at("phase").get<std::string>());
  r.participant = j.at("participant").get<std::string>();
  r.scored = j.at("scored").get<bool>();
  r.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("vrt_level")) r.vrt_level = j.at("vrt_level").get<int>();
  for (const auto& o : j.at("outcomes")) r.outcomes.push_back(outcome_from_json(o));
  const auto& rates = j.at("rates");
  r.rates = {rate_from_json(rates.at("total")), rate_from_json(rates.at("regular")),
             rate_from_json(rates.at("irregular")), rate_from_json(rates.at("time_based")),
             rate_from_json(rates.at("event_based"))};
  for (const auto& d : j.at("durations")) r.durations.push_back({d.at("task_id").get<std::string>(), d.at("seconds").get<VirtualSeconds>()});
  for (const auto& v : j.at("vit_results"))
    r.vit_results.push_back({v.at("level").get<int>(), v.at("items_presented").get<int>(), v.at("items_correct").get<int>()});
  r.end_reason = j.at("end_reason").get<std::string>();
  r.end_vtime = parse_hhmm(j.at("end_vtime").get<std::string>());
  return r;
}

nlohmann::json public_task_json(const PmTask& task) {
  nlohmann::json j{{"id", task.id}, {"description", task.description}, {"cue_type", to_string(task.cue_type)}};
  if (task.designated_time) j["designated_time"] = format_hhmm(*task.designated_time);
  return j;
}

Engine::Engine(SessionPlan plan) : plan_(std::move(plan)) {
  plan_.validate();
  state_.clock = VirtualClock(plan_.clock);
  state_.clock.paused = true;
  state_.location = plan_.world->start_location();
  for (const auto& t : plan_.day_plan.tasks) state_.tasks.push_back(TaskSlot{t});
}

void Engine::emit(std::vector<Event>& out, MessageKind kind, nlohmann::json payload) const {
  out.push_back(Event{kind, std::move(payload), state_.clock.elapsed_real_ms, state_.clock.now()});
}

void Engine::snapshot(std::vector<Event>& out, const std::string& reason) const {
  nlohmann::json p{{"reason", reason},
                   {"location", state_.location},
                   {"area", world().area_of(state_.location)},
                   {"vtime", format_hhmm(state_.clock.now())},
                   {"running", state_.running()},
                   {"paused", state_.operator_paused},
                   {"npcs_present", state_.npcs_here},
                   {"active_tasks", active_task_ids()},
                   {"achieved", state_.achieved_count}};
  p["distractor"] = state_.distractor ? nlohmann::json(*state_.distractor) : nlohmann::json();
  emit(out, MessageKind::StateSnapshot, std::move(p));
}

std::vector<std::string> Engine::active_task_ids() const {
  std::vector<std::string> ids;
  for (const auto& s : state_.tasks)
    if (s.presented && !s.resolved) ids.push_back(s.task.id);
  return ids;
}

void Engine::present(TaskSlot& slot) {
  slot.presented = true;
  slot.remembered_at = state_.clock.now();
  slot.remembered_at_s = static_cast<VirtualSeconds>(slot.remembered_at) * 60;
}

void Engine::brief(std::vector<Event>& out, const std::string& mode) {
  nlohmann::json tasks = nlohmann::json::array();
  for (auto& slot : state_.tasks) {
    if (slot.task.presented_at) continue;
    present(slot);
    tasks.push_back(public_task_json(slot.task));
  }
  nlohmann::json p{{"mode", mode}, {"tasks", tasks}, {"message", "Here are your plans for today."}};
  if (mode == "tutorial") {
    std::vector<std::string> ids;
    for (const auto& slot : state_.tasks) ids.push_back(slot.task.id);
    p["script"] = nlohmann::json::array({{{"step", "video"}, {"asset", "video/tutorial.mp4"}},
                                         {{"step", "practice"}, {"tasks", ids}}});
  }
  state_.briefing_pending = true;
  emit(out, MessageKind::TaskBriefing, std::move(p));
}

std::vector<Event> Engine::start() {
  if (state_.started) throw CommandError("session already started");
  std::vector<Event> out;
  state_.started = true;
  snapshot(out, "start");
  switch (plan_.phase) {
    case Phase::Vrt: brief(out, "vrt"); break;
    case Phase::Tutorial: brief(out, "tutorial"); break;
    case Phase::VitPlusPractice: {
      state_.vit_pending = true;
      emit(out, MessageKind::VitItem, vit_prompt(plan_.vit_items.front(), 0));
      break;
    }
  }
  refresh_context(out);
  return out;
}

std::vector<Event> Engine::handle(const Command& cmd) {
  if (!state_.started) throw CommandError("session not started");
  std::vector<Event> out;
  std::visit([&](const auto& c) { on(c, out); }, cmd);
  return out;
}

std::vector<Event> Engine::tick(RealMillis delta_real_ms) {
  std::vector<Event> out;
  if (delta_real_ms < 0) throw std::invalid_argument("tick: negative delta");
  if (!state_.running()) return out;
  advance_clock(delta_real_ms, out);
  return out;
}

std::vector<Event> Engine::abort() {
  if (!state_.started) throw CommandError("session not started");
  std::vector<Event> out;
  if (!state_.day_ended) finalize("abort", out);
  return out;
}

void Engine::advance_clock(RealMillis delta, std::vector<Event>& out) {
  const auto result = advance(state_.clock, delta);
  for (const auto& ev : result.events) {
    state_.clock.elapsed_real_ms = ev.real_ms;
    if (ev.kind == ClockEvent::Kind::MinuteTick) {
      process_minute(ev.vtime, out);
    } else {
      finalize("day_end", out);
    }
  }
  state_.clock = result.clock;
}

void Engine::process_minute(VirtualMinutes minute, std::vector<Event>& out) {
  emit(out, MessageKind::ClockTick, {{"vtime", minute}});
  bool modal = false;
  for (auto& slot : state_.tasks) {
    if (slot.presented || slot.task.presented_at != minute) continue;
    present(slot);
    modal = true;
    emit(out, MessageKind::TaskPopup, {{"task", public_task_json(slot.task)}, {"message", "A new plan has come up."}});
  }
  for (const auto& id : due_reminders(plan_.day_plan, state_.outcomes, minute)) {
    auto it = std::find_if(state_.tasks.begin(), state_.tasks.end(), [&](const TaskSlot& s) { return s.task.id == id; });
    if (it == state_.tasks.end() || !it->presented || it->resolved || it->reminded) continue;
    it->reminded = true;
    modal = true;
    emit(out, MessageKind::Reminder,
         {{"task_id", id}, {"description", it->task.description}, {"message", plan_.reminder_message}});
  }
  // Distractors only fill waiting time; a pop-up or reminder ends the game.
  if (modal) state_.distractor.reset();
  if (!state_.in_transit) refresh_context(out);
}

void Engine::refresh_context(std::vector<Event>& out) {
  const VirtualMinutes now = state_.clock.now();
  auto present_now = world().npcs_at(state_.location, now);
  for (const auto& npc : present_now) {
    if (std::find(state_.npcs_here.begin(), state_.npcs_here.end(), npc) != state_.npcs_here.end()) continue;
    emit(out, MessageKind::Cue,
         {{"kind", "npc_encounter"}, {"npc", npc}, {"label", world().find_npc(npc)->label}, {"location", state_.location}});
  }
  state_.npcs_here = std::move(present_now);
  for (auto& slot : state_.tasks)
    if (slot.presented && !slot.resolved && slot.task.cue && cue_active(*slot.task.cue)) slot.cue_seen = true;
}

bool Engine::cue_active(const CueCondition& cue) const {
  if (state_.in_transit) return false;
  switch (cue.kind) {
    case CueCondition::Kind::NpcEncounter:
      return std::find(state_.npcs_here.begin(), state_.npcs_here.end(), cue.ref) != state_.npcs_here.end();
    case CueCondition::Kind::LocationEnter:
      return state_.location == cue.ref;
    case CueCondition::Kind::ObjectProximity:
      return world().find_object(cue.ref) && world().object_location(cue.ref) == state_.location;
    case CueCondition::Kind::Activity: {
      if (!state_.distractor) return false;
      const auto* point = world().find_distractor(*state_.distractor);
      return *state_.distractor == cue.ref || (point && to_string(point->game_kind) == cue.ref);
    }
  }
  return false;
}

bool Engine::reachable(const std::string& target) const {
  if (world().find_object(target)) return world().object_location(target) == state_.location;
  if (world().find_npc(target))
    return std::find(state_.npcs_here.begin(), state_.npcs_here.end(), target) != state_.npcs_here.end();
  return false;
}

const std::vector<std::string>& Engine::menu_of(const std::string& target) const {
  if (const auto* obj = world().find_object(target)) return obj->menu();
  if (const auto* npc = world().find_npc(target)) return npc->supported_actions;
  throw CommandError("unknown object '" + target + "'");
}

void Engine::finalize(const std::string& reason, std::vector<Event>& out) {
  for (auto& slot : state_.tasks) {
    if (slot.resolved) continue;
    TaskOutcome o;
    o.task_id = slot.task.id;
    o.status = OutcomeStatus::Missed;
    o.remembered_at = slot.presented ? slot.remembered_at : slot.task.presentation_minute(plan_.clock);
    o.remembered_at_s = static_cast<VirtualSeconds>(o.remembered_at) * 60;
    o.reminded = slot.reminded;
    slot.resolved = true;
    state_.outcomes.push_back(o);
  }
  state_.day_ended = true;
  state_.end_reason = reason;
  state_.distractor.reset();
  state_.clock.paused = true;
  const auto rates = compute_rates(plan_.day_plan.tasks, state_.outcomes);
  emit(out, MessageKind::SessionEnd,
       {{"reason", reason},
        {"scored", plan_.scored},
        {"achieved", rates.total.achieved},
        {"total", rates.total.total},
        {"rates", rates_json(rates)},
        {"message", "Today's training is over. Thank you!"}});
}

void Engine::require_running() const {
  if (state_.day_ended) throw CommandError("the day has ended");
  if (state_.operator_paused) throw CommandError("session is paused");
  if (state_.vit_pending) throw CommandError("imagery training is in progress");
  if (state_.briefing_pending) throw CommandError("briefing not acknowledged yet");
}

void Engine::on(const command::Join&, std::vector<Event>& out) { snapshot(out, "join"); }

void Engine::on(const command::AckBriefing&, std::vector<Event>& out) {
  if (state_.day_ended) throw CommandError("the day has ended");
  if (state_.vit_pending) throw CommandError("imagery training is in progress");
  if (!state_.briefing_pending) throw CommandError("no briefing to acknowledge");
  state_.briefing_pending = false;
  state_.clock.paused = state_.operator_paused;
  snapshot(out, "running");
}

void Engine::on(const command::Move& c, std::vector<Event>& out) {
  require_running();
  if (!world().has_location(c.to)) throw CommandError("unknown location '" + c.to + "'");
  state_.distractor.reset();
  const auto hops = world().path(state_.location, c.to);
  for (std::size_t i = 0; i < hops.size() && !state_.day_ended; ++i) {
    const int cost = world().travel_time(state_.location, hops[i]);
    state_.in_transit = true;
    state_.npcs_here.clear();
    advance_clock(real_span(plan_.clock, cost), out);
    state_.in_transit = false;
    if (state_.day_ended) break;
    state_.location = hops[i];
    refresh_context(out);
    snapshot(out, i + 1 == hops.size() ? "arrival" : "passing");
  }
  if (hops.empty()) snapshot(out, "arrival");
}

void Engine::on(const command::Interact& c, std::vector<Event>& out) {
  require_running();
  const auto& menu = menu_of(c.object);
  if (!reachable(c.object)) throw CommandError("'" + c.object + "' is not within reach here");
  if (c.action) {
    resolve_choice(c.object, *c.action, out);
    return;
  }
  const auto* obj = world().find_object(c.object);
  const auto* npc = world().find_npc(c.object);
  emit(out, MessageKind::DialogConfirm,
       {{"object", c.object}, {"label", obj ? obj->label : npc->label}, {"options", menu}, {"message", "What will you do?"}});
}

void Engine::on(const command::SelectChoice& c, std::vector<Event>& out) {
  require_running();
  menu_of(c.object);
  if (!reachable(c.object)) throw CommandError("'" + c.object + "' is not within reach here");
  resolve_choice(c.object, c.choice, out);
}

void Engine::resolve_choice(const std::string& target, const std::string& choice, std::vector<Event>& out) {
  const auto& menu = menu_of(target);
  if (std::find(menu.begin(), menu.end(), choice) == menu.end())
    throw CommandError("'" + choice + "' is not offered by '" + target + "'");

  for (auto& slot : state_.tasks) {
    if (!slot.presented || slot.resolved) continue;
    if (slot.task.target_object == target && slot.task.target_action == choice) {
      execute(slot, choice, out);
      return;
    }
  }
  const bool any_active = std::any_of(state_.tasks.begin(), state_.tasks.end(),
                                      [](const TaskSlot& s) { return s.presented && !s.resolved; });
  if (!any_active) {
    emit(out, MessageKind::DialogConfirm, {{"object", target}, {"action", choice}, {"message", "Done."}});
    return;
  }
  // Neutral alert only; the attempt is remembered for the outcome status but never costs anything.
  for (auto& slot : state_.tasks)
    if (slot.presented && !slot.resolved && slot.task.target_object == target) slot.wrong_attempt = true;
  emit(out, MessageKind::AlertSound, {{"object", target}});
}

void Engine::execute(TaskSlot& slot, const std::string& action, std::vector<Event>& out) {
  TaskOutcome o;
  o.task_id = slot.task.id;
  o.remembered_at = slot.remembered_at;
  o.remembered_at_s = slot.remembered_at_s;
  o.executed_at = state_.clock.now();
  o.executed_at_s = state_.clock.now_seconds();
  o.reminded = slot.reminded;
  if (slot.task.time_based()) {
    switch (evaluate_time_based(slot.task, *o.executed_at)) {
      case TimingStatus::OnTime: o.status = OutcomeStatus::OnTime; break;
      case TimingStatus::Early: o.status = OutcomeStatus::Early; break;
      case TimingStatus::Late: o.status = OutcomeStatus::LateAfterReminder; break;
    }
    o.achieved = o.status == OutcomeStatus::OnTime;
  } else {
    o.status = slot.wrong_attempt ? OutcomeStatus::WrongActionThenCorrect : OutcomeStatus::OnTime;
    o.achieved = evaluate_event_based(slot.task, o.executed_at, plan_.clock);
    o.cue_active = cue_active(*slot.task.cue);
  }
  slot.resolved = true;
  state_.outcomes.push_back(o);
  if (o.achieved) ++state_.achieved_count;

  emit(out, MessageKind::DialogConfirm,
       {{"object", slot.task.target_object}, {"action", action}, {"message", "Done."}});
  emit(out, MessageKind::TaskResult,
       {{"task_id", o.task_id},
        {"status", to_string(o.status)},
        {"achieved", o.achieved},
        {"executed_at", format_hhmm(*o.executed_at)},
        {"duration_s", *o.duration_s()},
        {"message", "Task completed."}});
}

void Engine::on(const command::StartDistractor& c, std::vector<Event>& out) {
  require_running();
  const auto* point = world().find_distractor(c.point);
  if (!point) throw CommandError("unknown game point '" + c.point + "'");
  if (point->location_id != state_.location) throw CommandError("game point '" + c.point + "' is not here");
  if (state_.distractor == c.point) return;
  if (state_.distractor) throw CommandError("another game is already running");
  state_.distractor = c.point;
  refresh_context(out);
  snapshot(out, "distractor_started");
}

void Engine::on(const command::StopDistractor&, std::vector<Event>& out) {
  require_running();
  if (!state_.distractor) return;
  state_.distractor.reset();
  snapshot(out, "distractor_stopped");
}

void Engine::on(const command::Pause&, std::vector<Event>& out) {
  if (state_.day_ended) throw CommandError("the day has ended");
  if (state_.operator_paused) throw CommandError("session is paused");
  state_.operator_paused = true;
  state_.clock.paused = true;
  snapshot(out, "paused");
}

void Engine::on(const command::Resume&, std::vector<Event>& out) {
  if (state_.day_ended) throw CommandError("the day has ended");
  if (!state_.operator_paused) throw CommandError("session is not paused");
  state_.operator_paused = false;
  state_.clock.paused = state_.briefing_pending || state_.vit_pending;
  snapshot(out, "resumed");
}

void Engine::on(const command::VitAnswer& c, std::vector<Event>& out) {
  if (state_.operator_paused) throw CommandError("session is paused");
  if (!state_.vit_pending) throw CommandError("no imagery item is showing");
  if (c.index != static_cast<int>(state_.vit_cursor))
    throw CommandError("answer refers to item " + std::to_string(c.index) + ", showing item " +
                       std::to_string(state_.vit_cursor));
  const VitItem& item = plan_.vit_items[state_.vit_cursor];
  bool correct = false;
  try {
    correct = score_response(item, c.choice);
  } catch (const std::invalid_argument&) {
    throw CommandError("'" + c.choice + "' is not one of the options");
  }
  auto it = std::find_if(state_.vit_results.begin(), state_.vit_results.end(),
                         [&](const VitLevelResult& r) { return r.level == item.level; });
  if (it == state_.vit_results.end()) {
    state_.vit_results.push_back({item.level, 0, 0});
    it = std::prev(state_.vit_results.end());
  }
  it->items_presented += 1;
  it->items_correct += correct ? 1 : 0;

  // Errorless feedback: always show the pair as it should be remembered.
  emit(out, MessageKind::DialogConfirm,
       {{"vit", true},
        {"index", c.index},
        {"stimulus_text", item.stimulus_text},
        {"correct_response", item.correct_response},
        {"response_image", item.response_image ? nlohmann::json(*item.response_image) : nlohmann::json()},
        {"message", "Picture them together."}});
  ++state_.vit_cursor;
  if (state_.vit_cursor < plan_.vit_items.size()) {
    emit(out, MessageKind::VitItem, vit_prompt(plan_.vit_items[state_.vit_cursor], state_.vit_cursor));
    return;
  }
  state_.vit_pending = false;
  brief(out, "practice");
}

SessionRecord Engine::finish() const {
  if (!state_.started) throw CommandError("session not started");
  if (!state_.day_ended) throw CommandError("session still running");
  SessionRecord r;
  r.session_number = plan_.session_number;
  r.phase = plan_.phase;
  r.participant = plan_.participant;
  r.vrt_level = plan_.vrt_level;
  r.scored = plan_.scored;
  r.seed = plan_.seed;
  for (const auto& t : plan_.day_plan.tasks) {
    auto it = std::find_if(state_.outcomes.begin(), state_.outcomes.end(),
                           [&](const TaskOutcome& o) { return o.task_id == t.id; });
    r.outcomes.push_back(*it);
    if (auto d = it->duration_s()) r.durations.push_back({t.id, *d});
  }
  r.rates = compute_rates(plan_.day_plan.tasks, state_.outcomes);
  r.vit_results = state_.vit_results;
  r.end_reason = state_.end_reason;
  r.end_vtime = state_.clock.now();
  return r;
}

}  // namespace pmt
