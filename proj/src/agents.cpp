#include "pmt/agents.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/algorithm/string.hpp>

#include "pmt/error.hpp"

namespace pmt {

AgentPolicy AgentPolicy::parse(const std::string& spec) {
  std::vector<std::string> head;
  boost::split(head, spec, boost::is_any_of(":"));
  if (head.empty() || head.size() > 2) throw ValidationError("agent spec '" + spec + "': expected kind[:key=value,...]");
  AgentPolicy p;
  const auto& kind = head[0];
  if (kind == "perfect") p.kind = Kind::Perfect;
  else if (kind == "immediate" || kind == "immediate_executor") p.kind = Kind::ImmediateExecutor;
  else if (kind == "retention") p.kind = Kind::Retention;
  else if (kind == "clock_checker") p.kind = Kind::ClockChecker;
  else throw ValidationError("agent spec '" + spec + "': unknown kind '" + kind + "'");
  if (p.kind == Kind::Retention) p.p_retain = 0.8;
  if (p.kind == Kind::ClockChecker) p.check_period = 45;
  if (head.size() == 2) {
    std::vector<std::string> options;
    boost::split(options, head[1], boost::is_any_of(","));
    for (const auto& opt : options) {
      const auto eq = opt.find('=');
      if (eq == std::string::npos) throw ValidationError("agent spec '" + spec + "': option '" + opt + "' needs key=value");
      const auto key = opt.substr(0, eq);
      const auto value = opt.substr(eq + 1);
      try {
        std::size_t used = 0;
        if (key == "p" && p.kind == Kind::Retention) p.p_retain = std::stod(value, &used);
        else if (key == "period" && p.kind == Kind::ClockChecker) p.check_period = std::stoi(value, &used);
        else if (key == "repetition") p.repetition_factor = std::stod(value, &used);
        else if (key == "seed") p.seed = std::stoull(value, &used);
        else throw ValidationError("agent spec '" + spec + "': option '" + key + "' does not apply to " + kind);
        if (used != value.size()) throw std::invalid_argument(value);
      } catch (const std::logic_error&) {
        throw ValidationError("agent spec '" + spec + "': bad value '" + value + "' for " + key);
      }
    }
  }
  p.validate();
  return p;
}

void AgentPolicy::validate() const {
  if (!(p_retain >= 0.0 && p_retain <= 1.0)) throw ValidationError("agent: p_retain must be in [0, 1]");
  if (check_period < 1) throw ValidationError("agent: check_period must be at least 1");
  if (!(repetition_factor > 0.0 && repetition_factor <= 1.0)) throw ValidationError("agent: repetition factor must be in (0, 1]");
}

std::string AgentPolicy::to_string() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::Perfect: out << "perfect"; break;
    case Kind::ImmediateExecutor: out << "immediate"; break;
    case Kind::Retention: out << "retention:p=" << p_retain; break;
    case Kind::ClockChecker: out << "clock_checker:period=" << check_period; break;
  }
  return out.str();
}

double forget_minute(double p_retain, double repetition_factor, int prior_exposures, VirtualMinutes remembered_at,
                     double uniform) {
  if (p_retain >= 1.0) return std::numeric_limits<double>::infinity();
  if (p_retain <= 0.0) return remembered_at;
  const double hazard = -std::log(p_retain) * std::pow(repetition_factor, prior_exposures);  // per hour
  return remembered_at + 60.0 * -std::log(uniform) / hazard;
}

void Observation::apply(const ProtocolMessage& m) {
  const auto& p = m.payload;
  last_rejected = false;
  auto show = [&](const nlohmann::json& task) {
    const auto id = task.at("id").get<std::string>();
    if (shown_at.count(id)) return;
    shown.push_back(id);
    shown_at[id] = vtime;
  };
  switch (m.kind) {
    case MessageKind::StateSnapshot:
      location = p.at("location").get<std::string>();
      vtime = parse_hhmm(p.at("vtime").get<std::string>());
      npcs_here = p.at("npcs_present").get<std::vector<std::string>>();
      distractor = p.at("distractor").is_null() ? std::nullopt : std::optional(p.at("distractor").get<std::string>());
      if (p.at("reason") == "running") briefing_pending = false;
      break;
    case MessageKind::ClockTick:
      vtime = p.at("vtime").get<VirtualMinutes>();
      break;
    case MessageKind::TaskBriefing:
      briefing_pending = true;
      for (const auto& t : p.at("tasks")) show(t);
      break;
    case MessageKind::TaskPopup:
      distractor.reset();
      show(p.at("task"));
      break;
    case MessageKind::Reminder:
      distractor.reset();
      reminded.insert(p.at("task_id").get<std::string>());
      break;
    case MessageKind::TaskResult:
      resolved.insert(p.at("task_id").get<std::string>());
      break;
    case MessageKind::VitItem:
      vit_item = p;
      break;
    case MessageKind::DialogConfirm:
      if (p.value("vit", false)) vit_item.reset();
      break;
    case MessageKind::Cue:
      if (p.at("kind") == "npc_encounter") npcs_here.push_back(p.at("npc").get<std::string>());
      break;
    case MessageKind::SessionEnd:
      ended = true;
      break;
    case MessageKind::Rejected:
      last_rejected = true;
      break;
    default:
      break;
  }
}

Agent::Agent(AgentPolicy policy, const SessionPlan& plan) : policy_(policy), plan_(plan) { policy_.validate(); }

void Agent::observe(const ProtocolMessage& message) {
  obs_.apply(message);
  for (const auto& id : obs_.shown) {
    if (forget_at_.count(id)) continue;
    const auto* task = plan_.day_plan.find(id);
    double forget = std::numeric_limits<double>::infinity();
    if (policy_.kind == AgentPolicy::Kind::Retention) {
      Rng rng = derived_rng(policy_.seed, "forget/" + id);
      const double u = 1.0 - uniform01(rng);  // (0, 1]
      forget = forget_minute(policy_.p_retain, policy_.repetition_factor, prior_exposures(*task, plan_.session_number),
                             obs_.shown_at[id], u);
    }
    forget_at_[id] = forget;
  }
}

bool Agent::remembers(const std::string& id) const {
  if (obs_.reminded.count(id)) return true;
  auto it = forget_at_.find(id);
  return it != forget_at_.end() && obs_.vtime < it->second;
}

bool Agent::clock_visible() const {
  if (policy_.kind != AgentPolicy::Kind::ClockChecker || !first_check_) return true;
  return obs_.vtime >= *first_check_ && (obs_.vtime - *first_check_) % policy_.check_period == 0;
}

int Agent::travel(const std::string& to) const { return plan_.world->travel_time(obs_.location, to); }

std::optional<std::string> Agent::npc_meeting_place(const std::string& npc_id) const {
  if (std::find(obs_.npcs_here.begin(), obs_.npcs_here.end(), npc_id) != obs_.npcs_here.end()) return obs_.location;
  const auto* npc = plan_.world->find_npc(npc_id);
  for (const auto& span : npc->schedule) {
    const VirtualMinutes arrival = obs_.vtime + travel(span.location_id);
    if (arrival >= span.from && arrival < span.to) return span.location_id;
  }
  return std::nullopt;
}

std::optional<Agent::Goal> Agent::goal_for(const PmTask& task) {
  const auto& world = *plan_.world;
  const bool is_npc = world.find_npc(task.target_object) != nullptr;
  std::string target_location;
  if (is_npc) {
    auto place = npc_meeting_place(task.target_object);
    if (!place) return std::nullopt;
    target_location = *place;
  } else {
    target_location = world.object_location(task.target_object);
  }

  if (task.time_based()) {
    const VirtualMinutes d = *task.designated_time;
    const bool reminded = obs_.reminded.count(task.id) != 0;
    bool go = reminded || committed_.count(task.id);
    switch (policy_.kind) {
      case AgentPolicy::Kind::Perfect:
        go = go || obs_.vtime + world.travel_time(obs_.location, target_location) >= d - 12;
        if (go && obs_.location == target_location && obs_.vtime < d - kWindowBefore && !reminded)
          return Goal{&task, target_location, false};
        break;
      case AgentPolicy::Kind::ImmediateExecutor:
      case AgentPolicy::Kind::Retention:
        go = go || obs_.vtime >= d - kWindowBefore;
        break;
      case AgentPolicy::Kind::ClockChecker:
        if (!go && clock_visible()) {
          const VirtualMinutes arrival = obs_.vtime + world.travel_time(obs_.location, target_location);
          if (arrival >= d - kWindowBefore && arrival <= d + kWindowAfter) {
            committed_.insert(task.id);
            go = true;
          }
        }
        break;
    }
    if (!go) return std::nullopt;
    return Goal{&task, target_location, true};
  }

  if (!cue_met_.count(task.id) && task.cue) {
    const auto& cue = *task.cue;
    switch (cue.kind) {
      case CueCondition::Kind::LocationEnter: return Goal{&task, cue.ref, false};
      case CueCondition::Kind::ObjectProximity: return Goal{&task, world.object_location(cue.ref), false};
      case CueCondition::Kind::NpcEncounter: {
        auto place = npc_meeting_place(cue.ref);
        if (!place) return std::nullopt;
        return Goal{&task, *place, false};
      }
      case CueCondition::Kind::Activity: {
        for (const auto& area : world.areas())
          for (const auto& point : area.distractor_points)
            if (point.id == cue.ref || to_string(point.game_kind) == cue.ref) return Goal{&task, point.location_id, false};
        return std::nullopt;
      }
    }
  }
  return Goal{&task, target_location, true};
}

std::optional<Agent::Goal> Agent::choose_goal() {
  const auto& world = *plan_.world;
  std::vector<const PmTask*> pending;
  for (const auto& id : obs_.shown)
    if (!obs_.resolved.count(id) && remembers(id)) pending.push_back(plan_.day_plan.find(id));

  for (const auto* t : pending)
    if (obs_.reminded.count(t->id))
      if (auto g = goal_for(*t)) return g;
  for (const auto* t : pending)
    if (t->time_based())
      if (auto g = goal_for(*t)) return g;

  // Perfect planning: never start an errand that would make the next time window unreachable.
  std::optional<VirtualMinutes> deadline;
  std::string deadline_location;
  if (policy_.kind == AgentPolicy::Kind::Perfect) {
    for (const auto* t : pending)
      if (t->time_based() && (!deadline || *t->designated_time < *deadline)) {
        deadline = *t->designated_time;
        deadline_location = world.object_location(t->target_object);
      }
  }
  for (const auto* t : pending) {
    if (t->time_based()) continue;
    auto g = goal_for(*t);
    if (!g) continue;
    if (deadline) {
      const bool at_npc = world.find_npc(t->target_object) != nullptr;
      const auto finish = g->execute_here || at_npc ? g->location : world.object_location(t->target_object);
      const int cost = travel(g->location) + world.travel_time(g->location, finish) +
                       world.travel_time(finish, deadline_location) + 2;
      if (obs_.vtime + cost > *deadline - 12) continue;
    }
    return g;
  }
  return std::nullopt;
}

std::optional<Command> Agent::idle() {
  if (obs_.distractor) return std::nullopt;
  const auto& area = plan_.world->area(plan_.world->area_of(obs_.location));
  const DistractorPoint* nearest = nullptr;
  for (const auto& point : area.distractor_points)
    if (!nearest || travel(point.location_id) < travel(nearest->location_id)) nearest = &point;
  if (!nearest) return std::nullopt;
  if (nearest->location_id != obs_.location) return command::Move{nearest->location_id};
  return command::StartDistractor{nearest->id};
}

std::optional<Command> Agent::step() {
  if (obs_.ended) return std::nullopt;
  if (obs_.vit_item) {
    const int index = obs_.vit_item->at("index").get<int>();
    return command::VitAnswer{index, plan_.vit_items.at(static_cast<std::size_t>(index)).correct_response};
  }
  if (obs_.briefing_pending) return command::AckBriefing{};
  if (obs_.last_rejected) {
    obs_.last_rejected = false;
    return std::nullopt;
  }
  if (!first_check_) {
    Rng rng = derived_rng(policy_.seed, "clock-phase");
    first_check_ = obs_.vtime + static_cast<VirtualMinutes>(uniform_index(rng, static_cast<std::size_t>(policy_.check_period)));
  }

  for (const auto& id : obs_.shown) {
    const auto* t = plan_.day_plan.find(id);
    if (!t->cue || cue_met_.count(id)) continue;
    const auto& cue = *t->cue;
    bool met = false;
    switch (cue.kind) {
      case CueCondition::Kind::LocationEnter: met = obs_.location == cue.ref; break;
      case CueCondition::Kind::ObjectProximity: met = plan_.world->object_location(cue.ref) == obs_.location; break;
      case CueCondition::Kind::NpcEncounter:
        met = std::find(obs_.npcs_here.begin(), obs_.npcs_here.end(), cue.ref) != obs_.npcs_here.end();
        break;
      case CueCondition::Kind::Activity: {
        const auto* point = obs_.distractor ? plan_.world->find_distractor(*obs_.distractor) : nullptr;
        met = point && (point->id == cue.ref || to_string(point->game_kind) == cue.ref);
        break;
      }
    }
    if (met) cue_met_.insert(id);
  }

  auto goal = choose_goal();
  if (!goal) return idle();
  if (goal->location != obs_.location) return command::Move{goal->location};
  const auto& task = *goal->task;
  if (goal->execute_here) return command::Interact{task.target_object, task.target_action};
  if (task.cue && task.cue->kind == CueCondition::Kind::Activity && !obs_.distractor) {
    for (const auto& area : plan_.world->areas())
      for (const auto& point : area.distractor_points)
        if (point.location_id == obs_.location) return command::StartDistractor{point.id};
  }
  return std::nullopt;
}

SessionRecord run_headless(const SessionPlan& plan, const AgentPolicy& policy, LogSink sink) {
  SessionRunner runner(plan, std::move(sink));
  Agent agent(policy, runner.engine().plan());
  for (const auto& m : runner.start()) agent.observe(m);
  int streak = 0;
  while (!runner.ended()) {
    if (auto cmd = agent.step()) {
      if (++streak > 1000) throw std::logic_error("agent issued 1000 commands without letting time pass");
      for (const auto& m : runner.submit(*cmd)) agent.observe(m);
      continue;
    }
    streak = 0;
    const auto& state = runner.engine().state();
    if (!state.running()) throw std::logic_error("agent waits while the session clock is stopped");
    const auto& clock = state.clock;
    const RealMillis target = clock.now() + 1 >= clock.config.day_end ? clock.day_length_ms() : to_real(clock, clock.now() + 1);
    for (const auto& m : runner.advance(target - clock.elapsed_real_ms)) agent.observe(m);
  }
  return runner.engine().finish();
}

}  // namespace pmt
