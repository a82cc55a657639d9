#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pmt/engine.hpp"
#include "pmt/protocol.hpp"
#include "pmt/rng.hpp"
#include "pmt/session.hpp"

namespace pmt {

struct AgentPolicy {
  enum class Kind { Perfect, ImmediateExecutor, Retention, ClockChecker };

  Kind kind = Kind::Perfect;
  double p_retain = 1.0;          // retention: probability a task survives one virtual hour
  int check_period = 1;           // clock_checker: minutes between looks at the clock
  double repetition_factor = 0.5; // per prior exposure, scales the forgetting hazard of regular tasks
  std::uint64_t seed = 0;

  /// "perfect", "immediate", "retention:p=0.8", "clock_checker:period=45"; options may add
  /// ",repetition=1" (no bonus) or ",seed=N". Throws ValidationError on malformed specs.
  static AgentPolicy parse(const std::string& spec);
  std::string to_string() const;
  void validate() const;
};

/// Virtual minute at which the agent would drop a task remembered at `remembered_at`; infinity means never.
/// Survival over one hour is p^(factor^k), so irregular tasks forget with probability 1 - p per hour.
double forget_minute(double p_retain, double repetition_factor, int prior_exposures, VirtualMinutes remembered_at,
                     double uniform);

/// What a trainee sees: assembled from engine messages only.
struct Observation {
  VirtualMinutes vtime = 0;
  std::string location;
  std::optional<std::string> distractor;
  bool briefing_pending = false;
  std::optional<nlohmann::json> vit_item;
  bool ended = false;
  std::vector<std::string> npcs_here;
  std::vector<std::string> shown;           // task ids in the order they were presented
  std::set<std::string> resolved;           // ids with a task_result
  std::set<std::string> reminded;
  std::map<std::string, VirtualMinutes> shown_at;
  bool last_rejected = false;

  void apply(const ProtocolMessage& message);
};

/// Scripted participant. `plan` stands in for the trainee's understanding of task descriptions and the map.
class Agent {
 public:
  Agent(AgentPolicy policy, const SessionPlan& plan);

  void observe(const ProtocolMessage& message);
  /// Next command, or nullopt to let one virtual minute pass.
  std::optional<Command> step();

  const Observation& observation() const { return obs_; }
  bool remembers(const std::string& task_id) const;

 private:
  struct Goal {
    const PmTask* task;
    std::string location;  // where to go next
    bool execute_here;     // act as soon as standing at `location`
  };

  std::optional<Goal> choose_goal();
  std::optional<Goal> goal_for(const PmTask& task);
  bool clock_visible() const;
  int travel(const std::string& to) const;
  std::optional<std::string> npc_meeting_place(const std::string& npc) const;
  std::optional<Command> idle();

  AgentPolicy policy_;
  const SessionPlan& plan_;
  Observation obs_;
  std::map<std::string, double> forget_at_;
  std::set<std::string> cue_met_;
  std::set<std::string> committed_;
  std::optional<VirtualMinutes> first_check_;
};

/// Drives a session from start to day end with `policy`. Deterministic per (plan.seed, policy.seed).
SessionRecord run_headless(const SessionPlan& plan, const AgentPolicy& policy, LogSink sink = {});

}  // namespace pmt
