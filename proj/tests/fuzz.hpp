#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <vector>

#include "pmt/rng.hpp"
#include "support.hpp"

namespace pmt::testkit {

inline const std::vector<std::string>& banned_words() {
  static const std::vector<std::string> words{"fail", "wrong", "incorrect", "mistake", "error", "penalty", "missed", "forgot"};
  return words;
}

/// Every string in the payload except outcome status codes, which are data rather than wording.
inline void collect_text(const nlohmann::json& node, std::vector<std::string>& out, const std::string& key = {}) {
  if (node.is_string()) {
    if (key != "status") out.push_back(node.get<std::string>());
  } else if (node.is_object()) {
    for (const auto& [k, v] : node.items()) collect_text(v, out, k);
  } else if (node.is_array()) {
    for (const auto& v : node) collect_text(v, out, key);
  }
}

struct FuzzReport {
  int commands = 0;
  int sessions = 0;
  int events = 0;
  int task_results = 0;
  std::vector<std::string> violations;
};

/// Random participant: mostly plausible commands, some nonsense, with random waits in between.
inline FuzzReport fuzz_errorless(int total_commands, std::uint64_t seed) {
  FuzzReport report;
  Rng rng(seed);
  const auto& c = content();
  const auto& world = *c.world;
  std::vector<std::string> targets;
  for (const auto& area : world.areas())
    for (const auto& loc : area.locations)
      for (const auto& obj : loc.objects) targets.push_back(obj.id);
  for (const auto& npc : world.npcs()) targets.push_back(npc.id);
  const auto locations = world.location_ids();

  auto pick = [&](const std::vector<std::string>& v) { return v[uniform_index(rng, v.size())]; };
  auto menu_of = [&](const std::string& t) -> std::vector<std::string> {
    if (const auto* o = world.find_object(t)) return o->menu();
    return world.find_npc(t)->supported_actions;
  };

  int session_number = 0;
  while (report.commands < total_commands) {
    session_number = session_number % 8 + 1;
    const auto plan = make_session_plan(session_number, c, seed + static_cast<std::uint64_t>(report.sessions), "fuzz");
    ++report.sessions;
    int last_achieved = 0;
    std::vector<std::string> text;
    auto inspect = [&](const std::vector<ProtocolMessage>& messages, const SessionRunner& runner) {
      for (const auto& m : messages) {
        ++report.events;
        if (m.kind == MessageKind::TaskResult) ++report.task_results;
        text.clear();
        collect_text(m.payload, text);
        for (auto s : text) {
          std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
          for (const auto& w : banned_words())
            if (s.find(w) != std::string::npos)
              report.violations.push_back(std::string(to_string(m.kind)) + " says '" + s + "'");
        }
        if (m.payload.contains("achieved") && m.payload["achieved"].is_number_integer()) {
          const int a = m.payload["achieved"].get<int>();
          if (a < last_achieved) report.violations.push_back("achieved count fell to " + std::to_string(a));
          last_achieved = std::max(last_achieved, a);
        }
      }
      const int now = runner.engine().state().achieved_count;
      if (now < last_achieved) report.violations.push_back("engine achieved count fell");
      last_achieved = std::max(last_achieved, now);
    };

    SessionRunner runner(plan);
    inspect(runner.start(), runner);
    while (!runner.ended() && report.commands < total_commands) {
      const auto& st = runner.engine().state();
      Command cmd;
      const auto roll = uniform_index(rng, 100);
      if (st.vit_pending && roll < 60) {
        const auto& item = plan.vit_items[st.vit_cursor];
        cmd = command::VitAnswer{static_cast<int>(st.vit_cursor), pick(item.options)};
      } else if (st.briefing_pending && roll < 60) {
        cmd = command::AckBriefing{};
      } else if (roll < 20) {
        cmd = command::Move{pick(locations)};
      } else if (roll < 45) {
        const auto t = pick(targets);
        const auto menu = menu_of(t);
        cmd = command::Interact{t, uniform_index(rng, 3) == 0 ? std::nullopt : std::optional(pick(menu))};
      } else if (roll < 60) {
        const auto t = pick(targets);
        cmd = command::SelectChoice{t, uniform_index(rng, 8) == 0 ? std::string("juggle") : pick(menu_of(t))};
      } else if (roll < 70) {
        cmd = command::StartDistractor{uniform_index(rng, 2) ? "home_game" : "street_game"};
      } else if (roll < 75) {
        cmd = command::StopDistractor{};
      } else if (roll < 79) {
        cmd = command::Pause{};
      } else if (roll < 85) {
        cmd = command::Resume{};
      } else if (roll < 88) {
        cmd = command::Join{"fuzz"};
      } else if (roll < 92) {
        cmd = command::VitAnswer{static_cast<int>(uniform_index(rng, 40)), "guess"};
      } else {
        cmd = command::AckBriefing{};
      }
      ++report.commands;
      inspect(runner.submit(cmd), runner);
      inspect(runner.advance(static_cast<RealMillis>(uniform_index(rng, 4000))), runner);
      if (uniform_index(rng, 50) == 0) inspect(runner.reject_frame("unreadable frame"), runner);
    }
    if (!runner.ended()) inspect(runner.abort(), runner);
  }
  return report;
}

}  // namespace pmt::testkit
