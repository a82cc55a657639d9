#include <gtest/gtest.h>

#include <climits>
#include <functional>
#include <map>
#include <set>

#include "pmt/error.hpp"
#include "pmt/rng.hpp"
#include "pmt/world.hpp"
#include "support.hpp"

using namespace pmt;
using nlohmann::json;

namespace {

json world_doc(int n, const std::vector<std::tuple<int, int, int>>& edges) {
  json locs = json::array();
  for (int i = 0; i < n; ++i) locs.push_back({{"id", "L" + std::to_string(i)}, {"label", "place"}});
  json e = json::array();
  for (auto [a, b, c] : edges) e.push_back({{"from", "L" + std::to_string(a)}, {"to", "L" + std::to_string(b)}, {"cost", c}});
  return {{"start", "L0"},
          {"areas", json::array({{{"id", "town"},
                                  {"label", "Town"},
                                  {"locations", locs},
                                  {"distractor_points", json::array({{{"id", "g"}, {"location", "L0"}, {"game", "generic"}}})}}})},
          {"edges", e}};
}

// Minimum over every simple path, found by exhaustive depth-first enumeration.
int enumerate_cheapest(int n, const std::vector<std::tuple<int, int, int>>& edges, int from, int to) {
  std::multimap<int, std::pair<int, int>> adj;
  for (auto [a, b, c] : edges) {
    adj.insert({a, {b, c}});
    adj.insert({b, {a, c}});
  }
  int best = INT_MAX;
  std::vector<bool> seen(n, false);
  std::function<void(int, int)> dfs = [&](int at, int cost) {
    if (at == to) {
      best = std::min(best, cost);
      return;
    }
    seen[at] = true;
    auto [lo, hi] = adj.equal_range(at);
    for (auto it = lo; it != hi; ++it)
      if (!seen[it->second.first]) dfs(it->second.first, cost + it->second.second);
    seen[at] = false;
  };
  dfs(from, 0);
  return best;
}

}  // namespace

TEST(World, TravelMatchesExhaustivePathEnumeration) {
  Rng rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 3 + static_cast<int>(uniform_index(rng, 5));
    std::vector<std::tuple<int, int, int>> edges;
    for (int i = 1; i < n; ++i) edges.emplace_back(static_cast<int>(uniform_index(rng, i)), i, 1 + static_cast<int>(uniform_index(rng, 6)));
    for (int extra = 0; extra < n; ++extra) {
      const int a = static_cast<int>(uniform_index(rng, n));
      const int b = static_cast<int>(uniform_index(rng, n));
      if (a != b) edges.emplace_back(a, b, 1 + static_cast<int>(uniform_index(rng, 6)));
    }
    const auto world = load_world(world_doc(n, edges));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const auto from = "L" + std::to_string(a), to = "L" + std::to_string(b);
        ASSERT_EQ(world.travel_time(from, to), a == b ? 0 : enumerate_cheapest(n, edges, a, b));
        EXPECT_EQ(world.travel_time(from, to), world.travel_time(to, from));
        int walked = 0;
        std::string at = from;
        for (const auto& hop : world.path(from, to)) {
          walked += world.travel_time(at, hop);
          at = hop;
        }
        EXPECT_EQ(at, to);
        EXPECT_EQ(walked, world.travel_time(from, to));
      }
  }
}

TEST(World, DiameterLimitIsExclusive) {
  EXPECT_NO_THROW(load_world(world_doc(3, {{0, 1, 30}, {1, 2, 29}})));
  EXPECT_THROW(load_world(world_doc(3, {{0, 1, 30}, {1, 2, 30}})), ValidationError);
  // Farthest pair costs 75 although no single edge exceeds 40.
  try {
    load_world(world_doc(3, {{0, 1, 40}, {1, 2, 35}}));
    FAIL() << "expected a diameter violation";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("75"), std::string::npos) << e.what();
  }
}

TEST(World, StructuralErrorsNameTheEntity) {
  EXPECT_THROW(load_world(world_doc(3, {{0, 1, 5}})), ValidationError);  // L2 unreachable
  EXPECT_THROW(load_world(world_doc(2, {{0, 1, 0}})), ValidationError);
  auto doc = world_doc(2, {{0, 1, 5}});
  doc["edges"].push_back({{"from", "L0"}, {"to", "nowhere"}, {"cost", 1}});
  try {
    load_world(doc);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("nowhere"), std::string::npos);
  }
  doc = world_doc(2, {{0, 1, 5}});
  doc["start"] = "attic";
  EXPECT_THROW(load_world(doc), ValidationError);
  doc = world_doc(2, {{0, 1, 5}});
  doc["areas"][0]["locations"][1]["id"] = "L0";
  EXPECT_THROW(load_world(doc), ValidationError);
}

TEST(World, DefaultWorldShape) {
  const auto& w = *testkit::content().world;
  EXPECT_EQ(w.start_location(), "bedroom");
  EXPECT_EQ(w.areas().size(), 2u);
  EXPECT_LT(w.diameter(), kTaskIntervalMinutes);
  EXPECT_EQ(w.area_of("arcade"), "street");
  EXPECT_EQ(w.object_location("medicine_box"), "living_room");
  EXPECT_THROW(w.object_location("shimizu"), std::out_of_range);
  EXPECT_EQ(w.travel_time("bedroom", "arcade"), 2 + 5 + 2);
}

TEST(World, NpcSchedulesAreHalfOpen) {
  const auto& w = *testkit::content().world;
  EXPECT_FALSE(w.npc_location("matsuda", 719));
  EXPECT_EQ(w.npc_location("matsuda", 720), "arcade");
  EXPECT_EQ(w.npc_location("matsuda", 899), "arcade");
  EXPECT_FALSE(w.npc_location("matsuda", 900));
  EXPECT_EQ(w.npcs_at("arcade", 750), (std::vector<std::string>{"shimizu", "matsuda"}));
  EXPECT_TRUE(w.npcs_at("kitchen", 750).empty());
}
