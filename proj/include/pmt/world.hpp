#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "pmt/vclock.hpp"

namespace pmt {

enum class GameKind { WhackAMole, ShootingGallery, Generic };

std::string to_string(GameKind kind);
GameKind game_kind_from_string(const std::string& text);

struct InteractableObject {
  std::string id;
  std::string label;
  std::vector<std::string> supported_actions;
  std::optional<std::vector<std::string>> choice_options;

  /// What the choice menu offers: the choice options when present, otherwise the plain actions.
  const std::vector<std::string>& menu() const { return choice_options ? *choice_options : supported_actions; }
};

struct Location {
  std::string id;
  std::string area_id;
  std::string label;
  std::vector<InteractableObject> objects;
};

struct DistractorPoint {
  std::string id;
  std::string area_id;
  std::string location_id;
  GameKind game_kind = GameKind::Generic;
};

/// An NPC stands at `location_id` during [from, to).
struct NpcSpan {
  std::string location_id;
  VirtualMinutes from = 0;
  VirtualMinutes to = 0;
};

/// A character the participant can meet. Interactable like an object while present.
struct Npc {
  std::string id;
  std::string label;
  std::vector<std::string> supported_actions;
  std::vector<NpcSpan> schedule;
};

struct Area {
  std::string id;
  std::string label;
  std::vector<Location> locations;
  std::vector<DistractorPoint> distractor_points;
  std::vector<std::string> npcs;  // characters whose schedule visits this area
};

struct TravelEdge {
  std::string from;
  std::string to;
  int cost = 0;  // virtual minutes
};

/// Upper bound (exclusive) on the travel diameter: the farthest traversal must fit in a one-hour task interval.
inline constexpr int kTaskIntervalMinutes = 60;

/// Immutable once loaded. Travel costs are precomputed all-pairs shortest paths.
class WorldModel {
 public:
  WorldModel() = default;

  const std::vector<Area>& areas() const { return areas_; }
  const std::vector<TravelEdge>& edges() const { return edges_; }
  const std::vector<Npc>& npcs() const { return npcs_; }
  const std::string& start_location() const { return start_location_; }
  /// The source document, kept so a session log can embed the exact world it ran against.
  const nlohmann::json& document() const { return document_; }

  bool has_location(const std::string& id) const { return location_index_.count(id) != 0; }
  const Location& location(const std::string& id) const;
  std::vector<std::string> location_ids() const;
  const Area& area(const std::string& id) const;
  const std::string& area_of(const std::string& location_id) const;

  const InteractableObject* find_object(const std::string& id) const;
  /// Location holding the object; throws std::out_of_range for unknown ids.
  const std::string& object_location(const std::string& object_id) const;
  const Npc* find_npc(const std::string& id) const;
  const DistractorPoint* find_distractor(const std::string& id) const;

  /// Where the NPC stands at `vtime`, if anywhere.
  std::optional<std::string> npc_location(const std::string& npc_id, VirtualMinutes vtime) const;
  /// NPCs present at `location_id` at `vtime`, in declaration order.
  std::vector<std::string> npcs_at(const std::string& location_id, VirtualMinutes vtime) const;

  /// Shortest-path cost in virtual minutes. Throws std::out_of_range for unknown ids.
  int travel_time(const std::string& from, const std::string& to) const;
  /// Locations visited after `from` along the shortest path, ending with `to`. Empty when from == to.
  std::vector<std::string> path(const std::string& from, const std::string& to) const;
  int diameter() const { return distances_.size() == 0 ? 0 : distances_.maxCoeff(); }

  std::size_t object_count(const std::string& area_id) const;

  friend WorldModel load_world(const nlohmann::json& doc);

 private:
  int index_of(const std::string& location_id) const;

  nlohmann::json document_;
  std::vector<Area> areas_;
  std::vector<TravelEdge> edges_;
  std::vector<Npc> npcs_;
  std::string start_location_;
  std::vector<std::string> location_order_;
  std::unordered_map<std::string, int> location_index_;
  std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> location_slot_;  // area, location
  std::unordered_map<std::string, std::string> object_location_;
  Eigen::MatrixXi distances_;
  Eigen::MatrixXi next_hop_;
};

/// Parses and validates a world document. Throws ValidationError naming the offending entity.
WorldModel load_world(const nlohmann::json& doc);
WorldModel load_world_file(const std::filesystem::path& path);

inline int travel_time(const WorldModel& world, const std::string& from, const std::string& to) {
  return world.travel_time(from, to);
}

}  // namespace pmt
