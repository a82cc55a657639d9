#include "pmt/world.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <stdexcept>

#include "pmt/error.hpp"
#include "pmt/json_util.hpp"

namespace pmt {

namespace {

constexpr int kUnreachable = std::numeric_limits<int>::max() / 4;

std::vector<std::string> string_list(const nlohmann::json& node, const std::string& key, const std::string& owner) {
  std::vector<std::string> out;
  if (!node.contains(key)) return out;
  const auto& arr = node.at(key);
  if (!arr.is_array()) throw ValidationError(owner + ": '" + key + "' must be an array of strings");
  for (const auto& v : arr) {
    if (!v.is_string()) throw ValidationError(owner + ": '" + key + "' must be an array of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

std::string to_string(GameKind kind) {
  switch (kind) {
    case GameKind::WhackAMole: return "whack_a_mole";
    case GameKind::ShootingGallery: return "shooting_gallery";
    case GameKind::Generic: return "generic";
  }
  return "generic";
}

GameKind game_kind_from_string(const std::string& text) {
  if (text == "whack_a_mole") return GameKind::WhackAMole;
  if (text == "shooting_gallery") return GameKind::ShootingGallery;
  if (text == "generic") return GameKind::Generic;
  throw ValidationError("unknown distractor game kind '" + text + "'");
}

const Location& WorldModel::location(const std::string& id) const {
  auto it = location_slot_.find(id);
  if (it == location_slot_.end()) throw std::out_of_range("unknown location '" + id + "'");
  return areas_[it->second.first].locations[it->second.second];
}

std::vector<std::string> WorldModel::location_ids() const { return location_order_; }

const Area& WorldModel::area(const std::string& id) const {
  for (const auto& a : areas_)
    if (a.id == id) return a;
  throw std::out_of_range("unknown area '" + id + "'");
}

const std::string& WorldModel::area_of(const std::string& location_id) const { return location(location_id).area_id; }

const InteractableObject* WorldModel::find_object(const std::string& id) const {
  auto it = object_location_.find(id);
  if (it == object_location_.end()) return nullptr;
  for (const auto& obj : location(it->second).objects)
    if (obj.id == id) return &obj;
  return nullptr;
}

const std::string& WorldModel::object_location(const std::string& object_id) const {
  auto it = object_location_.find(object_id);
  if (it == object_location_.end()) throw std::out_of_range("unknown object '" + object_id + "'");
  return it->second;
}

const Npc* WorldModel::find_npc(const std::string& id) const {
  for (const auto& n : npcs_)
    if (n.id == id) return &n;
  return nullptr;
}

const DistractorPoint* WorldModel::find_distractor(const std::string& id) const {
  for (const auto& a : areas_)
    for (const auto& d : a.distractor_points)
      if (d.id == id) return &d;
  return nullptr;
}

std::optional<std::string> WorldModel::npc_location(const std::string& npc_id, VirtualMinutes vtime) const {
  const Npc* npc = find_npc(npc_id);
  if (!npc) throw std::out_of_range("unknown character '" + npc_id + "'");
  for (const auto& span : npc->schedule)
    if (vtime >= span.from && vtime < span.to) return span.location_id;
  return std::nullopt;
}

std::vector<std::string> WorldModel::npcs_at(const std::string& location_id, VirtualMinutes vtime) const {
  std::vector<std::string> out;
  for (const auto& npc : npcs_) {
    auto where = npc_location(npc.id, vtime);
    if (where && *where == location_id) out.push_back(npc.id);
  }
  return out;
}

int WorldModel::index_of(const std::string& location_id) const {
  auto it = location_index_.find(location_id);
  if (it == location_index_.end()) throw std::out_of_range("unknown location '" + location_id + "'");
  return it->second;
}

int WorldModel::travel_time(const std::string& from, const std::string& to) const {
  return distances_(index_of(from), index_of(to));
}

std::vector<std::string> WorldModel::path(const std::string& from, const std::string& to) const {
  std::vector<std::string> hops;
  int at = index_of(from);
  const int goal = index_of(to);
  while (at != goal) {
    at = next_hop_(at, goal);
    hops.push_back(location_order_[static_cast<std::size_t>(at)]);
  }
  return hops;
}

std::size_t WorldModel::object_count(const std::string& area_id) const {
  std::size_t n = 0;
  for (const auto& loc : area(area_id).locations) n += loc.objects.size();
  return n;
}

WorldModel load_world(const nlohmann::json& doc) {
  using json_util::require;
  using json_util::require_string;

  if (!doc.is_object()) throw ValidationError("world: document must be an object");
  WorldModel world;
  world.document_ = doc;

  std::set<std::string> area_ids, target_ids, point_ids;
  const auto& areas = require(doc, "areas", "world");
  if (!areas.is_array() || areas.empty()) throw ValidationError("world: 'areas' must be a non-empty array");

  for (const auto& a : areas) {
    Area area;
    area.id = require_string(a, "id", "world area");
    const std::string owner = "area '" + area.id + "'";
    area.label = a.value("label", area.id);
    if (!area_ids.insert(area.id).second) throw ValidationError("world: duplicate area id '" + area.id + "'");

    const auto& locs = require(a, "locations", owner);
    if (!locs.is_array() || locs.empty()) throw ValidationError(owner + ": 'locations' must be a non-empty array");
    for (const auto& l : locs) {
      Location loc;
      loc.id = require_string(l, "id", owner + " location");
      loc.area_id = area.id;
      loc.label = l.value("label", loc.id);
      if (world.location_index_.count(loc.id))
        throw ValidationError("world: duplicate location id '" + loc.id + "'");
      const std::string loc_owner = "location '" + loc.id + "'";
      if (l.contains("objects")) {
        for (const auto& o : l.at("objects")) {
          InteractableObject obj;
          obj.id = require_string(o, "id", loc_owner + " object");
          const std::string obj_owner = "object '" + obj.id + "'";
          obj.label = o.value("label", obj.id);
          obj.supported_actions = string_list(o, "actions", obj_owner);
          if (obj.supported_actions.empty()) throw ValidationError(obj_owner + ": needs at least one action");
          if (o.contains("choices")) {
            obj.choice_options = string_list(o, "choices", obj_owner);
            if (obj.choice_options->size() < 3)
              throw ValidationError(obj_owner + ": a choice menu needs one answer plus at least two foils");
          }
          if (!target_ids.insert(obj.id).second) throw ValidationError("world: duplicate object id '" + obj.id + "'");
          world.object_location_[obj.id] = loc.id;
          loc.objects.push_back(std::move(obj));
        }
      }
      world.location_index_[loc.id] = static_cast<int>(world.location_order_.size());
      world.location_order_.push_back(loc.id);
      world.location_slot_[loc.id] = {world.areas_.size(), area.locations.size()};
      area.locations.push_back(std::move(loc));
    }

    if (a.contains("distractor_points")) {
      for (const auto& d : a.at("distractor_points")) {
        DistractorPoint point;
        point.id = require_string(d, "id", owner + " distractor point");
        point.area_id = area.id;
        point.location_id = require_string(d, "location", "distractor point '" + point.id + "'");
        point.game_kind = game_kind_from_string(d.value("game", std::string("generic")));
        const bool in_area = std::any_of(area.locations.begin(), area.locations.end(),
                                         [&](const Location& l) { return l.id == point.location_id; });
        if (!in_area)
          throw ValidationError("distractor point '" + point.id + "': location '" + point.location_id +
                                "' is not in area '" + area.id + "'");
        if (!point_ids.insert(point.id).second)
          throw ValidationError("world: duplicate distractor point id '" + point.id + "'");
        area.distractor_points.push_back(std::move(point));
      }
    }
    if (area.distractor_points.empty()) throw ValidationError(owner + ": has no distractor point");
    world.areas_.push_back(std::move(area));
  }

  if (doc.contains("npcs")) {
    for (const auto& n : doc.at("npcs")) {
      Npc npc;
      npc.id = require_string(n, "id", "world npc");
      const std::string owner = "character '" + npc.id + "'";
      npc.label = n.value("label", npc.id);
      npc.supported_actions = string_list(n, "actions", owner);
      if (npc.supported_actions.size() < 3)
        throw ValidationError(owner + ": needs one answer plus at least two foil actions");
      if (!target_ids.insert(npc.id).second) throw ValidationError("world: id '" + npc.id + "' is used twice");
      if (n.contains("schedule")) {
        for (const auto& s : n.at("schedule")) {
          NpcSpan span;
          span.location_id = require_string(s, "location", owner + " schedule");
          span.from = parse_hhmm(require_string(s, "from", owner + " schedule"));
          span.to = parse_hhmm(require_string(s, "to", owner + " schedule"));
          if (!world.location_index_.count(span.location_id))
            throw ValidationError(owner + ": schedule names unknown location '" + span.location_id + "'");
          if (span.to <= span.from) throw ValidationError(owner + ": schedule span ends before it starts");
          npc.schedule.push_back(span);
        }
      }
      for (const auto& span : npc.schedule) {
        auto& area = world.areas_[world.location_slot_.at(span.location_id).first];
        if (std::find(area.npcs.begin(), area.npcs.end(), npc.id) == area.npcs.end()) area.npcs.push_back(npc.id);
      }
      world.npcs_.push_back(std::move(npc));
    }
  }

  const auto n = static_cast<Eigen::Index>(world.location_order_.size());
  world.distances_ = Eigen::MatrixXi::Constant(n, n, kUnreachable);
  world.next_hop_ = Eigen::MatrixXi::Constant(n, n, -1);
  for (Eigen::Index i = 0; i < n; ++i) {
    world.distances_(i, i) = 0;
    world.next_hop_(i, i) = static_cast<int>(i);
  }

  const auto& edges = require(doc, "edges", "world");
  if (!edges.is_array()) throw ValidationError("world: 'edges' must be an array");
  for (const auto& e : edges) {
    TravelEdge edge;
    edge.from = require_string(e, "from", "world edge");
    edge.to = require_string(e, "to", "world edge");
    const std::string owner = "edge " + edge.from + "-" + edge.to;
    if (!e.contains("cost") || !e.at("cost").is_number_integer()) throw ValidationError(owner + ": integer 'cost' required");
    edge.cost = e.at("cost").get<int>();
    if (edge.cost <= 0) throw ValidationError(owner + ": cost must be positive");
    if (!world.location_index_.count(edge.from)) throw ValidationError(owner + ": unknown location '" + edge.from + "'");
    if (!world.location_index_.count(edge.to)) throw ValidationError(owner + ": unknown location '" + edge.to + "'");
    if (edge.from == edge.to) throw ValidationError(owner + ": self loop");
    const int i = world.location_index_.at(edge.from), j = world.location_index_.at(edge.to);
    if (edge.cost < world.distances_(i, j)) {
      world.distances_(i, j) = world.distances_(j, i) = edge.cost;
      world.next_hop_(i, j) = j;
      world.next_hop_(j, i) = i;
    }
    world.edges_.push_back(std::move(edge));
  }

  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (world.distances_(i, k) + world.distances_(k, j) < world.distances_(i, j)) {
          world.distances_(i, j) = world.distances_(i, k) + world.distances_(k, j);
          world.next_hop_(i, j) = world.next_hop_(i, k);
        }

  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (world.distances_(i, j) >= kUnreachable)
        throw ValidationError("world: travel graph is disconnected (no route from '" +
                              world.location_order_[static_cast<std::size_t>(i)] + "' to '" +
                              world.location_order_[static_cast<std::size_t>(j)] + "')");
    }
  Eigen::Index far_i = 0, far_j = 0;
  const int diameter = world.distances_.maxCoeff(&far_i, &far_j);
  if (diameter >= kTaskIntervalMinutes)
    throw ValidationError("world: traversal from '" + world.location_order_[static_cast<std::size_t>(far_i)] +
                          "' to '" + world.location_order_[static_cast<std::size_t>(far_j)] + "' costs " +
                          std::to_string(diameter) + " virtual minutes (must be under " +
                          std::to_string(kTaskIntervalMinutes) + ")");

  world.start_location_ = doc.value("start", world.location_order_.front());
  if (!world.location_index_.count(world.start_location_))
    throw ValidationError("world: start location '" + world.start_location_ + "' does not exist");
  return world;
}

WorldModel load_world_file(const std::filesystem::path& path) {
  return load_world(json_util::read_file(path));
}

}  // namespace pmt
