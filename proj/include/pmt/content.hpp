#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include "pmt/engine.hpp"
#include "pmt/taskmodel.hpp"
#include "pmt/vit.hpp"
#include "pmt/world.hpp"

namespace pmt {

/// Everything under a content directory: world, task catalog, word bank and program settings.
struct Content {
  std::filesystem::path root;
  std::shared_ptr<const WorldModel> world;
  TaskCatalog catalog;
  WordBank word_bank;
  ClockConfig clock;
  PlanRules rules;
  VitOptions vit;
  std::string reminder_message = kDefaultReminderMessage;
  double repetition_factor = 0.5;
};

/// PMT_CONTENT_DIR when set, otherwise the directory the build was configured with.
std::filesystem::path default_content_dir();

/// Reads `program.json` under `dir` and everything it points to, then cross-validates the lot.
Content load_content(const std::filesystem::path& dir);

/// Session 1..8 of the program for one seed. The four scored days are drawn together from the seed.
SessionPlan make_session_plan(int session_number, const Content& content, std::uint64_t seed,
                              const std::string& participant = {});

}  // namespace pmt
