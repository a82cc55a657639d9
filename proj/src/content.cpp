#include "pmt/content.hpp"

#include <cstdlib>

#include "pmt/error.hpp"
#include "pmt/json_util.hpp"

namespace pmt {

std::filesystem::path default_content_dir() {
  if (const char* env = std::getenv("PMT_CONTENT_DIR"); env && *env) return env;
  return PMT_DEFAULT_CONTENT_DIR;
}

Content load_content(const std::filesystem::path& dir) {
  const auto program = json_util::read_file(dir / "program.json");
  Content c;
  c.root = dir;
  c.world = std::make_shared<const WorldModel>(
      load_world_file(dir / json_util::require_string(program, "world", "program")));
  std::vector<std::filesystem::path> catalog_files;
  for (const auto& p : json_util::require(program, "catalog", "program")) catalog_files.push_back(dir / p.get<std::string>());
  c.catalog = load_catalog_files(catalog_files);
  c.word_bank = load_word_bank_file(dir / json_util::require_string(program, "word_bank", "program"));
  if (program.contains("clock")) c.clock = clock_config_from_json(program.at("clock"));
  if (program.contains("rules")) c.rules = plan_rules_from_json(program.at("rules"));
  if (program.contains("vit")) {
    c.vit.items_per_level = program.at("vit").value("items_per_level", c.vit.items_per_level);
    c.vit.foils = program.at("vit").value("foils", c.vit.foils);
    if (c.vit.items_per_level < 1 || c.vit.foils < 1) throw ValidationError("program: imagery item and foil counts must be positive");
  }
  c.reminder_message = program.value("reminder_message", c.reminder_message);
  c.repetition_factor = program.value("repetition_factor", c.repetition_factor);
  if (c.repetition_factor <= 0.0 || c.repetition_factor > 1.0)
    throw ValidationError("program: repetition_factor must be in (0, 1]");
  validate_catalog(c.catalog, *c.world, c.clock);
  build_program(c.catalog, 0, c.rules);  // the catalog must be able to fill every level
  return c;
}

SessionPlan make_session_plan(int session_number, const Content& content, std::uint64_t seed,
                              const std::string& participant) {
  if (session_number < 1 || session_number > 8) throw ValidationError("session number must be 1..8");
  SessionPlan plan;
  plan.session_number = session_number;
  plan.participant = participant;
  plan.world = content.world;
  plan.clock = content.clock;
  plan.rules = content.rules;
  plan.reminder_message = content.reminder_message;
  plan.seed = seed;
  if (session_number <= 3) {
    plan.phase = Phase::VitPlusPractice;
    plan.scored = false;
    static const std::vector<int> kLevels[3] = {{1, 2, 3}, {4, 5, 6}, {7, 8}};
    plan.vit_levels = kLevels[session_number - 1];
    Rng rng = derived_rng(seed, "vit-session-" + std::to_string(session_number));
    for (int level : plan.vit_levels)
      for (auto& item : build_level(level, content.word_bank, rng, content.vit)) plan.vit_items.push_back(std::move(item));
    plan.day_plan = practice_plan(content.catalog);
  } else if (session_number == 4) {
    plan.phase = Phase::Tutorial;
    plan.scored = false;
    plan.day_plan = tutorial_plan(content.catalog);
  } else {
    plan.phase = Phase::Vrt;
    plan.scored = true;
    plan.vrt_level = session_number - 4;
    plan.day_plan = build_program(content.catalog, seed, content.rules)[static_cast<std::size_t>(session_number - 5)];
  }
  plan.validate();
  return plan;
}

}  // namespace pmt
