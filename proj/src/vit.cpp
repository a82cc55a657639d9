#include "pmt/vit.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <stdexcept>

#include "pmt/error.hpp"
#include "pmt/json_util.hpp"

namespace pmt {

namespace {

using SC = StimulusContent;
using SM = StimulusMode;
using RC = ResponseContent;
using RM = ResponseMode;

constexpr std::array<VitLevelSpec, kVitLevels> kLevels{{
    {SC::Noun, SM::ImagePlusWord, RC::Noun, RM::ImagePlusWord},
    {SC::Noun, SM::ImagePlusWord, RC::Noun, RM::ImagePlusWord},
    {SC::Noun, SM::ImagePlusWord, RC::Noun, RM::WordOnly},
    {SC::Noun, SM::WordOnly, RC::Noun, RM::WordOnly},
    {SC::Noun, SM::ImagePlusWord, RC::Action, RM::Sentence},
    {SC::Noun, SM::WordOnly, RC::Action, RM::Sentence},
    {SC::Event, SM::ImagePlusSentence, RC::Action, RM::Sentence},
    {SC::Event, SM::SentenceOnly, RC::Action, RM::Sentence},
}};

PairKind pair_kind_for(int level) {
  if (level <= 4) return PairKind::NounNoun;
  if (level <= 6) return PairKind::NounAction;
  return PairKind::EventAction;
}

PairKind pair_kind_from_string(const std::string& s) {
  for (auto k : {PairKind::NounNoun, PairKind::NounAction, PairKind::EventAction})
    if (to_string(k) == s) return k;
  throw ValidationError("word bank: unknown pair kind '" + s + "'");
}

template <typename Enum, std::size_t N>
Enum enum_from_string(const std::string& s, const std::array<Enum, N>& values) {
  for (auto v : values)
    if (to_string(v) == s) return v;
  throw ValidationError("unknown presentation mode '" + s + "'");
}

}  // namespace

std::string to_string(StimulusMode m) {
  switch (m) {
    case SM::ImagePlusWord: return "image_plus_word";
    case SM::WordOnly: return "word_only";
    case SM::ImagePlusSentence: return "image_plus_sentence";
    case SM::SentenceOnly: return "sentence_only";
  }
  return "";
}

std::string to_string(ResponseMode m) {
  switch (m) {
    case RM::ImagePlusWord: return "image_plus_word";
    case RM::WordOnly: return "word_only";
    case RM::Sentence: return "sentence";
  }
  return "";
}

std::string to_string(StimulusContent c) { return c == SC::Noun ? "noun" : "event"; }
std::string to_string(ResponseContent c) { return c == RC::Noun ? "noun" : "action"; }

std::string to_string(PairKind k) {
  switch (k) {
    case PairKind::NounNoun: return "noun-noun";
    case PairKind::NounAction: return "noun-action";
    case PairKind::EventAction: return "event-action";
  }
  return "";
}

const VitLevelSpec& vit_level_spec(int level) {
  if (level < 1 || level > kVitLevels) throw std::out_of_range("VIT level must be 1..8");
  return kLevels[static_cast<std::size_t>(level - 1)];
}

WordBank load_word_bank(const nlohmann::json& doc) {
  const auto& pairs = json_util::require(doc, "pairs", "word bank");
  if (!pairs.is_array()) throw ValidationError("word bank: 'pairs' must be an array");
  WordBank bank;
  for (const auto& p : pairs) {
    WordPair pair;
    pair.kind = pair_kind_from_string(json_util::require_string(p, "kind", "word pair"));
    pair.cue = json_util::require_string(p, "cue", "word pair");
    pair.response = json_util::require_string(p, "response", "word pair '" + pair.cue + "'");
    const auto tier = p.value("tier", std::string("easy"));
    if (tier == "easy") pair.tier = Tier::Easy;
    else if (tier == "hard") pair.tier = Tier::Hard;
    else throw ValidationError("word pair '" + pair.cue + "': tier must be easy or hard");
    if (p.contains("cue_image")) pair.cue_image = p.at("cue_image").get<std::string>();
    if (p.contains("response_image")) pair.response_image = p.at("response_image").get<std::string>();
    bank.pairs.push_back(std::move(pair));
  }
  return bank;
}

WordBank load_word_bank_file(const std::filesystem::path& path) { return load_word_bank(json_util::read_file(path)); }

std::vector<VitItem> build_level(int level, const WordBank& bank, Rng& rng, const VitOptions& options) {
  const VitLevelSpec& spec = vit_level_spec(level);
  const PairKind kind = pair_kind_for(level);

  std::vector<const WordPair*> same_kind, eligible;
  for (const auto& p : bank.pairs) {
    if (p.kind != kind) continue;
    same_kind.push_back(&p);
    if (level == 1 && p.tier != Tier::Easy) continue;
    if (level == 2 && p.tier != Tier::Hard) continue;
    eligible.push_back(&p);
  }
  if (static_cast<int>(eligible.size()) < options.items_per_level)
    throw ValidationError("word bank: level " + std::to_string(level) + " needs " +
                          std::to_string(options.items_per_level) + " " + to_string(kind) + " pairs, found " +
                          std::to_string(eligible.size()));
  if (options.foils < 2 || static_cast<int>(same_kind.size()) < options.foils + 1)
    throw ValidationError("word bank: not enough " + to_string(kind) + " pairs to draw " +
                          std::to_string(options.foils) + " foils");

  shuffle(eligible, rng);
  eligible.resize(static_cast<std::size_t>(options.items_per_level));

  std::vector<VitItem> items;
  for (const WordPair* pair : eligible) {
    VitItem item;
    item.level = level;
    item.stimulus_content = spec.stimulus_content;
    item.stimulus_mode = spec.stimulus_mode;
    item.response_content = spec.response_content;
    item.response_mode = spec.response_mode;
    item.stimulus_text = pair->cue;
    item.correct_response = pair->response;
    if (shows_image(spec.stimulus_mode)) item.stimulus_image = pair->cue_image.value_or("img/placeholder.png");
    if (shows_image(spec.response_mode)) item.response_image = pair->response_image.value_or("img/placeholder.png");

    std::vector<std::string> foil_pool;
    for (const WordPair* other : same_kind)
      if (other->response != pair->response &&
          std::find(foil_pool.begin(), foil_pool.end(), other->response) == foil_pool.end())
        foil_pool.push_back(other->response);
    if (static_cast<int>(foil_pool.size()) < options.foils)
      throw ValidationError("word bank: not enough distinct responses for foils at level " + std::to_string(level));
    shuffle(foil_pool, rng);
    foil_pool.resize(static_cast<std::size_t>(options.foils));
    item.foils = foil_pool;
    item.options = foil_pool;
    item.options.push_back(pair->response);
    shuffle(item.options, rng);
    items.push_back(std::move(item));
  }
  return items;
}

bool score_response(const VitItem& item, const std::string& chosen) {
  if (std::find(item.options.begin(), item.options.end(), chosen) == item.options.end())
    throw std::invalid_argument("'" + chosen + "' was not among the presented options");
  return chosen == item.correct_response;
}

double imagery_score(const std::vector<VitLevelResult>& results) {
  if (results.empty()) throw std::invalid_argument("imagery_score: no level results");
  int presented = 0, correct = 0;
  for (const auto& r : results) {
    if (r.items_correct < 0 || r.items_correct > r.items_presented)
      throw std::invalid_argument("imagery_score: level " + std::to_string(r.level) + " has inconsistent counts");
    presented += r.items_presented;
    correct += r.items_correct;
  }
  if (presented == 0) throw std::invalid_argument("imagery_score: no items presented");
  return static_cast<double>(correct) / presented;
}

nlohmann::json to_json(const VitItem& item) {
  nlohmann::json j{{"level", item.level},
                   {"stimulus_content", to_string(item.stimulus_content)},
                   {"stimulus_mode", to_string(item.stimulus_mode)},
                   {"response_content", to_string(item.response_content)},
                   {"response_mode", to_string(item.response_mode)},
                   {"stimulus_text", item.stimulus_text},
                   {"correct_response", item.correct_response},
                   {"foils", item.foils},
                   {"options", item.options}};
  if (item.stimulus_image) j["stimulus_image"] = *item.stimulus_image;
  if (item.response_image) j["response_image"] = *item.response_image;
  return j;
}

VitItem vit_item_from_json(const nlohmann::json& j) {
  VitItem item;
  item.level = j.at("level").get<int>();
  item.stimulus_content = j.at("stimulus_content").get<std::string>() == "noun" ? SC::Noun : SC::Event;
  item.stimulus_mode = enum_from_string(j.at("stimulus_mode").get<std::string>(),
                                        std::array{SM::ImagePlusWord, SM::WordOnly, SM::ImagePlusSentence, SM::SentenceOnly});
  item.response_content = j.at("response_content").get<std::string>() == "noun" ? RC::Noun : RC::Action;
  item.response_mode = enum_from_string(j.at("response_mode").get<std::string>(),
                                        std::array{RM::ImagePlusWord, RM::WordOnly, RM::Sentence});
  item.stimulus_text = j.at("stimulus_text").get<std::string>();
  item.correct_response = j.at("correct_response").get<std::string>();
  item.foils = j.at("foils").get<std::vector<std::string>>();
  item.options = j.at("options").get<std::vector<std::string>>();
  if (j.contains("stimulus_image")) item.stimulus_image = j.at("stimulus_image").get<std::string>();
  if (j.contains("response_image")) item.response_image = j.at("response_image").get<std::string>();
  return item;
}

nlohmann::json to_json(const VitLevelResult& r) {
  return {{"level", r.level}, {"items_presented", r.items_presented}, {"items_correct", r.items_correct}};
}

}  // namespace pmt
