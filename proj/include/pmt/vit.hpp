#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pmt/rng.hpp"

namespace pmt {

enum class StimulusContent { Noun, Event };
enum class StimulusMode { ImagePlusWord, WordOnly, ImagePlusSentence, SentenceOnly };
enum class ResponseContent { Noun, Action };
enum class ResponseMode { ImagePlusWord, WordOnly, Sentence };

std::string to_string(StimulusMode m);
std::string to_string(ResponseMode m);
std::string to_string(StimulusContent c);
std::string to_string(ResponseContent c);

inline bool shows_image(StimulusMode m) {
  return m == StimulusMode::ImagePlusWord || m == StimulusMode::ImagePlusSentence;
}
inline bool shows_image(ResponseMode m) { return m == ResponseMode::ImagePlusWord; }

/// Presentation of one curriculum level (the content/expression table).
struct VitLevelSpec {
  StimulusContent stimulus_content;
  StimulusMode stimulus_mode;
  ResponseContent response_content;
  ResponseMode response_mode;
};

inline constexpr int kVitLevels = 8;

/// Throws std::out_of_range outside 1..8.
const VitLevelSpec& vit_level_spec(int level);

enum class PairKind { NounNoun, NounAction, EventAction };
enum class Tier { Easy, Hard };

std::string to_string(PairKind k);

struct WordPair {
  PairKind kind = PairKind::NounNoun;
  Tier tier = Tier::Easy;
  std::string cue;
  std::string response;
  std::optional<std::string> cue_image;
  std::optional<std::string> response_image;
};

struct WordBank {
  std::vector<WordPair> pairs;
};

WordBank load_word_bank(const nlohmann::json& doc);
WordBank load_word_bank_file(const std::filesystem::path& path);

struct VitItem {
  int level = 1;
  StimulusContent stimulus_content = StimulusContent::Noun;
  StimulusMode stimulus_mode = StimulusMode::WordOnly;
  ResponseContent response_content = ResponseContent::Noun;
  ResponseMode response_mode = ResponseMode::WordOnly;
  std::string stimulus_text;
  std::string correct_response;
  std::vector<std::string> foils;
  /// Correct response and foils in presentation order.
  std::vector<std::string> options;
  std::optional<std::string> stimulus_image;
  std::optional<std::string> response_image;

  bool operator==(const VitItem&) const = default;
};

struct VitLevelResult {
  int level = 1;
  int items_presented = 0;
  int items_correct = 0;

  bool operator==(const VitLevelResult&) const = default;
};

struct VitOptions {
  int items_per_level = 10;
  int foils = 3;
};

/// Levels 1-2 draw easy/hard noun pairs, 3-4 any noun pair, 5-6 noun-action, 7-8 event-action.
std::vector<VitItem> build_level(int level, const WordBank& bank, Rng& rng, const VitOptions& options = {});

/// Throws std::invalid_argument if `chosen` was not one of the presented options.
bool score_response(const VitItem& item, const std::string& chosen);

/// Total correct over total presented, across levels. Throws on empty input.
double imagery_score(const std::vector<VitLevelResult>& results);

nlohmann::json to_json(const VitItem& item);
VitItem vit_item_from_json(const nlohmann::json& node);
nlohmann::json to_json(const VitLevelResult& r);

}  // namespace pmt
