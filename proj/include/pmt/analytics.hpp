#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "pmt/engine.hpp"

namespace pmt {

/// Raised when a correlation is not defined (constant input, too few points).
class UndefinedCorrelation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

template <typename DX, typename DY>
double pearson(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: vectors differ in length");
  if (x.size() < 3) throw UndefinedCorrelation("pearson: need at least 3 points");
  const Eigen::ArrayXd dx = x.derived().template cast<double>().array() - x.derived().template cast<double>().mean();
  const Eigen::ArrayXd dy = y.derived().template cast<double>().array() - y.derived().template cast<double>().mean();
  const double sxx = dx.square().sum();
  const double syy = dy.square().sum();
  if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelation("pearson: constant vector");
  const double r = (dx * dy).sum() / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

double pearson(const std::vector<double>& x, const std::vector<double>& y);

struct Interval {
  double low = 0;
  double high = 0;
  bool degenerate = false;  // |r| = 1: the interval collapses to [r, r]
};

/// Fisher z interval: tanh(atanh(r) -+ z_(1-a/2) / sqrt(n - 3)).
Interval fisher_ci(double r, int n, double level = 0.95);

/// Two-sided p of t = r sqrt(n-2) / sqrt(1-r^2) under Student t with n-2 degrees of freedom. |r| = 1 gives 0.
double p_value(double r, int n);

struct CorrelationResult {
  double r = 0;
  double ci_low = 0;
  double ci_high = 0;
  double p = 1;
  int n = 0;
  bool degenerate = false;
};

CorrelationResult correlate(const std::vector<double>& x, const std::vector<double>& y);

/// Least-squares line y = slope * x + intercept.
struct LinearFit {
  double slope = 0;
  double intercept = 0;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

double round3(double v);
std::string format3(double v);
/// "< 0.001" below the threshold, three decimals otherwise.
std::string format_p(double p);

enum class Group { Elderly, Young };
std::string to_string(Group g);
Group group_from_string(const std::string& s);

struct ParticipantScores {
  std::string participant_id;
  Group group = Group::Young;
  std::optional<double> mist_total;
  std::optional<double> imagery_score;
};

/// Columns: id, group, and optionally mist_total, imagery_score. Errors name the file and line.
std::vector<ParticipantScores> load_participants(const std::filesystem::path& csv);

/// Rows of a CSV file with a header; values keyed by column name.
std::vector<std::map<std::string, std::string>> read_csv(const std::filesystem::path& csv);

struct AchievementRow {
  std::string participant_id;
  std::map<int, AchievementRates> sessions;  // scored sessions 5..8
  std::vector<int> missing_sessions;
  AchievementRates overall;                   // pooled counts over the sessions present
};

/// One row per participant, in first-seen order. Unscored records are ignored.
std::vector<AchievementRow> achievement_table(const std::vector<SessionRecord>& records);

struct DurationCell {
  std::string task_id;
  std::string participant_id;
  VirtualSeconds seconds = 0;
};

struct NormalizedDuration {
  std::string task_id;
  std::string participant_id;
  VirtualSeconds seconds = 0;
  double normalized = 0;
};

/// Per task column: (d - min) / (max - min); a single entry or a flat column maps to 0. Input order is kept.
std::vector<NormalizedDuration> normalize_durations(const std::vector<DurationCell>& cells);

enum class Instrument { UeqS, JikakuSho };

struct QuestionnaireResponse {
  Instrument instrument = Instrument::UeqS;
  std::string participant_id;
  std::vector<int> items;
};

inline constexpr int kUeqItems = 8;
inline constexpr int kJikakuItems = 25;
inline constexpr std::array<const char*, 5> kJikakuCategories{"drowsiness", "instability", "uneasiness", "dullness",
                                                               "eyestrain"};

/// Throws ValidationError on a wrong item count or an out-of-range score.
void validate(const QuestionnaireResponse& response);

struct UeqSummary {
  int respondents = 0;
  Eigen::VectorXd item_means;  // 8 entries in [-3, 3]
  double pragmatic = 0;        // items 1-4
  double hedonic = 0;          // items 5-8
};

struct JikakuSummary {
  int respondents = 0;
  Eigen::VectorXd item_means;      // 25 entries in [1, 5]
  Eigen::VectorXd category_means;  // 5 entries, items 1-5, 6-10, ... in kJikakuCategories order
};

UeqSummary score_ueq(const std::vector<QuestionnaireResponse>& responses);
JikakuSummary score_jikaku(const std::vector<QuestionnaireResponse>& responses);

/// Columns: participant (or id), then item1..itemN.
std::vector<QuestionnaireResponse> load_questionnaire(const std::filesystem::path& csv, Instrument instrument);

struct CheckLine {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::vector<CheckLine> check_table4(const std::filesystem::path& csv);
std::vector<CheckLine> check_table5(const std::filesystem::path& csv);
std::vector<CheckLine> check_table7(const std::filesystem::path& csv);
std::vector<CheckLine> check_fixtures(const std::filesystem::path& dir);

struct AnalysisInputs {
  std::filesystem::path logs_dir;
  std::filesystem::path participants;
  std::optional<std::filesystem::path> ueq;
  std::optional<std::filesystem::path> jikaku;
};

/// Replays every .pmtlog under logs_dir (sorted by name) and builds the full report.
nlohmann::json analyze(const AnalysisInputs& inputs);
/// Plain-text rendering laid out like the achievement, correlation and duration tables.
std::string render_text(const nlohmann::json& report);

}  // namespace pmt
