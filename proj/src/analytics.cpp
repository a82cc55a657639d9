#include "pmt/analytics.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/algorithm/string/trim.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/tokenizer.hpp>

#include "pmt/error.hpp"
#include "pmt/session.hpp"

namespace pmt {

namespace {

using json = nlohmann::json;

const std::array<const char*, 5> kTypes{"total", "regular", "irregular", "event", "time"};

CategoryRate& category(AchievementRates& r, const std::string& type) {
  if (type == "total") return r.total;
  if (type == "regular") return r.regular;
  if (type == "irregular") return r.irregular;
  if (type == "event") return r.event_based;
  if (type == "time") return r.time_based;
  throw std::invalid_argument("unknown task type '" + type + "'");
}

const CategoryRate& category(const AchievementRates& r, const std::string& type) {
  return category(const_cast<AchievementRates&>(r), type);
}

json rate_cell(const CategoryRate& c) {
  json j{{"achieved", c.achieved}, {"total", c.total}};
  if (auto r = c.rate()) {
    j["rate"] = *r;
    j["display"] = format3(*r);
  }
  return j;
}

json rates_cells(const AchievementRates& r) {
  json j = json::object();
  for (const char* t : kTypes) j[t] = rate_cell(category(r, t));
  return j;
}

double to_number(const std::string& text, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::logic_error&) {
    throw ValidationError(where + ": '" + text + "' is not a number");
  }
}

CheckLine check(std::string name, bool pass, std::string detail) { return {std::move(name), pass, std::move(detail)}; }

}  // namespace

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: vectors differ in length");
  return pearson(Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())),
                 Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size())));
}

Interval fisher_ci(double r, int n, double level) {
  if (n < 4) throw std::invalid_argument("fisher_ci: need n >= 4");
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("fisher_ci: level must be in (0, 1)");
  if (std::abs(r) >= 1.0) return {r, r, true};
  const double crit = boost::math::quantile(boost::math::normal(), 1.0 - (1.0 - level) / 2.0);
  const double z = std::atanh(r);
  const double half = crit / std::sqrt(static_cast<double>(n - 3));
  return {std::tanh(z - half), std::tanh(z + half), false};
}

double p_value(double r, int n) {
  if (n < 3) throw std::invalid_argument("p_value: need n >= 3");
  if (std::abs(r) >= 1.0) return 0.0;
  if (r == 0.0) return 1.0;
  const double df = n - 2;
  const double t = std::abs(r) * std::sqrt(df) / std::sqrt(1.0 - r * r);
  return 2.0 * boost::math::cdf(boost::math::complement(boost::math::students_t(df), t));
}

CorrelationResult correlate(const std::vector<double>& x, const std::vector<double>& y) {
  CorrelationResult c;
  c.r = pearson(x, y);
  c.n = static_cast<int>(x.size());
  c.p = p_value(c.r, c.n);
  if (c.n >= 4) {
    const auto ci = fisher_ci(c.r, c.n);
    c.ci_low = ci.low;
    c.ci_high = ci.high;
    c.degenerate = ci.degenerate;
  } else {
    c.ci_low = -1.0;
    c.ci_high = 1.0;
  }
  return c;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: need two or more paired points");
  const Eigen::Map<const Eigen::ArrayXd> ax(x.data(), static_cast<Eigen::Index>(x.size()));
  const Eigen::Map<const Eigen::ArrayXd> ay(y.data(), static_cast<Eigen::Index>(y.size()));
  const Eigen::ArrayXd dx = ax - ax.mean();
  const double sxx = dx.square().sum();
  if (sxx == 0.0) throw UndefinedCorrelation("fit_line: constant predictor");
  const double slope = (dx * (ay - ay.mean())).sum() / sxx;
  return {slope, ay.mean() - slope * ax.mean()};
}

double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

std::string format3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", round3(v) + 0.0);
  return buf;
}

std::string format_p(double p) { return p < 0.001 ? "< 0.001" : format3(p); }

std::string to_string(Group g) { return g == Group::Elderly ? "elderly" : "young"; }

Group group_from_string(const std::string& s) {
  if (s == "elderly") return Group::Elderly;
  if (s == "young") return Group::Young;
  throw ValidationError("group must be 'elderly' or 'young', got '" + s + "'");
}

std::vector<std::map<std::string, std::string>> read_csv(const std::filesystem::path& csv) {
  std::ifstream in(csv);
  if (!in) throw ValidationError(csv.string() + ": cannot open");
  using Tokenizer = boost::tokenizer<boost::escaped_list_separator<char>>;
  std::vector<std::string> header;
  std::vector<std::map<std::string, std::string>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (boost::algorithm::trim_copy(line).empty()) continue;
    std::vector<std::string> cells;
    try {
      for (auto cell : Tokenizer(line)) cells.push_back(boost::algorithm::trim_copy(cell));
    } catch (const boost::escaped_list_error& e) {
      throw ValidationError(csv.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (header.empty()) {
      header = cells;
      continue;
    }
    if (cells.size() != header.size())
      throw ValidationError(csv.string() + ":" + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                            " columns, found " + std::to_string(cells.size()));
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < header.size(); ++i) row[header[i]] = cells[i];
    rows.push_back(std::move(row));
  }
  if (header.empty()) throw ValidationError(csv.string() + ": empty file");
  return rows;
}

std::vector<ParticipantScores> load_participants(const std::filesystem::path& csv) {
  const auto rows = read_csv(csv);
  std::vector<ParticipantScores> out;
  std::set<std::string> ids;
  int line = 1;
  for (const auto& row : rows) {
    ++line;
    const std::string where = csv.string() + ":" + std::to_string(line);
    ParticipantScores p;
    auto id = row.find("id");
    if (id == row.end()) id = row.find("participant");
    if (id == row.end() || id->second.empty()) throw ValidationError(where + ": missing id");
    p.participant_id = id->second;
    if (!ids.insert(p.participant_id).second) throw ValidationError(where + ": duplicate id '" + p.participant_id + "'");
    auto group = row.find("group");
    if (group == row.end()) throw ValidationError(where + ": missing group");
    try {
      p.group = group_from_string(group->second);
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
    if (auto m = row.find("mist_total"); m != row.end() && !m->second.empty()) p.mist_total = to_number(m->second, where);
    if (auto s = row.find("imagery_score"); s != row.end() && !s->second.empty()) {
      p.imagery_score = to_number(s->second, where);
      if (*p.imagery_score < 0.0 || *p.imagery_score > 1.0) throw ValidationError(where + ": imagery_score must be in [0, 1]");
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<AchievementRow> achievement_table(const std::vector<SessionRecord>& records) {
  std::vector<AchievementRow> rows;
  for (const auto& rec : records) {
    if (!rec.scored || !rec.vrt_level) continue;
    auto it = std::find_if(rows.begin(), rows.end(), [&](const AchievementRow& r) { return r.participant_id == rec.participant; });
    if (it == rows.end()) {
      rows.push_back({rec.participant, {}, {}, {}});
      it = std::prev(rows.end());
    }
    if (it->sessions.count(rec.session_number))
      throw ValidationError("participant '" + rec.participant + "' has two records for session " +
                            std::to_string(rec.session_number));
    it->sessions[rec.session_number] = rec.rates;
  }
  for (auto& row : rows) {
    for (int s = 5; s <= 8; ++s) {
      auto it = row.sessions.find(s);
      if (it == row.sessions.end()) {
        row.missing_sessions.push_back(s);
        continue;
      }
      for (const char* t : kTypes) {
        auto& dst = category(row.overall, t);
        const auto& src = category(it->second, t);
        dst.achieved += src.achieved;
        dst.total += src.total;
      }
    }
  }
  return rows;
}

std::vector<NormalizedDuration> normalize_durations(const std::vector<DurationCell>& cells) {
  std::map<std::string, std::vector<std::size_t>> columns;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].seconds < 0)
      throw std::invalid_argument("negative duration for " + cells[i].participant_id + " on " + cells[i].task_id);
    columns[cells[i].task_id].push_back(i);
  }
  std::vector<NormalizedDuration> out(cells.size());
  for (const auto& [task, idx] : columns) {
    Eigen::ArrayXd d(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) d[static_cast<Eigen::Index>(k)] = static_cast<double>(cells[idx[k]].seconds);
    const double span = d.maxCoeff() - d.minCoeff();
    const Eigen::ArrayXd norm = span > 0.0 ? Eigen::ArrayXd((d - d.minCoeff()) / span) : Eigen::ArrayXd::Zero(d.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const auto& c = cells[idx[k]];
      out[idx[k]] = {c.task_id, c.participant_id, c.seconds, norm[static_cast<Eigen::Index>(k)]};
    }
  }
  return out;
}

void validate(const QuestionnaireResponse& r) {
  const bool ueq = r.instrument == Instrument::UeqS;
  const int count = ueq ? kUeqItems : kJikakuItems;
  const int lo = ueq ? -3 : 1;
  const int hi = ueq ? 3 : 5;
  const std::string name = ueq ? "UEQ-S" : "Jikaku-sho";
  if (static_cast<int>(r.items.size()) != count)
    throw ValidationError(name + " response of '" + r.participant_id + "' has " + std::to_string(r.items.size()) +
                          " items, expected " + std::to_string(count));
  for (std::size_t i = 0; i < r.items.size(); ++i)
    if (r.items[i] < lo || r.items[i] > hi)
      throw ValidationError(name + " response of '" + r.participant_id + "': item " + std::to_string(i + 1) + " = " +
                            std::to_string(r.items[i]) + " is outside " + std::to_string(lo) + ".." + std::to_string(hi));
}

namespace {

Eigen::MatrixXd response_matrix(const std::vector<QuestionnaireResponse>& responses, Instrument instrument, int items) {
  if (responses.empty()) throw ValidationError("no questionnaire responses");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(responses.size()), items);
  for (std::size_t i = 0; i < responses.size(); ++i) {
    if (responses[i].instrument != instrument) throw ValidationError("mixed questionnaire instruments");
    validate(responses[i]);
    for (int j = 0; j < items; ++j) m(static_cast<Eigen::Index>(i), j) = responses[i].items[static_cast<std::size_t>(j)];
  }
  return m;
}

}  // namespace

UeqSummary score_ueq(const std::vector<QuestionnaireResponse>& responses) {
  const Eigen::MatrixXd m = response_matrix(responses, Instrument::UeqS, kUeqItems);
  UeqSummary s;
  s.respondents = static_cast<int>(m.rows());
  s.item_means = m.colwise().mean().transpose();
  s.pragmatic = s.item_means.head(4).mean();
  s.hedonic = s.item_means.tail(4).mean();
  return s;
}

JikakuSummary score_jikaku(const std::vector<QuestionnaireResponse>& responses) {
  const Eigen::MatrixXd m = response_matrix(responses, Instrument::JikakuSho, kJikakuItems);
  JikakuSummary s;
  s.respondents = static_cast<int>(m.rows());
  s.item_means = m.colwise().mean().transpose();
  s.category_means = Eigen::Map<const Eigen::MatrixXd>(s.item_means.data(), 5, 5).colwise().mean().transpose();
  return s;
}

std::vector<QuestionnaireResponse> load_questionnaire(const std::filesystem::path& csv, Instrument instrument) {
  const int count = instrument == Instrument::UeqS ? kUeqItems : kJikakuItems;
  std::vector<QuestionnaireResponse> out;
  int line = 1;
  for (const auto& row : read_csv(csv)) {
    ++line;
    const std::string where = csv.string() + ":" + std::to_string(line);
    QuestionnaireResponse r;
    r.instrument = instrument;
    auto id = row.find("participant");
    if (id == row.end()) id = row.find("id");
    if (id == row.end()) throw ValidationError(where + ": missing participant column");
    r.participant_id = id->second;
    for (int i = 1;; ++i) {
      auto it = row.find("item" + std::to_string(i));
      if (it == row.end()) break;
      const double v = to_number(it->second, where);
      if (v != std::floor(v)) throw ValidationError(where + ": item" + std::to_string(i) + " must be an integer");
      r.items.push_back(static_cast<int>(v));
    }
    if (static_cast<int>(r.items.size()) != count && row.size() - 1 != r.items.size())
      throw ValidationError(where + ": unexpected columns besides participant and item1..itemN");
    try {
      validate(r);
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CheckLine> check_table4(const std::filesystem::path& csv) {
  std::vector<CheckLine> lines;
  for (const auto& row : read_csv(csv)) {
    const std::string name = "table4 " + row.at("type") + "/" + row.at("predictor");
    const double r = to_number(row.at("r"), name);
    const auto ci = fisher_ci(r, 10);
    const double lo = to_number(row.at("ci_low"), name);
    const double hi = to_number(row.at("ci_high"), name);
    const bool ci_ok = std::abs(ci.low - lo) <= 0.002 && std::abs(ci.high - hi) <= 0.002;
    const double p = p_value(r, 10);
    const std::string printed = row.at("p");
    bool p_ok;
    std::string note;
    if (printed.rfind('<', 0) == 0) {
      p_ok = p <= 0.0005;
      note = " (printed " + printed + "; t-test gives " + std::to_string(p) + ", documented method discrepancy)";
    } else {
      p_ok = std::abs(p - to_number(printed, name)) <= 0.001;
      note = " (printed " + printed + ")";
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "CI [%.4f, %.4f] vs [%s, %s]; p %.5f", ci.low, ci.high, row.at("ci_low").c_str(),
                  row.at("ci_high").c_str(), p);
    lines.push_back(check(name, ci_ok && p_ok, buf + note));
  }
  return lines;
}

std::vector<CheckLine> check_table5(const std::filesystem::path& csv) {
  std::vector<CheckLine> lines;
  std::vector<SessionRecord> records;
  std::map<std::string, std::map<int, std::string>> printed;
  for (const auto& row : read_csv(csv)) {
    const auto& pid = row.at("participant");
    for (int s = 5; s <= 8; ++s) {
      const std::string name = "table5 " + pid + "/s" + std::to_string(s);
      const auto& text = row.at("s" + std::to_string(s));
      const double rate = to_number(text, name);
      const int n = s + 2;  // 7, 8, 9, 10 tasks on levels 1-4
      const int k = static_cast<int>(std::lround(rate * n));
      const bool ok = std::abs(static_cast<double>(k) / n - rate) <= 0.0005;
      lines.push_back(check(name, ok, std::to_string(k) + "/" + std::to_string(n) + " = " + format3(double(k) / n) + " vs " + text));
      SessionRecord rec;
      rec.participant = pid;
      rec.session_number = s;
      rec.vrt_level = s - 4;
      rec.scored = true;
      rec.rates.total = {k, n};
      records.push_back(rec);
      printed[pid][s] = text;
    }
  }
  for (const auto& row : achievement_table(records)) {
    bool ok = row.missing_sessions.empty();
    std::string detail;
    for (const auto& [s, rates] : row.sessions) {
      const auto shown = format3(*rates.total.rate());
      ok = ok && shown == printed[row.participant_id][s];
      detail += shown + " ";
    }
    lines.push_back(check("table5 " + row.participant_id + " achievement_table display", ok, detail));
  }
  return lines;
}

std::vector<CheckLine> check_table7(const std::filesystem::path& csv) {
  std::vector<DurationCell> cells;
  std::vector<std::string> printed;
  for (const auto& row : read_csv(csv)) {
    cells.push_back({row.at("task"), row.at("participant"), parse_mmss(row.at("duration"))});
    printed.push_back(row.at("normalized"));
  }
  std::vector<CheckLine> lines;
  const auto norm = normalize_durations(cells);
  for (std::size_t i = 0; i < norm.size(); ++i) {
    const double want = to_number(printed[i], "table7");
    const bool ok = std::abs(norm[i].normalized - want) <= 0.001;
    lines.push_back(check("table7 " + norm[i].task_id + "/" + norm[i].participant_id, ok,
                          format_mmss(norm[i].seconds) + " -> " + format3(norm[i].normalized) + " vs " + printed[i]));
  }
  return lines;
}

std::vector<CheckLine> check_fixtures(const std::filesystem::path& dir) {
  std::vector<CheckLine> all;
  for (auto* fn : {&check_table4, &check_table5, &check_table7}) {
    const char* file = fn == &check_table4 ? "table4.csv" : fn == &check_table5 ? "table5.csv" : "table7.csv";
    auto part = (*fn)(dir / file);
    all.insert(all.end(), part.begin(), part.end());
  }
  return all;
}

nlohmann::json analyze(const AnalysisInputs& inputs) {
  if (!std::filesystem::is_directory(inputs.logs_dir))
    throw ValidationError(inputs.logs_dir.string() + ": not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(inputs.logs_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".pmtlog") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ValidationError(inputs.logs_dir.string() + ": no .pmtlog files");

  std::vector<ReplayResult> sessions;
  std::string errors;
  for (const auto& f : files) {
    std::ifstream in(f);
    try {
      sessions.push_back(replay(in));
    } catch (const LogError& e) {
      errors += "\n  " + f.filename().string() + ": " + e.what() + " (last good seq " + std::to_string(e.last_good_seq()) + ")";
    } catch (const std::exception& e) {
      errors += "\n  " + f.filename().string() + ": " + e.what();
    }
  }
  if (!errors.empty()) throw ValidationError("unreadable logs:" + errors);

  const auto participants = load_participants(inputs.participants);
  std::map<std::string, const ParticipantScores*> by_id;
  for (const auto& p : participants) by_id[p.participant_id] = &p;

  json report;
  json warnings = json::array();
  json logs = json::array();
  for (const auto& f : files) logs.push_back(f.filename().string());
  report["logs"] = logs;

  std::vector<SessionRecord> records;
  for (const auto& s : sessions) records.push_back(s.record);
  const auto table = achievement_table(records);

  json achievement = json::array();
  for (const auto& row : table) {
    json sessions_j = json::object();
    for (const auto& [s, rates] : row.sessions) sessions_j[std::to_string(s)] = rates_cells(rates);
    json entry{{"participant", row.participant_id},
               {"sessions", sessions_j},
               {"missing_sessions", row.missing_sessions},
               {"overall", rates_cells(row.overall)}};
    if (auto it = by_id.find(row.participant_id); it != by_id.end()) entry["group"] = to_string(it->second->group);
    else warnings.push_back("participant '" + row.participant_id + "' has logs but no scores row");
    if (!row.missing_sessions.empty())
      warnings.push_back("participant '" + row.participant_id + "' is missing scored sessions");
    achievement.push_back(entry);
  }
  report["achievement"] = achievement;

  // Group means per task type: the aggregates behind the type comparison plot.
  json group_means = json::object();
  for (Group g : {Group::Elderly, Group::Young}) {
    json cell = json::object();
    for (const char* t : kTypes) {
      double sum = 0;
      int n = 0;
      for (const auto& row : table) {
        auto it = by_id.find(row.participant_id);
        if (it == by_id.end() || it->second->group != g) continue;
        if (auto r = category(row.overall, t).rate()) {
          sum += *r;
          ++n;
        }
      }
      if (n > 0) cell[t] = {{"mean", sum / n}, {"participants", n}};
    }
    group_means[to_string(g)] = cell;
  }
  report["type_means"] = group_means;

  json correlations = json::array();
  for (const std::string predictor : {"mist", "imagery"}) {
    for (const char* t : kTypes) {
      std::vector<double> x, y;
      int missing = 0;
      for (const auto& row : table) {
        auto it = by_id.find(row.participant_id);
        auto rate = category(row.overall, t).rate();
        if (it == by_id.end() || !rate) continue;
        const auto& score = predictor == "mist" ? it->second->mist_total : it->second->imagery_score;
        if (!score) {
          ++missing;
          continue;
        }
        x.push_back(*score);
        y.push_back(*rate);
      }
      if (missing > 0 && x.empty()) {
        if (std::string(t) == "total") warnings.push_back("no " + predictor + " scores: correlations with " + predictor + " omitted");
        continue;
      }
      try {
        const auto c = correlate(x, y);
        const auto fit = fit_line(x, y);
        correlations.push_back({{"type", t},
                                {"predictor", predictor},
                                {"r", c.r},
                                {"ci", {c.ci_low, c.ci_high}},
                                {"p", c.p},
                                {"p_text", format_p(c.p)},
                                {"n", c.n},
                                {"fit", {{"slope", fit.slope}, {"intercept", fit.intercept}}}});
      } catch (const UndefinedCorrelation& e) {
        warnings.push_back(predictor + "/" + t + ": " + e.what());
      }
    }
  }
  report["correlations"] = correlations;

  std::vector<DurationCell> cells;
  for (const auto& s : sessions) {
    if (!s.record.scored) continue;
    for (const auto& d : s.record.durations) {
      const auto* task = s.plan.day_plan.find(d.task_id);
      if (task && !task->time_based() && !task->regular()) cells.push_back({d.task_id, s.record.participant, d.seconds});
    }
  }
  json durations = json::array();
  for (const auto& n : normalize_durations(cells))
    durations.push_back({{"task_id", n.task_id},
                         {"participant", n.participant_id},
                         {"seconds", n.seconds},
                         {"duration", format_mmss(n.seconds)},
                         {"normalized", n.normalized},
                         {"display", format_mmss(n.seconds) + " (" + format3(n.normalized) + ")"}});
  report["durations"] = durations;

  auto by_group = [&](const std::vector<QuestionnaireResponse>& rs) {
    std::map<Group, std::vector<QuestionnaireResponse>> groups;
    for (const auto& r : rs) {
      auto it = by_id.find(r.participant_id);
      if (it == by_id.end()) throw ValidationError("questionnaire row for unknown participant '" + r.participant_id + "'");
      groups[it->second->group].push_back(r);
    }
    return groups;
  };
  auto vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  if (inputs.ueq) {
    json j = json::object();
    for (const auto& [g, rs] : by_group(load_questionnaire(*inputs.ueq, Instrument::UeqS))) {
      const auto s = score_ueq(rs);
      j[to_string(g)] = {{"respondents", s.respondents}, {"item_means", vec(s.item_means)}, {"pragmatic", s.pragmatic}, {"hedonic", s.hedonic}};
    }
    report["ueq_s"] = j;
  }
  if (inputs.jikaku) {
    json j = json::object();
    for (const auto& [g, rs] : by_group(load_questionnaire(*inputs.jikaku, Instrument::JikakuSho))) {
      const auto s = score_jikaku(rs);
      json cats = json::object();
      for (std::size_t c = 0; c < kJikakuCategories.size(); ++c) cats[kJikakuCategories[c]] = s.category_means[static_cast<Eigen::Index>(c)];
      j[to_string(g)] = {{"respondents", s.respondents}, {"item_means", vec(s.item_means)}, {"categories", cats}};
    }
    report["jikaku_sho"] = j;
  }
  report["warnings"] = warnings;
  return report;
}

std::string render_text(const json& report) {
  std::ostringstream out;
  char buf[256];
  out << "Task achievement rate per session\n";
  std::snprintf(buf, sizeof buf, "%-12s %-8s %-8s %-8s %-8s\n", "participant", "5", "6", "7", "8");
  out << buf;
  for (const auto& row : report.at("achievement")) {
    std::string cells[4];
    for (int s = 5; s <= 8; ++s) {
      const auto key = std::to_string(s);
      const auto& ss = row.at("sessions");
      cells[s - 5] = ss.contains(key) && ss[key]["total"].contains("display") ? ss[key]["total"]["display"].get<std::string>() : "-";
    }
    std::snprintf(buf, sizeof buf, "%-12s %-8s %-8s %-8s %-8s\n", row.at("participant").get<std::string>().c_str(),
                  cells[0].c_str(), cells[1].c_str(), cells[2].c_str(), cells[3].c_str());
    out << buf;
  }

  out << "\nCorrelations with task achievement\n";
  std::snprintf(buf, sizeof buf, "%-10s %-9s %-7s %-18s %-8s\n", "type", "predictor", "r", "95% CI", "p");
  out << buf;
  for (const auto& c : report.at("correlations")) {
    const std::string ci = "[" + format3(c["ci"][0].get<double>()) + ", " + format3(c["ci"][1].get<double>()) + "]";
    std::snprintf(buf, sizeof buf, "%-10s %-9s %-7s %-18s %-8s\n", c["type"].get<std::string>().c_str(),
                  c["predictor"].get<std::string>().c_str(), format3(c["r"].get<double>()).c_str(), ci.c_str(),
                  c["p_text"].get<std::string>().c_str());
    out << buf;
  }

  out << "\nRemember-to-execute durations (normalized per task)\n";
  std::map<std::string, std::map<std::string, std::string>> grid;
  std::vector<std::string> tasks, people;
  for (const auto& d : report.at("durations")) {
    const auto t = d["task_id"].get<std::string>();
    const auto p = d["participant"].get<std::string>();
    if (std::find(tasks.begin(), tasks.end(), t) == tasks.end()) tasks.push_back(t);
    if (std::find(people.begin(), people.end(), p) == people.end()) people.push_back(p);
    grid[p][t] = d["display"].get<std::string>();
  }
  std::sort(tasks.begin(), tasks.end());
  out << std::string(12, ' ');
  for (const auto& t : tasks) {
    std::snprintf(buf, sizeof buf, " %-15s", t.c_str());
    out << buf;
  }
  out << '\n';
  for (const auto& p : people) {
    std::snprintf(buf, sizeof buf, "%-12s", p.c_str());
    out << buf;
    for (const auto& t : tasks) {
      std::snprintf(buf, sizeof buf, " %-15s", grid[p].count(t) ? grid[p][t].c_str() : "");
      out << buf;
    }
    out << '\n';
  }
  for (const auto& w : report.at("warnings")) out << "warning: " << w.get<std::string>() << '\n';
  return out.str();
}

}  // namespace pmt
