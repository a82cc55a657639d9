#include "pmt/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pmt/analytics.hpp"
#include "pmt/content.hpp"
#include "pmt/error.hpp"
#include "pmt/server.hpp"
#include "pmt/session.hpp"

namespace pmt {

namespace {

using json = nlohmann::json;

std::pair<int, int> session_range(const std::string& text) {
  const auto dash = text.find('-');
  try {
    const int a = std::stoi(text.substr(0, dash));
    const int b = dash == std::string::npos ? a : std::stoi(text.substr(dash + 1));
    if (a < 1 || b > 8 || a > b) throw std::out_of_range(text);
    return {a, b};
  } catch (const std::logic_error&) {
    throw ValidationError("session must be 1..8 or a range like 5-8, got '" + text + "'");
  }
}

json rates_summary(const AchievementRates& r) {
  json j = json::object();
  const std::pair<const char*, const CategoryRate*> cats[] = {{"total", &r.total},         {"regular", &r.regular},
                                                              {"irregular", &r.irregular}, {"time_based", &r.time_based},
                                                              {"event_based", &r.event_based}};
  for (const auto& [name, c] : cats) j[name] = c->rate() ? json(*c->rate()) : json();
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

// The content's repetition factor applies unless the agent spec sets its own.
bool mentions_repetition(const std::string& spec) { return spec.find("repetition") != std::string::npos; }

struct RunArgs {
  std::string content;
  std::string session;
  std::string agent = "perfect";
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> agent_seed;
  std::string participant = "agent";
  std::string out_dir;
  std::string sweep;
  int seeds = 50;
  std::string replay_log;
  std::string out;
};

int cmd_run(const RunArgs& a, std::ostream& out) {
  if (!a.replay_log.empty()) {
    std::ifstream in(a.replay_log, std::ios::binary);
    if (!in) throw ValidationError(a.replay_log + ": cannot open");
    const auto result = replay(in);
    const auto text = result.record.to_json().dump(2) + "\n";
    if (!a.out.empty()) write_text(a.out, text);
    out << text;
    return kExitOk;
  }

  const auto content = load_content(a.content.empty() ? default_content_dir() : std::filesystem::path(a.content));
  if (!a.sweep.empty()) {
    const auto spec = SweepSpec::parse(a.sweep);
    const auto [first, last] = session_range(a.session.empty() ? "5-8" : a.session);
    json cells = json::array();
    std::ostringstream table;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-10s %-8s %-8s %-10s %-8s %-8s\n", spec.parameter.c_str(), "total", "regular",
                  "irregular", "time", "event");
    table << buf;
    for (double v : spec.values) {
      AgentPolicy base = spec.at(v);
      if (!mentions_repetition(a.sweep)) base.repetition_factor = content.repetition_factor;
      json runs = json::array();
      std::map<std::string, std::pair<double, int>> acc;
      for (int seed = 1; seed <= a.seeds; ++seed) {
        for (int s = first; s <= last; ++s) {
          AgentPolicy policy = base;
          policy.seed = static_cast<std::uint64_t>(seed);
          const auto record = run_headless(make_session_plan(s, content, static_cast<std::uint64_t>(seed), a.participant), policy);
          const auto rates = rates_summary(record.rates);
          for (const auto& [k, r] : rates.items())
            if (!r.is_null()) {
              acc[k].first += r.get<double>();
              acc[k].second += 1;
            }
          runs.push_back({{"seed", seed}, {"session", s}, {"rates", rates}});
        }
      }
      json mean = json::object();
      for (const auto& [k, sum_n] : acc) mean[k] = sum_n.first / sum_n.second;
      cells.push_back({{"value", v}, {"policy", base.to_string()}, {"mean", mean}, {"runs", runs}});
      auto m = [&](const char* k) { return mean.contains(k) ? format3(mean[k].get<double>()) : std::string("-"); };
      std::snprintf(buf, sizeof buf, "%-10.4g %-8s %-8s %-10s %-8s %-8s\n", v, m("total").c_str(), m("regular").c_str(),
                    m("irregular").c_str(), m("time_based").c_str(), m("event_based").c_str());
      table << buf;
    }
    if (!a.out.empty())
      write_text(a.out, json{{"sweep", a.sweep}, {"seeds", a.seeds}, {"sessions", {first, last}}, {"cells", cells}}.dump(2) + "\n");
    out << table.str();
    return kExitOk;
  }

  if (a.session.empty()) throw ValidationError("run: --session is required (or --sweep / --replay)");
  auto policy = AgentPolicy::parse(a.agent);
  if (!mentions_repetition(a.agent)) policy.repetition_factor = content.repetition_factor;
  policy.seed = a.agent_seed.value_or(a.seed);
  const auto [first, last] = session_range(a.session);
  json summary = json::array();
  for (int s = first; s <= last; ++s) {
    const auto plan = make_session_plan(s, content, a.seed, a.participant);
    std::ostringstream log;
    std::optional<EventLogWriter> writer;
    if (!a.out_dir.empty()) writer.emplace(log, plan.to_json());
    const auto record = run_headless(plan, policy, writer ? LogSink([&](const EventLogEntry& e) { writer->append(e); }) : LogSink{});
    if (writer) {
      writer->close();
      const auto stem = std::filesystem::path(a.out_dir) / ("session" + std::to_string(s));
      write_text(stem.string() + ".pmtlog", log.str());
      write_text(stem.string() + ".record.json", record.to_json().dump(2) + "\n");
    }
    json line{{"session", s}, {"agent", policy.to_string()}, {"seed", a.seed}, {"rates", rates_summary(record.rates)}};
    if (record.rates.total.total > 0) line["display"] = format3(*record.rates.total.rate());
    summary.push_back(line);
  }
  if (!a.out.empty()) write_text(a.out, summary.dump(2) + "\n");
  out << summary.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

std::filesystem::path default_fixture_dir() {
  if (const char* env = std::getenv("PMT_FIXTURE_DIR"); env && *env) return env;
  return PMT_DEFAULT_FIXTURE_DIR;
}

SweepSpec SweepSpec::parse(const std::string& spec) {
  // kind:param=lo..hi:stepS
  const auto bad = [&](const std::string& why) { return ValidationError("sweep '" + spec + "': " + why); };
  const auto c1 = spec.find(':');
  const auto c2 = spec.rfind(':');
  if (c1 == std::string::npos || c2 == c1 || spec.compare(c2 + 1, 4, "step") != 0)
    throw bad("expected kind:param=lo..hi:stepS");
  const std::string kind = spec.substr(0, c1);
  const std::string range = spec.substr(c1 + 1, c2 - c1 - 1);
  const auto eq = range.find('=');
  const auto dots = range.find("..");
  if (eq == std::string::npos || dots == std::string::npos || dots < eq) throw bad("expected param=lo..hi");
  SweepSpec s;
  s.parameter = range.substr(0, eq);
  double lo, hi, step;
  try {
    lo = std::stod(range.substr(eq + 1, dots - eq - 1));
    hi = std::stod(range.substr(dots + 2));
    step = std::stod(spec.substr(c2 + 5));
  } catch (const std::logic_error&) {
    throw bad("bounds and step must be numbers");
  }
  if (!(step > 0) || hi < lo) throw bad("need lo <= hi and a positive step");
  s.base = AgentPolicy::parse(kind);
  const int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (int i = 0; i < count; ++i) s.values.push_back(std::round((lo + i * step) * 1e9) / 1e9);
  s.at(s.values.front());
  s.at(s.values.back());
  return s;
}

AgentPolicy SweepSpec::at(double value) const {
  AgentPolicy p = base;
  if (parameter == "p" && p.kind == AgentPolicy::Kind::Retention) p.p_retain = value;
  else if (parameter == "period" && p.kind == AgentPolicy::Kind::ClockChecker) p.check_period = static_cast<int>(std::lround(value));
  else if (parameter == "repetition") p.repetition_factor = value;
  else throw ValidationError("sweep: parameter '" + parameter + "' does not apply to " + p.to_string());
  p.validate();
  return p;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Prospective-memory training engine"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string content;
  int session = 0;
  std::uint64_t seed = 0;
  std::string participant;

  auto* serve = app.add_subcommand("serve", "Serve one live session over a local socket");
  int port = -1;
  double time_scale = 1.0;
  std::string serve_out = ".";
  serve->add_option("--session", session, "Session number 1-8")->required()->check(CLI::Range(1, 8));
  serve->add_option("--seed", seed, "Plan seed");
  serve->add_option("--port", port, "TCP port on 127.0.0.1 (0 picks one)")->required()->check(CLI::Range(0, 65535));
  serve->add_option("--time-scale", time_scale, "Engine milliseconds per wall-clock millisecond");
  serve->add_option("--participant", participant, "Participant id recorded in the log");
  serve->add_option("--out-dir", serve_out, "Where the log and record go");
  serve->add_option("--content", content, "Content directory");

  auto* run = app.add_subcommand("run", "Run headless agent sessions, sweeps or a replay");
  RunArgs ra;
  std::uint64_t agent_seed = 0;
  run->add_option("--session", ra.session, "Session 1-8 or a range such as 5-8");
  run->add_option("--agent", ra.agent, "perfect | immediate | retention:p=0.8 | clock_checker:period=45");
  run->add_option("--seed", ra.seed, "Plan seed (also the agent seed unless --agent-seed)");
  auto* agent_seed_opt = run->add_option("--agent-seed", agent_seed, "Agent seed");
  run->add_option("--participant", ra.participant, "Participant id recorded in logs");
  run->add_option("--out-dir", ra.out_dir, "Write sessionN.pmtlog and sessionN.record.json here");
  run->add_option("--sweep", ra.sweep, "Parameter grid, e.g. retention:p=0.5..1.0:step0.1");
  run->add_option("--seeds", ra.seeds, "Seeds per sweep cell")->check(CLI::PositiveNumber);
  run->add_option("--replay", ra.replay_log, "Replay a .pmtlog and print its record");
  run->add_option("--out", ra.out, "Also write the JSON result here");
  run->add_option("--content", ra.content, "Content directory");

  auto* analyze_cmd = app.add_subcommand("analyze", "Build the analysis report or check the bundled tables");
  std::string logs, participants_csv, ueq, jikaku, report_out, text_out, fixtures;
  bool check = false;
  analyze_cmd->add_option("--logs", logs, "Directory of .pmtlog files");
  analyze_cmd->add_option("--participants", participants_csv, "participants.csv (id, group, mist_total, imagery_score)");
  analyze_cmd->add_option("--ueq", ueq, "UEQ-S responses CSV");
  analyze_cmd->add_option("--jikaku", jikaku, "Jikaku-sho responses CSV");
  analyze_cmd->add_option("--out", report_out, "report.json path");
  analyze_cmd->add_option("--text", text_out, "Plain-text report path ('-' for stdout)");
  analyze_cmd->add_flag("--check-fixtures", check, "Compare against the bundled published tables");
  analyze_cmd->add_option("--fixtures", fixtures, "Fixture directory");

  auto* validate_cmd = app.add_subcommand("validate", "Validate content documents or a session log");
  std::string world_file, bank_file, log_file;
  std::vector<std::string> catalog_files;
  validate_cmd->add_option("--content", content, "Content directory (all documents plus every session plan)");
  validate_cmd->add_option("--world", world_file, "World document");
  validate_cmd->add_option("--catalog", catalog_files, "Catalog documents, checked against --world or the content world");
  validate_cmd->add_option("--word-bank", bank_file, "Word bank document");
  validate_cmd->add_option("--log", log_file, "Session log: parse, verify checksum and replay");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*serve) {
      const auto c = load_content(content.empty() ? default_content_dir() : std::filesystem::path(content));
      ServeOptions options;
      options.port = static_cast<std::uint16_t>(port);
      options.time_scale = time_scale;
      options.out_dir = serve_out;
      serve_session(make_session_plan(session, c, seed, participant), options, out);
      return kExitOk;
    }
    if (*run) {
      if (*agent_seed_opt) ra.agent_seed = agent_seed;
      return cmd_run(ra, out);
    }
    if (*analyze_cmd) {
      int code = kExitOk;
      if (check) {
        const auto lines = check_fixtures(fixtures.empty() ? default_fixture_dir() : std::filesystem::path(fixtures));
        int failed = 0;
        for (const auto& l : lines) {
          out << (l.pass ? "PASS " : "FAIL ") << l.name << ": " << l.detail << "\n";
          failed += l.pass ? 0 : 1;
        }
        out << lines.size() - static_cast<std::size_t>(failed) << "/" << lines.size() << " fixture cells match\n";
        if (failed) code = kExitFixtureMismatch;
      }
      if (!logs.empty() || !participants_csv.empty()) {
        if (logs.empty() || participants_csv.empty()) throw ValidationError("analyze: --logs and --participants go together");
        AnalysisInputs in{logs, participants_csv, std::nullopt, std::nullopt};
        if (!ueq.empty()) in.ueq = ueq;
        if (!jikaku.empty()) in.jikaku = jikaku;
        const auto report = analyze(in);
        for (const auto& w : report.at("warnings")) err << "warning: " << w.get<std::string>() << "\n";
        write_text(report_out.empty() ? "report.json" : report_out, report.dump(2) + "\n");
        if (text_out == "-") out << render_text(report);
        else if (!text_out.empty()) write_text(text_out, render_text(report));
      } else if (!check) {
        throw ValidationError("analyze: give --logs and --participants, or --check-fixtures");
      }
      return code;
    }
    if (*validate_cmd) {
      std::optional<Content> c;
      if (!content.empty() || (world_file.empty() && catalog_files.empty() && bank_file.empty() && log_file.empty())) {
        c = load_content(content.empty() ? default_content_dir() : std::filesystem::path(content));
        for (int s = 1; s <= 8; ++s) make_session_plan(s, *c, 0);
        out << "ok: content " << c->root.string() << " (" << c->catalog.tasks.size() << " tasks, "
            << c->word_bank.pairs.size() << " word pairs, sessions 1-8 plan cleanly)\n";
      }
      std::optional<WorldModel> world;
      if (!world_file.empty()) {
        world = load_world_file(world_file);
        out << "ok: world " << world_file << " (diameter " << world->diameter() << " min)\n";
      }
      if (!catalog_files.empty()) {
        std::vector<std::filesystem::path> paths(catalog_files.begin(), catalog_files.end());
        const auto catalog = load_catalog_files(paths);
        const WorldModel* against = world ? &*world : c ? c->world.get() : nullptr;
        if (!against) {
          c = load_content(default_content_dir());
          against = c->world.get();
        }
        validate_catalog(catalog, *against, c ? c->clock : ClockConfig{});
        out << "ok: catalog (" << catalog.tasks.size() << " tasks)\n";
      }
      if (!bank_file.empty()) {
        const auto bank = load_word_bank_file(bank_file);
        out << "ok: word bank " << bank_file << " (" << bank.pairs.size() << " pairs)\n";
      }
      if (!log_file.empty()) {
        std::ifstream in(log_file, std::ios::binary);
        if (!in) throw ValidationError(log_file + ": cannot open");
        try {
          const auto result = replay(in);
          out << "ok: log " << log_file << " (" << result.entries.size() << " entries, replay matches)\n";
        } catch (const LogError& e) {
          throw ValidationError(log_file + ": " + e.what() + " (last good seq " + std::to_string(e.last_good_seq()) + ")");
        }
      }
      return kExitOk;
    }
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const LogError& e) {
    err << "log error: " << e.what() << " (last good seq " << e.last_good_seq() << ")\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace pmt
