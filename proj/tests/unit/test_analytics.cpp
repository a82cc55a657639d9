#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numbers>

#include "pmt/analytics.hpp"
#include "pmt/error.hpp"
#include "pmt/rng.hpp"
#include "support.hpp"

using namespace pmt;

namespace {

double naive_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i], sy += y[i];
    sxx += x[i] * x[i], syy += y[i] * y[i], sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

// Two-sided p from Simpson integration of the Student t density.
double simpson_p(double r, int n) {
  const double nu = n - 2;
  const double t = std::abs(r) * std::sqrt(nu / (1 - r * r));
  const double c = std::exp(std::lgamma((nu + 1) / 2) - std::lgamma(nu / 2)) / std::sqrt(nu * std::numbers::pi);
  auto f = [&](double u) { return c * std::pow(1 + u * u / nu, -(nu + 1) / 2); };
  const int steps = 20000;
  const double h = t / steps;
  double s = f(0) + f(t);
  for (int i = 1; i < steps; ++i) s += f(i * h) * (i % 2 ? 4 : 2);
  return 1.0 - 2.0 * s * h / 3.0;
}

std::vector<double> random_vector(Rng& rng, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(uniform01(rng) * 10 - 5);
  return v;
}

std::filesystem::path write_file(const std::filesystem::path& dir, const std::string& name, const std::string& text) {
  const auto path = dir / name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST(Analytics, PearsonWorkedExample) {
  EXPECT_NEAR(pearson(std::vector<double>{1, 2, 3, 4}, std::vector<double>{2, 4, 6, 9}), 0.994377, 5e-7);
}

TEST(Analytics, PearsonMatchesNaiveSums) {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + static_cast<int>(uniform_index(rng, 30));
    const auto x = random_vector(rng, n), y = random_vector(rng, n);
    ASSERT_NEAR(pearson(x, y), naive_pearson(x, y), 1e-10);
  }
}

TEST(Analytics, PearsonInvariances) {
  Rng rng(2);
  const auto x = random_vector(rng, 12), y = random_vector(rng, 12);
  const double r = pearson(x, y);
  std::vector<double> ax, ny;
  for (double v : x) ax.push_back(3.5 * v - 17);
  for (double v : y) ny.push_back(-v);
  EXPECT_NEAR(pearson(ax, y), r, 1e-12);
  EXPECT_NEAR(pearson(y, x), r, 1e-12);
  EXPECT_NEAR(pearson(x, ny), -r, 1e-12);
  EXPECT_NEAR(pearson(x, x), 1.0, 1e-12);
  Eigen::Vector4i xi(1, 2, 3, 4);
  Eigen::Vector4d yd(2, 4, 6, 9);
  EXPECT_NEAR(pearson(xi, yd), 0.994377, 5e-7);
}

TEST(Analytics, PearsonUndefined) {
  EXPECT_THROW(pearson(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}), UndefinedCorrelation);
  EXPECT_THROW(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2}), UndefinedCorrelation);
  EXPECT_THROW(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST(Analytics, FisherIntervalOracle) {
  const double z975 = 1.959963984540054;
  for (double r : {-0.9, -0.3, 0.0, 0.5, 0.91})
    for (int n : {4, 10, 50}) {
      const auto ci = fisher_ci(r, n);
      EXPECT_NEAR(ci.low, std::tanh(std::atanh(r) - z975 / std::sqrt(n - 3.0)), 1e-9);
      EXPECT_NEAR(ci.high, std::tanh(std::atanh(r) + z975 / std::sqrt(n - 3.0)), 1e-9);
      EXPECT_LT(ci.low, r);
      EXPECT_GT(ci.high, r);
    }
  double width = 2;
  for (int n = 4; n < 200; n += 5) {
    const auto ci = fisher_ci(0.6, n);
    EXPECT_LT(ci.high - ci.low, width);
    width = ci.high - ci.low;
  }
  const auto one = fisher_ci(1.0, 10);
  EXPECT_TRUE(one.degenerate);
  EXPECT_EQ(one.low, 1.0);
  EXPECT_THROW(fisher_ci(0.5, 3), std::invalid_argument);
}

TEST(Analytics, PValueMatchesIntegratedDensity) {
  for (double r : {0.05, 0.3, 0.6, 0.767, 0.829, 0.91, 0.95})
    for (int n : {5, 10, 25}) EXPECT_NEAR(p_value(r, n), simpson_p(r, n), 1e-8) << r << " " << n;
  EXPECT_DOUBLE_EQ(p_value(0.0, 10), 1.0);
  EXPECT_EQ(p_value(1.0, 10), 0.0);
  EXPECT_DOUBLE_EQ(p_value(-0.4, 10), p_value(0.4, 10));
}

TEST(Analytics, Formatting) {
  EXPECT_EQ(format_p(0.0002), "< 0.001");
  EXPECT_EQ(format_p(0.0031), "0.003");
  EXPECT_EQ(format3(0.2857), "0.286");
  EXPECT_DOUBLE_EQ(round3(0.6665), 0.667);
}

TEST(Analytics, FitLine) {
  const auto fit = fit_line({1, 2, 3, 4}, {3, 5, 7, 9});
  EXPECT_NEAR(fit.slope, 2.0, 1e-12);
  EXPECT_NEAR(fit.intercept, 1.0, 1e-12);
  EXPECT_THROW(fit_line({2, 2, 2}, {1, 2, 3}), UndefinedCorrelation);
}

TEST(Analytics, NormalizationOracleAndInvariances) {
  Rng rng(4);
  std::vector<DurationCell> cells;
  for (const char* task : {"ER1", "ER2", "ER3"})
    for (int p = 0; p < 6; ++p)
      cells.push_back({task, "P" + std::to_string(p), static_cast<VirtualSeconds>(uniform_index(rng, 900))});
  const auto norm = normalize_durations(cells);
  ASSERT_EQ(norm.size(), cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    VirtualSeconds lo = 1 << 30, hi = -1;
    for (const auto& c : cells)
      if (c.task_id == cells[i].task_id) lo = std::min(lo, c.seconds), hi = std::max(hi, c.seconds);
    const double want = hi == lo ? 0.0 : double(cells[i].seconds - lo) / double(hi - lo);
    EXPECT_NEAR(norm[i].normalized, want, 1e-12);
    EXPECT_EQ(norm[i].participant_id, cells[i].participant_id);
  }
  auto shifted = cells;
  for (auto& c : shifted) c.seconds = c.seconds * 3 + 41;
  const auto again = normalize_durations(shifted);
  for (std::size_t i = 0; i < cells.size(); ++i) EXPECT_NEAR(again[i].normalized, norm[i].normalized, 1e-12);

  EXPECT_EQ(normalize_durations({{"ER4", "A", 36}})[0].normalized, 0.0);
  const auto flat = normalize_durations({{"ER4", "A", 36}, {"ER4", "B", 36}});
  EXPECT_EQ(flat[0].normalized, 0.0);
  EXPECT_EQ(flat[1].normalized, 0.0);
  EXPECT_THROW(normalize_durations({{"ER4", "A", -1}}), std::invalid_argument);
}

TEST(Analytics, QuestionnaireValidation) {
  EXPECT_THROW(validate({Instrument::UeqS, "p", std::vector<int>(7, 0)}), ValidationError);
  EXPECT_THROW(validate({Instrument::UeqS, "p", {0, 0, 0, 0, 0, 0, 0, 4}}), ValidationError);
  EXPECT_THROW(validate({Instrument::UeqS, "p", {0, 0, 0, 0, 0, 0, 0, -4}}), ValidationError);
  EXPECT_THROW(validate({Instrument::JikakuSho, "p", std::vector<int>(24, 1)}), ValidationError);
  EXPECT_THROW(validate({Instrument::JikakuSho, "p", std::vector<int>(25, 0)}), ValidationError);
  EXPECT_THROW(validate({Instrument::JikakuSho, "p", std::vector<int>(25, 6)}), ValidationError);
  EXPECT_NO_THROW(validate({Instrument::UeqS, "p", {-3, 3, 0, 0, 0, 0, 0, 0}}));
  EXPECT_NO_THROW(validate({Instrument::JikakuSho, "p", std::vector<int>(25, 5)}));
}

TEST(Analytics, QuestionnaireScoring) {
  const auto ueq = score_ueq({{Instrument::UeqS, "a", std::vector<int>(8, 0)}, {Instrument::UeqS, "b", std::vector<int>(8, 0)}});
  EXPECT_EQ(ueq.respondents, 2);
  EXPECT_EQ(ueq.pragmatic, 0.0);
  EXPECT_EQ(ueq.hedonic, 0.0);
  EXPECT_TRUE(ueq.item_means.isZero());

  const auto jk = score_jikaku({{Instrument::JikakuSho, "a", std::vector<int>(25, 1)}});
  ASSERT_EQ(jk.category_means.size(), 5);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(jk.category_means[i], 1.0);

  std::vector<int> ramp(25);
  for (int i = 0; i < 25; ++i) ramp[i] = 1 + i / 5;
  const auto cat = score_jikaku({{Instrument::JikakuSho, "a", ramp}});
  for (int i = 0; i < 5; ++i) EXPECT_EQ(cat.category_means[i], 1.0 + i);

  const auto split = score_ueq({{Instrument::UeqS, "a", {1, 1, 1, 1, -2, -2, -2, -2}}, {Instrument::UeqS, "b", {3, 3, 3, 3, 0, 0, 0, 0}}});
  EXPECT_DOUBLE_EQ(split.pragmatic, 2.0);
  EXPECT_DOUBLE_EQ(split.hedonic, -1.0);
  EXPECT_THROW(score_ueq({}), ValidationError);
}

TEST(Analytics, AchievementTableFlagsMissingSessions) {
  std::vector<SessionRecord> records;
  for (int s : {5, 6, 8}) {
    SessionRecord r;
    r.participant = "A";
    r.session_number = s;
    r.vrt_level = s - 4;
    r.scored = true;
    r.rates.total = {s - 4, s + 2};
    r.rates.regular = {1, 5};
    records.push_back(r);
  }
  SessionRecord practice;
  practice.participant = "A";
  practice.session_number = 2;
  records.push_back(practice);
  const auto table = achievement_table(records);
  ASSERT_EQ(table.size(), 1u);
  EXPECT_EQ(table[0].missing_sessions, std::vector<int>{7});
  EXPECT_EQ(table[0].overall.total.achieved, 1 + 2 + 4);
  EXPECT_EQ(table[0].overall.total.total, 7 + 8 + 10);
  records.push_back(records[0]);
  EXPECT_THROW(achievement_table(records), ValidationError);
}

TEST(Analytics, CsvLoaders) {
  const auto dir = testkit::scratch_dir("analytics-csv");
  const auto people = write_file(dir, "p.csv", "id,group,mist_total,imagery_score\nA,elderly,30,0.8\nB,young,44,\n");
  const auto loaded = load_participants(people);
  ASSERT_EQ(loaded.size(), 2u);
  EXPECT_EQ(loaded[0].group, Group::Elderly);
  EXPECT_EQ(loaded[0].imagery_score, 0.8);
  EXPECT_FALSE(loaded[1].imagery_score);

  const auto bad = write_file(dir, "bad.csv", "id,group\nA,elderly\nB,teen\n");
  try {
    load_participants(bad);
    FAIL();
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("bad.csv:3"), std::string::npos) << what;
  }

  const auto ueq = write_file(dir, "u.csv", "participant,item1,item2,item3,item4,item5,item6,item7,item8\nA,1,2,3,0,0,-1,-2,-3\n");
  const auto rs = load_questionnaire(ueq, Instrument::UeqS);
  ASSERT_EQ(rs.size(), 1u);
  EXPECT_EQ(rs[0].items[7], -3);
  const auto short_row = write_file(dir, "s.csv", "participant,item1,item2\nA,1,2\n");
  EXPECT_THROW(load_questionnaire(short_row, Instrument::UeqS), ValidationError);
}

TEST(Analytics, FixtureTablesReproduce) {
  const auto lines = check_fixtures(testkit::fixture_dir());
  EXPECT_EQ(lines.size(), 10u + 40u + 10u + 52u);
  for (const auto& l : lines) EXPECT_TRUE(l.pass) << l.name << ": " << l.detail;
}
