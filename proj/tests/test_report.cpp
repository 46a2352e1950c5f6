#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "pythag/report.hpp"
#include "pythag/simulate.hpp"

namespace pythag {

namespace {

TeamSeason synthetic(const std::string &id, double rs_mean, double ra_mean,
                     std::uint64_t seed) {
  const double g = 1.75;
  SimConfig cfg{make_matchup(alpha_from_mean(rs_mean, -0.5, g),
                             alpha_from_mean(ra_mean, -0.5, g), -0.5, g),
                162, seed, true};
  return synthetic_season(cfg, id);
}

std::vector<TeamSeason> small_league() {
  return {synthetic("AAA", 4.9, 4.0, 1), synthetic("BBB", 4.2, 4.6, 2),
          synthetic("CCC", 4.5, 4.5, 3), synthetic("DDD", 3.9, 4.8, 4),
          synthetic("EEE", 5.1, 4.3, 5)};
}

void expect_same_summary(const LeagueSummary &a, const LeagueSummary &b,
                         double tol) {
  EXPECT_EQ(a.teams, b.teams);
  EXPECT_NEAR(a.mean_gamma, b.mean_gamma, tol);
  EXPECT_NEAR(a.sd_gamma, b.sd_gamma, tol);
  EXPECT_NEAR(a.mean_abs_games_off, b.mean_abs_games_off, tol);
  EXPECT_NEAR(a.sd_abs_games_off, b.sd_abs_games_off, tol);
  EXPECT_NEAR(a.mean_games_off, b.mean_games_off, tol);
  EXPECT_NEAR(a.sd_games_off, b.sd_games_off, tol);
}

std::string to_csv(const SeasonReport &r) {
  std::ostringstream out;
  write_report_csv(out, r);
  return out.str();
}

SeasonReport from_csv(const std::string &text) {
  std::istringstream in(text);
  return parse_report_csv(in);
}

} // namespace

TEST(test_report, single_team_report) {
  const auto team = synthetic("SYN", 4.7, 4.2, 9);
  const auto report = run_season_analysis({team});
  ASSERT_EQ(report.rows.size(), 1u);
  const auto &row = report.rows[0];
  EXPECT_EQ(row.team_id, "SYN");
  EXPECT_EQ(row.obs_wins, team.wins);
  EXPECT_EQ(report.league.teams, 1u);
  EXPECT_EQ(report.league.mean_gamma, row.gamma);
  EXPECT_EQ(report.league.sd_gamma, 0.0);
  EXPECT_EQ(report.league.mean_games_off, row.diff_games);
  EXPECT_EQ(report.league.mean_abs_games_off, std::fabs(row.diff_games));
}

TEST(test_report, row_contents_consistent_with_components) {
  const auto team = synthetic("SYN", 4.7, 4.2, 10);
  const auto a = analyze_team(team);
  ASSERT_TRUE(a.fit.has_value());
  const auto fit = fit_least_squares(team);
  EXPECT_EQ(a.fit->gamma, fit.gamma);
  EXPECT_DOUBLE_EQ(a.pred_pct,
                   pythag_wp(fit.predicted_rs_mean(), fit.predicted_ra_mean(),
                             -0.5, fit.gamma));
  EXPECT_DOUBLE_EQ(a.pred_wins, a.pred_pct * 162);
  EXPECT_DOUBLE_EQ(a.diff_games, team.wins - a.pred_wins);
  ASSERT_TRUE(a.z_rs && a.z_ra && a.gof && a.independence);
  EXPECT_EQ(a.gof->dof, 20);
  EXPECT_EQ(a.independence->dof, 89);
  EXPECT_DOUBLE_EQ(a.z_rs->statistic,
                   z_test_runs(team.runs_scored(), fit.predicted_rs_mean())
                       .statistic);
}

TEST(test_report, obs_pct_is_exact) {
  const auto report = run_season_analysis(small_league());
  const auto league = small_league();
  for (const auto &row : report.rows) {
    const auto it = std::find_if(league.begin(), league.end(),
                                 [&](const TeamSeason &t) {
                                   return t.team_id == row.team_id;
                                 });
    ASSERT_NE(it, league.end());
    EXPECT_NEAR(row.obs_pct,
                static_cast<double>(it->wins) / static_cast<double>(it->n_games()),
                1e-12);
  }
}

TEST(test_report, rows_sorted_by_wins_then_id) {
  const auto report = run_season_analysis(small_league());
  ASSERT_EQ(report.rows.size(), 5u);
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    const auto &a = report.rows[i - 1], &b = report.rows[i];
    EXPECT_TRUE(a.obs_wins > b.obs_wins ||
                (a.obs_wins == b.obs_wins && a.team_id < b.team_id));
  }
  // Ties broken by id.
  auto twin = synthetic("ZZZ", 4.5, 4.5, 3);
  auto copy = twin;
  copy.team_id = "MMM";
  const auto tied = run_season_analysis({twin, copy});
  EXPECT_EQ(tied.rows[0].team_id, "MMM");
  EXPECT_EQ(tied.rows[1].team_id, "ZZZ");
}

TEST(test_report, summary_recomputable_from_rows) {
  const auto report = run_season_analysis(small_league());
  double sum = 0.0, abs_sum = 0.0;
  for (const auto &r : report.rows) {
    sum += r.gamma;
    abs_sum += std::fabs(r.diff_games);
  }
  const double mean = sum / report.rows.size();
  double ss = 0.0;
  for (const auto &r : report.rows) {
    ss += (r.gamma - mean) * (r.gamma - mean);
  }
  EXPECT_NEAR(report.league.mean_gamma, mean, 1e-12);
  EXPECT_NEAR(report.league.sd_gamma, std::sqrt(ss / (report.rows.size() - 1)),
              1e-12);
  EXPECT_NEAR(report.league.mean_abs_games_off, abs_sum / report.rows.size(),
              1e-12);
  expect_same_summary(report.league, summarize(report.rows), 0.0);
}

TEST(test_report, csv_round_trip) {
  auto report = run_season_analysis(small_league());
  // A missing value and an empty flag list must survive too.
  report.rows[0].indep_chisq = std::numeric_limits<double>::quiet_NaN();
  report.rows[1].flags.clear();
  report.rows[2].flags = {"a", "b"};
  report.league = summarize(report.rows);

  const auto text = to_csv(report);
  const auto parsed = from_csv(text);
  const auto expected = quantized(report);
  EXPECT_EQ(parsed.rows, expected.rows);
  expect_same_summary(parsed.league, expected.league, 0.0);
  EXPECT_EQ(to_csv(parsed), text);
  EXPECT_EQ(to_csv(expected), text);
  // Six significant digits bound the difference to the unrounded report.
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    EXPECT_NEAR(parsed.rows[i].pred_wins, report.rows[i].pred_wins,
                5e-6 * std::fabs(report.rows[i].pred_wins));
  }
}

TEST(test_report, csv_header_and_format) {
  const auto report = run_season_analysis({synthetic("SYN", 4.7, 4.2, 9)});
  const auto text = to_csv(report);
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "team_id,obs_wins,pred_wins,obs_pct,pred_pct,diff_games,gamma,"
            "z_rs,z_ra,gof_chisq,indep_chisq,flags");
  EXPECT_THROW(from_csv("team,wins\n"), std::invalid_argument);
  EXPECT_THROW(from_csv(""), std::invalid_argument);
  EXPECT_EQ(details::format_double(0.123456789), "0.123457");
  EXPECT_EQ(details::format_double(97.5123), "97.5123");
  EXPECT_EQ(details::format_double(std::nan("")), "nan");
}

TEST(test_report, json_shape) {
  auto report = run_season_analysis(small_league());
  report.rows[0].z_rs = std::numeric_limits<double>::quiet_NaN();
  const auto j = report_to_json(report);
  ASSERT_TRUE(j.contains("teams"));
  ASSERT_TRUE(j.contains("league"));
  ASSERT_EQ(j["teams"].size(), 5u);
  EXPECT_TRUE(j["teams"][0]["z_rs"].is_null());
  EXPECT_EQ(j["teams"][0]["team_id"], report.rows[0].team_id);
  EXPECT_EQ(j["league"]["teams"], 5);
  EXPECT_NEAR(j["league"]["mean_gamma"].get<double>(), report.league.mean_gamma,
              1e-5);
  std::ostringstream out;
  write_report_json(out, report);
  EXPECT_EQ(nlohmann::json::parse(out.str()), j);
}

TEST(test_report, deterministic_across_thread_counts) {
  AnalysisConfig one;
  one.threads = 1;
  AnalysisConfig four;
  four.threads = 4;
  const auto a = run_season_analysis(small_league(), one);
  const auto b = run_season_analysis(small_league(), four);
  const auto c = run_season_analysis(small_league(), four);
  EXPECT_EQ(a.rows, b.rows);
  EXPECT_EQ(b.rows, c.rows);
  EXPECT_EQ(to_csv(a), to_csv(c));
}

TEST(test_report, failures_become_flagged_rows) {
  std::vector<Game> deg(30, Game{3, 2});
  auto league = small_league();
  league.push_back(make_team_season("DEG", deg));
  league.push_back(TeamSeason{"NIL", {}, 0});
  const auto report = run_season_analysis(league);
  ASSERT_EQ(report.rows.size(), 7u);
  for (const auto &r : report.rows) {
    if (r.team_id == "DEG") {
      EXPECT_TRUE(r.has_flag(flags::FIT_NOT_CONVERGED) ||
                  r.has_flag(flags::FIT_AT_BOUNDARY));
      EXPECT_TRUE(r.has_flag(flags::EMPTY_ROW_OR_COLUMN));
      EXPECT_TRUE(std::isnan(r.indep_chisq));
    }
    if (r.team_id == "NIL") {
      EXPECT_TRUE(r.has_flag(flags::FIT_FAILED));
      EXPECT_TRUE(std::isnan(r.gamma));
    }
  }
  EXPECT_TRUE(has_nonconvergence(report));
  EXPECT_FALSE(has_nonconvergence(run_season_analysis(small_league())));
  // The summary skips missing values.
  EXPECT_TRUE(std::isfinite(report.league.mean_gamma));
}

TEST(test_report, thread_resolution) {
  EXPECT_EQ(details::resolve_threads(3), 3u);
  EXPECT_GE(details::resolve_threads(0), 1u);
}

} // namespace pythag
