#ifndef PYTHAG_REPORT_HPP_
#define PYTHAG_REPORT_HPP_

/*
 * League-season orchestration: fit every team, predict its record, run the
 * z, goodness-of-fit and independence tests, and collect everything into a
 * report. Team failures become flagged rows; they never abort the season.
 *
 * Report CSV columns, in order:
 *   team_id,obs_wins,pred_wins,obs_pct,pred_pct,diff_games,gamma,z_rs,z_ra,
 *   gof_chisq,indep_chisq,flags
 * Floats are written with 6 significant digits, missing values as "nan", and
 * flags joined with ';'.
 */

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "json.hpp"

#include "pythag/binning.hpp"
#include "pythag/fit.hpp"
#include "pythag/inference.hpp"
#include "pythag/predictor.hpp"
#include "pythag/season.hpp"

namespace pythag {

namespace flags {
inline const std::string FIT_FAILED = "fit_failed";
inline const std::string FIT_NOT_CONVERGED = "fit_not_converged";
inline const std::string FIT_AT_BOUNDARY = "fit_at_boundary";
inline const std::string UNRELIABLE_SAMPLE = "unreliable_sample";
inline const std::string Z_TEST_FAILED = "z_test_failed";
inline const std::string GOF_FAILED = "gof_failed";
// Statistic above the Bonferroni-adjusted 99% critical value.
inline const std::string GOF_REJECTED = "gof_rejected";
inline const std::string LOW_EXPECTED_COUNT = "low_expected_count";
inline const std::string EMPTY_ROW_OR_COLUMN = "empty_row_or_column";
inline const std::string DIAGONAL_EXCLUDED = "diagonal_excluded";
inline const std::string INDEPENDENCE_FAILED = "independence_failed";
inline const std::string INDEPENDENCE_REJECTED = "independence_rejected";
inline const std::string IPF_NOT_CONVERGED = "ipf_not_converged";
} // namespace flags

struct AnalysisConfig {
  FitMethod method = FitMethod::LeastSquares;
  FitConfig fit;
  // 0 = PYTHAG_THREADS if set, otherwise hardware concurrency.
  unsigned threads = 0;
  double ipf_tol = 1e-10;
  int ipf_max_iter = 10000;
};

/// Everything computed for one team.
struct TeamAnalysis {
  std::string team_id;
  std::size_t games = 0;
  int obs_wins = 0;
  double obs_pct = 0.0;
  double obs_rs_mean = 0.0;
  double obs_ra_mean = 0.0;

  std::optional<FitResult> fit;
  double pred_pct = std::numeric_limits<double>::quiet_NaN();
  double pred_wins = std::numeric_limits<double>::quiet_NaN();
  double diff_games = std::numeric_limits<double>::quiet_NaN();

  std::optional<ZTestResult> z_rs;
  std::optional<ZTestResult> z_ra;
  std::optional<ChiSquareResult> gof;
  std::optional<ChiSquareResult> independence;
  std::int64_t excluded_diagonal = 0;

  std::vector<std::string> flags;
  std::vector<std::string> messages;
};

inline TeamAnalysis analyze_team(const TeamSeason &team,
                                 const AnalysisConfig &config = {}) {
  TeamAnalysis a;
  a.team_id = team.team_id;
  a.games = team.n_games();
  a.obs_wins = team.wins;
  a.obs_pct = a.games ? static_cast<double>(team.wins) /
                            static_cast<double>(a.games)
                      : std::numeric_limits<double>::quiet_NaN();
  a.obs_rs_mean = team.mean_runs_scored();
  a.obs_ra_mean = team.mean_runs_allowed();

  try {
    a.fit = fit_team(team, config.method, config.fit);
  } catch (const std::exception &e) {
    a.flags.push_back(flags::FIT_FAILED);
    a.messages.push_back(e.what());
  }

  if (a.fit) {
    const auto &fit = *a.fit;
    if (!fit.converged) {
      a.flags.push_back(flags::FIT_NOT_CONVERGED);
    }
    if (fit.at_boundary) {
      a.flags.push_back(flags::FIT_AT_BOUNDARY);
    }
    if (fit.unreliable_sample) {
      a.flags.push_back(flags::UNRELIABLE_SAMPLE);
    }
    a.pred_pct = fit.predicted_wp();
    a.pred_wins = predicted_wins(a.pred_pct, static_cast<int>(a.games));
    a.diff_games = games_off(a.obs_wins, a.pred_wins).signed_diff;

    try {
      a.z_rs = z_test_runs(team.runs_scored(), fit.predicted_rs_mean());
      a.z_ra = z_test_runs(team.runs_allowed(), fit.predicted_ra_mean());
    } catch (const std::exception &e) {
      a.flags.push_back(flags::Z_TEST_FAILED);
      a.messages.push_back(e.what());
    }

    try {
      const auto rs = bin_counts(team.runs_scored(), config.fit.bins);
      const auto ra = bin_counts(team.runs_allowed(), config.fit.bins);
      a.gof = chisq_gof(rs, ra, fit);
      if (a.gof->low_expected_count) {
        a.flags.push_back(flags::LOW_EXPECTED_COUNT);
      }
      if (a.gof->statistic >
          a.gof->thresholds.at(threshold_names::P99_BONFERRONI)) {
        a.flags.push_back(flags::GOF_REJECTED);
      }
    } catch (const std::exception &e) {
      a.flags.push_back(flags::GOF_FAILED);
      a.messages.push_back(e.what());
    }
  }

  try {
    const auto table = build_contingency(team);
    a.excluded_diagonal = table.excluded_diagonal();
    if (a.excluded_diagonal > 0) {
      a.flags.push_back(flags::DIAGONAL_EXCLUDED);
    }
    // Empty margins are dropped and the degrees of freedom reduced.
    if (!table.empty_rows().empty() || !table.empty_cols().empty()) {
      a.flags.push_back(flags::EMPTY_ROW_OR_COLUMN);
    }
    const auto ipf =
        ipf_expected(table, config.ipf_tol, config.ipf_max_iter, true);
    a.independence = chisq_independence(table, ipf.expected);
    if (a.independence->statistic >
        a.independence->thresholds.at(threshold_names::P99_BONFERRONI)) {
      a.flags.push_back(flags::INDEPENDENCE_REJECTED);
    }
  } catch (const IpfConvergenceError &e) {
    a.flags.push_back(flags::IPF_NOT_CONVERGED);
    a.messages.push_back(e.what());
  } catch (const std::exception &e) {
    a.flags.push_back(flags::INDEPENDENCE_FAILED);
    a.messages.push_back(e.what());
  }
  return a;
}

namespace details {

inline unsigned resolve_threads(unsigned requested) {
  if (requested == 0) {
    if (const char *env = std::getenv("PYTHAG_THREADS")) {
      requested = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
    }
  }
  if (requested == 0) {
    requested = std::max(1u, std::thread::hardware_concurrency());
  }
  return requested;
}

} // namespace details

/// Per-team analyses in parallel, returned sorted by wins (descending) then
/// team id.
inline std::vector<TeamAnalysis>
analyze_league(const std::vector<TeamSeason> &seasons,
               const AnalysisConfig &config = {}) {
  std::vector<TeamAnalysis> out(seasons.size());
  const unsigned workers = std::min<unsigned>(
      details::resolve_threads(config.threads),
      static_cast<unsigned>(std::max<std::size_t>(1, seasons.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < seasons.size(); i = next++) {
      out[i] = analyze_team(seasons[i], config);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back(work);
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const TeamAnalysis &a, const TeamAnalysis &b) {
                     if (a.obs_wins != b.obs_wins) {
                       return a.obs_wins > b.obs_wins;
                     }
                     return a.team_id < b.team_id;
                   });
  return out;
}

struct ReportRow {
  std::string team_id;
  int obs_wins = 0;
  double pred_wins = 0.0;
  double obs_pct = 0.0;
  double pred_pct = 0.0;
  double diff_games = 0.0;
  double gamma = 0.0;
  double z_rs = 0.0;
  double z_ra = 0.0;
  double gof_chisq = 0.0;
  double indep_chisq = 0.0;
  std::vector<std::string> flags;

  bool has_flag(const std::string &f) const {
    return std::find(flags.begin(), flags.end(), f) != flags.end();
  }

  // NaN compares equal to NaN so that missing values round-trip.
  bool operator==(const ReportRow &o) const {
    auto same = [](double a, double b) {
      return (std::isnan(a) && std::isnan(b)) || a == b;
    };
    return team_id == o.team_id && obs_wins == o.obs_wins &&
           same(pred_wins, o.pred_wins) && same(obs_pct, o.obs_pct) &&
           same(pred_pct, o.pred_pct) && same(diff_games, o.diff_games) &&
           same(gamma, o.gamma) && same(z_rs, o.z_rs) && same(z_ra, o.z_ra) &&
           same(gof_chisq, o.gof_chisq) && same(indep_chisq, o.indep_chisq) &&
           flags == o.flags;
  }
};

struct LeagueSummary {
  std::size_t teams = 0;
  double mean_gamma = 0.0;
  double sd_gamma = 0.0;
  double mean_abs_games_off = 0.0;
  double sd_abs_games_off = 0.0;
  double mean_games_off = 0.0;
  double sd_games_off = 0.0;
};

struct SeasonReport {
  std::vector<ReportRow> rows;
  LeagueSummary league;
};

namespace details {

inline double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

// Mean and sample sd over the finite entries.
inline std::pair<double, double> mean_sd(const std::vector<double> &xs) {
  std::vector<double> v;
  for (const double x : xs) {
    if (std::isfinite(x)) {
      v.push_back(x);
    }
  }
  if (v.empty()) {
    return {nan_value(), nan_value()};
  }
  double m = 0.0;
  for (const double x : v) {
    m += x;
  }
  m /= static_cast<double>(v.size());
  if (v.size() < 2) {
    return {m, 0.0};
  }
  double ss = 0.0;
  for (const double x : v) {
    ss += (x - m) * (x - m);
  }
  return {m, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

inline std::string format_double(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

inline double quantize(double v) {
  if (std::isnan(v)) {
    return v;
  }
  return std::strtod(format_double(v).c_str(), nullptr);
}

} // namespace details

inline LeagueSummary summarize(const std::vector<ReportRow> &rows) {
  std::vector<double> gammas, abs_off, off;
  for (const auto &r : rows) {
    gammas.push_back(r.gamma);
    off.push_back(r.diff_games);
    abs_off.push_back(std::fabs(r.diff_games));
  }
  LeagueSummary s;
  s.teams = rows.size();
  std::tie(s.mean_gamma, s.sd_gamma) = details::mean_sd(gammas);
  std::tie(s.mean_abs_games_off, s.sd_abs_games_off) =
      details::mean_sd(abs_off);
  std::tie(s.mean_games_off, s.sd_games_off) = details::mean_sd(off);
  return s;
}

inline ReportRow make_row(const TeamAnalysis &a) {
  const double nan = details::nan_value();
  ReportRow r;
  r.team_id = a.team_id;
  r.obs_wins = a.obs_wins;
  r.pred_wins = a.pred_wins;
  r.obs_pct = a.obs_pct;
  r.pred_pct = a.pred_pct;
  r.diff_games = a.diff_games;
  r.gamma = a.fit ? a.fit->gamma : nan;
  r.z_rs = a.z_rs ? a.z_rs->statistic : nan;
  r.z_ra = a.z_ra ? a.z_ra->statistic : nan;
  r.gof_chisq = a.gof ? a.gof->statistic : nan;
  r.indep_chisq = a.independence ? a.independence->statistic : nan;
  r.flags = a.flags;
  return r;
}

inline SeasonReport make_report(const std::vector<TeamAnalysis> &analyses) {
  SeasonReport report;
  for (const auto &a : analyses) {
    report.rows.push_back(make_row(a));
  }
  report.league = summarize(report.rows);
  return report;
}

inline SeasonReport run_season_analysis(const std::vector<TeamSeason> &seasons,
                                        const AnalysisConfig &config = {}) {
  return make_report(analyze_league(seasons, config));
}

/// True when any team's fit or IPF failed to converge.
inline bool has_nonconvergence(const SeasonReport &report) {
  return std::any_of(report.rows.begin(), report.rows.end(),
                     [](const ReportRow &r) {
                       return r.has_flag(flags::FIT_NOT_CONVERGED) ||
                              r.has_flag(flags::IPF_NOT_CONVERGED) ||
                              r.has_flag(flags::FIT_FAILED);
                     });
}

/// The report as it reads back from CSV: every float rounded to 6
/// significant digits and the summary recomputed from the rounded rows.
inline SeasonReport quantized(const SeasonReport &report) {
  SeasonReport out = report;
  for (auto &r : out.rows) {
    for (double *v : {&r.pred_wins, &r.obs_pct, &r.pred_pct, &r.diff_games,
                      &r.gamma, &r.z_rs, &r.z_ra, &r.gof_chisq,
                      &r.indep_chisq}) {
      *v = details::quantize(*v);
    }
  }
  out.league = summarize(out.rows);
  return out;
}

inline const std::vector<std::string> &report_columns() {
  static const std::vector<std::string> cols = {
      "team_id",  "obs_wins", "pred_wins", "obs_pct",   "pred_pct",
      "diff_games", "gamma",  "z_rs",      "z_ra",      "gof_chisq",
      "indep_chisq", "flags"};
  return cols;
}

inline void write_report_csv(std::ostream &out, const SeasonReport &report) {
  const auto &cols = report_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out << (i ? "," : "") << cols[i];
  }
  out << '\n';
  using details::format_double;
  for (const auto &r : report.rows) {
    std::string joined;
    for (std::size_t i = 0; i < r.flags.size(); ++i) {
      joined += (i ? ";" : "") + r.flags[i];
    }
    out << r.team_id << ',' << r.obs_wins << ',' << format_double(r.pred_wins)
        << ',' << format_double(r.obs_pct) << ','
        << format_double(r.pred_pct) << ',' << format_double(r.diff_games)
        << ',' << format_double(r.gamma) << ',' << format_double(r.z_rs)
        << ',' << format_double(r.z_ra) << ',' << format_double(r.gof_chisq)
        << ',' << format_double(r.indep_chisq) << ',' << joined << '\n';
  }
}

inline SeasonReport parse_report_csv(std::istream &in) {
  SeasonReport report;
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("report CSV is empty");
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  {
    std::string expected;
    for (const auto &c : report_columns()) {
      expected += (expected.empty() ? "" : ",") + c;
    }
    if (line != expected) {
      throw std::invalid_argument("report CSV header mismatch");
    }
  }
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) {
      fields.push_back(f);
    }
    if (line.back() == ',') {
      fields.emplace_back();
    }
    if (fields.size() != report_columns().size()) {
      throw std::invalid_argument("report CSV row has wrong column count: " +
                                  line);
    }
    auto num = [](const std::string &s) { return std::strtod(s.c_str(), nullptr); };
    ReportRow r;
    r.team_id = fields[0];
    r.obs_wins = std::stoi(fields[1]);
    r.pred_wins = num(fields[2]);
    r.obs_pct = num(fields[3]);
    r.pred_pct = num(fields[4]);
    r.diff_games = num(fields[5]);
    r.gamma = num(fields[6]);
    r.z_rs = num(fields[7]);
    r.z_ra = num(fields[8]);
    r.gof_chisq = num(fields[9]);
    r.indep_chisq = num(fields[10]);
    std::stringstream fs(fields[11]);
    while (std::getline(fs, f, ';')) {
      if (!f.empty()) {
        r.flags.push_back(f);
      }
    }
    report.rows.push_back(std::move(r));
  }
  report.league = summarize(report.rows);
  return report;
}

inline nlohmann::json report_to_json(const SeasonReport &report) {
  auto num = [](double v) -> nlohmann::json {
    if (!std::isfinite(v)) {
      return nullptr;
    }
    return details::quantize(v);
  };
  nlohmann::json teams = nlohmann::json::array();
  for (const auto &r : report.rows) {
    teams.push_back({{"team_id", r.team_id},
                     {"obs_wins", r.obs_wins},
                     {"pred_wins", num(r.pred_wins)},
                     {"obs_pct", num(r.obs_pct)},
                     {"pred_pct", num(r.pred_pct)},
                     {"diff_games", num(r.diff_games)},
                     {"gamma", num(r.gamma)},
                     {"z_rs", num(r.z_rs)},
                     {"z_ra", num(r.z_ra)},
                     {"gof_chisq", num(r.gof_chisq)},
                     {"indep_chisq", num(r.indep_chisq)},
                     {"flags", r.flags}});
  }
  const auto &s = report.league;
  return {{"teams", teams},
          {"league",
           {{"teams", s.teams},
            {"mean_gamma", num(s.mean_gamma)},
            {"sd_gamma", num(s.sd_gamma)},
            {"mean_abs_games_off", num(s.mean_abs_games_off)},
            {"sd_abs_games_off", num(s.sd_abs_games_off)},
            {"mean_games_off", num(s.mean_games_off)},
            {"sd_games_off", num(s.sd_games_off)}}}};
}

inline void write_report_json(std::ostream &out, const SeasonReport &report) {
  out << report_to_json(report).dump(2) << '\n';
}

} // namespace pythag

#endif // PYTHAG_REPORT_HPP_
