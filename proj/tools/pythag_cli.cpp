// pythag: command-line front end for the Weibull run-scoring model.
//
// Exit codes: 0 success, 1 input error, 2 a team fit or IPF did not converge
// (unless --permissive).

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pythag.hpp"

namespace {

using namespace pythag;
using nlohmann::json;

constexpr int EXIT_INPUT = 1;
constexpr int EXIT_NONCONVERGED = 2;

struct Globals {
  std::string method = "ls";
  double beta = -0.5;
  std::optional<double> gamma;
  std::uint64_t seed = 2012;
  std::string out;
  std::string format = "csv";
  bool permissive = false;
  unsigned threads = 0;

  FitMethod fit_method() const {
    return method == "mle" ? FitMethod::MaxLikelihood : FitMethod::LeastSquares;
  }
  bool json() const { return format == "json"; }
  double shape_or(double fallback) const { return gamma.value_or(fallback); }
};

class InputError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const Globals &g, const std::function<void(std::ostream &)> &write) {
  if (g.out.empty() || g.out == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream file(g.out);
  if (!file) {
    throw InputError("cannot open output file: " + g.out);
  }
  write(file);
  if (!file) {
    throw InputError("write failed: " + g.out);
  }
}

std::string num(double v) { return details::format_double(v); }

json num_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// Single-record output: a header line and one row, or one JSON object.
void emit_record(const Globals &g,
                 const std::vector<std::pair<std::string, json>> &fields) {
  emit(g, [&](std::ostream &os) {
    if (g.json()) {
      json j = json::object();
      for (const auto &[k, v] : fields) {
        j[k] = v;
      }
      os << j.dump(2) << '\n';
      return;
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      os << (i ? "," : "") << fields[i].first;
    }
    os << '\n';
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const auto &v = fields[i].second;
      os << (i ? "," : "");
      if (v.is_null()) {
        os << "nan";
      } else if (v.is_number_float()) {
        os << num(v.get<double>());
      } else if (v.is_string()) {
        os << v.get<std::string>();
      } else {
        os << v.dump();
      }
    }
    os << '\n';
  });
}

std::vector<TeamSeason> load_seasons(const std::string &path) {
  const auto log = parse_game_log_file(path);
  for (const auto &e : log.errors) {
    std::cerr << path << ":" << e.line << ": " << e.message << '\n';
  }
  for (const auto &issue : cross_check_pairs(log.records)) {
    std::cerr << "warning: " << issue << '\n';
  }
  auto seasons = aggregate_seasons(log.records);
  if (seasons.empty()) {
    throw InputError(path + ": no games");
  }
  return seasons;
}

AnalysisConfig analysis_config(const Globals &g) {
  AnalysisConfig cfg;
  cfg.method = g.fit_method();
  cfg.fit.beta = g.beta;
  cfg.fit.fixed_gamma = g.gamma;
  cfg.fit.seed = g.seed;
  cfg.threads = g.threads;
  return cfg;
}

bool any_nonconverged(const std::vector<TeamAnalysis> &teams) {
  for (const auto &t : teams) {
    for (const auto &f : t.flags) {
      if (f == flags::FIT_NOT_CONVERGED || f == flags::IPF_NOT_CONVERGED) {
        return true;
      }
    }
  }
  return false;
}

int finish(const Globals &g, bool nonconverged) {
  if (nonconverged && !g.permissive) {
    std::cerr << "error: numerical non-convergence for at least one team "
                 "(see flags; --permissive to accept)\n";
    return EXIT_NONCONVERGED;
  }
  return 0;
}

int cmd_fit(const Globals &g, const std::string &log) {
  const auto report = run_season_analysis(load_seasons(log), analysis_config(g));
  emit(g, [&](std::ostream &os) {
    if (g.json()) {
      write_report_json(os, report);
    } else {
      write_report_csv(os, report);
    }
  });
  const auto &lg = report.league;
  std::cerr << "teams " << lg.teams << ", mean gamma " << num(lg.mean_gamma)
            << " (sd " << num(lg.sd_gamma) << "), mean |games off| "
            << num(lg.mean_abs_games_off) << ", mean games off "
            << num(lg.mean_games_off) << '\n';
  return finish(g, has_nonconvergence(report));
}

int cmd_tests(const Globals &g, const std::string &log) {
  const auto teams = analyze_league(load_seasons(log), analysis_config(g));
  auto stat = [](const std::optional<ChiSquareResult> &r) {
    return r ? r->statistic : std::nan("");
  };
  auto dof = [](const std::optional<ChiSquareResult> &r) {
    return r ? r->dof : 0;
  };
  auto crit = [](const std::optional<ChiSquareResult> &r) {
    return r ? r->thresholds.at(threshold_names::P99_BONFERRONI) : std::nan("");
  };
  auto z = [](const std::optional<ZTestResult> &r) {
    return r ? r->statistic : std::nan("");
  };
  auto joined = [](const std::vector<std::string> &fs) {
    std::string s;
    for (const auto &f : fs) {
      s += (s.empty() ? "" : ";") + f;
    }
    return s;
  };
  emit(g, [&](std::ostream &os) {
    if (g.json()) {
      json rows = json::array();
      for (const auto &t : teams) {
        rows.push_back({{"team_id", t.team_id},
                        {"obs_rs_mean", num_json(t.obs_rs_mean)},
                        {"obs_ra_mean", num_json(t.obs_ra_mean)},
                        {"z_rs", num_json(z(t.z_rs))},
                        {"z_ra", num_json(z(t.z_ra))},
                        {"gof_chisq", num_json(stat(t.gof))},
                        {"gof_dof", dof(t.gof)},
                        {"gof_crit", num_json(crit(t.gof))},
                        {"indep_chisq", num_json(stat(t.independence))},
                        {"indep_dof", dof(t.independence)},
                        {"indep_crit", num_json(crit(t.independence))},
                        {"excluded_diagonal", t.excluded_diagonal},
                        {"flags", t.flags}});
      }
      os << json{{"teams", rows}}.dump(2) << '\n';
      return;
    }
    os << "team_id,obs_rs_mean,obs_ra_mean,z_rs,z_ra,gof_chisq,gof_dof,"
          "gof_crit,indep_chisq,indep_dof,indep_crit,excluded_diagonal,flags\n";
    for (const auto &t : teams) {
      os << t.team_id << ',' << num(t.obs_rs_mean) << ',' << num(t.obs_ra_mean)
         << ',' << num(z(t.z_rs)) << ',' << num(z(t.z_ra)) << ','
         << num(stat(t.gof)) << ',' << dof(t.gof) << ',' << num(crit(t.gof))
         << ',' << num(stat(t.independence)) << ',' << dof(t.independence)
         << ',' << num(crit(t.independence)) << ',' << t.excluded_diagonal
         << ',' << joined(t.flags) << '\n';
    }
  });
  return finish(g, any_nonconverged(teams));
}

struct PredictArgs {
  double rs = 0.0;
  double ra = 0.0;
  int games = 162;
  std::optional<double> r_total;
};

int cmd_predict(const Globals &g, const PredictArgs &a) {
  if (!(a.rs > 0.0) || !(a.ra > 0.0) || a.games <= 0) {
    throw InputError("predict: --rs, --ra and --games must be positive");
  }
  const double shape = g.shape_or(1.83);
  const double wp = pythag_wp(a.rs / a.games, a.ra / a.games, g.beta, shape);
  const RunEnvironment env{a.r_total.value_or(0.5 * (a.rs + a.ra)), shape,
                           a.games};
  env.validate();
  const double b = slope_B(env);
  const auto lin = linear_wp(a.rs, a.ra, b);
  emit_record(g, {{"rs", a.rs},
                  {"ra", a.ra},
                  {"gamma", shape},
                  {"beta", g.beta},
                  {"pythag_wp", wp},
                  {"pythag_wins", predicted_wins(wp, a.games)},
                  {"slope_b", b},
                  {"linear_wp", lin.value},
                  {"linear_wins", predicted_wins(lin.value, a.games)},
                  {"linear_clamped", lin.clamped}});
  return 0;
}

struct ValueArgs {
  std::string kind = "difference";
  double shift = 10.0;
  double lo = 600.0;
  double hi = 800.0;
  double step = 5.0;
  int games = 162;
};

int cmd_value(const Globals &g, const ValueArgs &a) {
  const RunEnvironment env{0.5 * (a.lo + a.hi), g.shape_or(1.83), a.games};
  env.validate();
  const auto xs = run_grid(a.lo, a.hi, a.step);
  const auto ys = xs;
  const auto grid = a.kind == "scoring"      ? scoring_surface(xs, ys, a.shift, env)
                    : a.kind == "preventing" ? preventing_surface(xs, ys, a.shift, env)
                                             : score_vs_prevent_surface(xs, ys, a.shift, env);
  emit(g, [&](std::ostream &os) {
    if (g.json()) {
      json values = json::array();
      for (std::size_t i = 0; i < ys.size(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < xs.size(); ++j) {
          row.push_back(grid.values(i, j));
        }
        values.push_back(row);
      }
      os << json{{"kind", a.kind}, {"x", xs}, {"y", ys}, {"values", values}}.dump()
         << '\n';
      return;
    }
    os << "y\\x";
    for (const double x : xs) {
      os << ',' << num(x);
    }
    os << '\n';
    for (std::size_t i = 0; i < ys.size(); ++i) {
      os << num(ys[i]);
      for (std::size_t j = 0; j < xs.size(); ++j) {
        os << ',' << num(grid.values(i, j));
      }
      os << '\n';
    }
  });
  return 0;
}

int cmd_linearize(const Globals &g, double r_total, double half_width) {
  const RunEnvironment env{r_total, g.shape_or(1.83)};
  env.validate();
  const auto band = linearization_band(env, half_width);
  emit_record(g, {{"r_total", r_total},
                  {"gamma", env.gamma},
                  {"slope_b", slope_B(env)},
                  {"half_width", half_width},
                  {"max_error", band.max_error},
                  {"worst_rs", band.worst_rs},
                  {"worst_ra", band.worst_ra}});
  return 0;
}

struct MatchupArgs {
  double rs_mean = 4.5;
  double ra_mean = 4.3;
  std::size_t games = 162;
};

MatchupParams matchup_from(const Globals &g, const MatchupArgs &a,
                           double shape) {
  if (!(a.rs_mean > g.beta) || !(a.ra_mean > g.beta)) {
    throw InputError("mean runs must exceed --beta");
  }
  return make_matchup(alpha_from_mean(a.rs_mean, g.beta, shape),
                      alpha_from_mean(a.ra_mean, g.beta, shape), g.beta, shape);
}

int cmd_simulate(const Globals &g, const MatchupArgs &a, const std::string &team,
                 const std::string &opponent) {
  const auto m = matchup_from(g, a, g.shape_or(1.8));
  const auto season = synthetic_season({m, a.games, g.seed, true}, team);
  using namespace std::chrono;
  const sys_days start = year{2012} / April / 5;
  emit(g, [&](std::ostream &os) {
    os << "date,team_id,opponent_id,runs_scored,runs_allowed\n";
    for (std::size_t i = 0; i < season.games.size(); ++i) {
      const year_month_day d{start + days{static_cast<int>(i)}};
      char date[16];
      std::snprintf(date, sizeof date, "%04d-%02u-%02u", int(d.year()),
                    unsigned(d.month()), unsigned(d.day()));
      os << date << ',' << team << ',' << opponent << ','
         << season.games[i].runs_scored << ',' << season.games[i].runs_allowed
         << '\n';
    }
  });
  return 0;
}

int cmd_oracle(const Globals &g, const MatchupArgs &a, std::size_t n,
               bool discretize) {
  const auto m = matchup_from(g, a, g.shape_or(1.8));
  const double exact = win_probability(m);
  const auto mc = empirical_win_prob({m, n, g.seed, discretize});
  emit_record(g, {{"gamma", m.rs.gamma},
                  {"beta", g.beta},
                  {"rs_mean", a.rs_mean},
                  {"ra_mean", a.ra_mean},
                  {"closed_form", exact},
                  {"empirical", mc.probability},
                  {"abs_diff", std::fabs(exact - mc.probability)},
                  {"games", mc.games},
                  {"rejected_ties", mc.rejected_ties},
                  {"seed", g.seed}});
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Weibull run-scoring model: fits, tests, predictions and "
               "simulation"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--method", g.method, "Fit method")
      ->check(CLI::IsMember({"ls", "mle"}));
  app.add_option("--beta", g.beta, "Location shift (default -0.5)");
  app.add_option("--gamma", g.gamma, "Pin the shape exponent");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--out", g.out, "Output file (default stdout)");
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--permissive", g.permissive,
               "Exit 0 even if some team did not converge");
  app.add_option("--threads", g.threads, "Worker threads (0 = auto)");

  std::string log;
  auto *fit = app.add_subcommand("fit", "Per-team fits and predicted wins");
  fit->add_option("log", log, "Game-log CSV")->required();
  auto *tests = app.add_subcommand("tests", "z, goodness-of-fit and "
                                            "independence tests per team");
  tests->add_option("log", log, "Game-log CSV")->required();

  PredictArgs pa;
  auto *predict = app.add_subcommand("predict", "Win fraction from season "
                                                "run totals");
  predict->add_option("--rs", pa.rs, "Runs scored")->required();
  predict->add_option("--ra", pa.ra, "Runs allowed")->required();
  predict->add_option("--games", pa.games, "Games in the season");
  predict->add_option("--r-total", pa.r_total,
                      "League runs per team (default mean of rs and ra)");

  ValueArgs va;
  auto *value = app.add_subcommand("value", "Marginal-run win surfaces");
  value->add_option("--kind", va.kind, "Surface")
      ->check(CLI::IsMember({"scoring", "preventing", "difference"}));
  value->add_option("--shift", va.shift, "Runs added or prevented");
  value->add_option("--lo", va.lo, "Grid start");
  value->add_option("--hi", va.hi, "Grid end");
  value->add_option("--step", va.step, "Grid step");
  value->add_option("--games", va.games, "Games in the season");

  double r_total = 700.567, half_width = 50.0;
  auto *linearize = app.add_subcommand("linearize", "Linear slope and error "
                                                    "band");
  linearize->add_option("--r-total", r_total, "League runs per team");
  linearize->add_option("--half-width", half_width, "Max |RS - RA|");

  MatchupArgs ma;
  std::string team = "SIM", opponent = "OPP";
  auto *simulate = app.add_subcommand("simulate", "Synthetic season as a "
                                                  "game log");
  simulate->add_option("--rs-mean", ma.rs_mean, "Mean runs scored per game");
  simulate->add_option("--ra-mean", ma.ra_mean, "Mean runs allowed per game");
  simulate->add_option("--games", ma.games, "Games to simulate");
  simulate->add_option("--team", team, "Team id");
  simulate->add_option("--opponent", opponent, "Opponent id");

  std::size_t n = 1000000;
  bool discretize = false;
  auto *oracle = app.add_subcommand("oracle", "Monte Carlo vs closed-form "
                                              "win probability");
  oracle->add_option("--rs-mean", ma.rs_mean, "Mean runs scored per game");
  oracle->add_option("--ra-mean", ma.ra_mean, "Mean runs allowed per game");
  oracle->add_option("-n,--games", n, "Simulated games");
  oracle->add_flag("--discretize", discretize, "Round scores, replay ties");

  for (auto *sub : app.get_subcommands({})) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return EXIT_INPUT;
  }

  try {
    if (*fit) return cmd_fit(g, log);
    if (*tests) return cmd_tests(g, log);
    if (*predict) return cmd_predict(g, pa);
    if (*value) return cmd_value(g, va);
    if (*linearize) return cmd_linearize(g, r_total, half_width);
    if (*simulate) return cmd_simulate(g, ma, team, opponent);
    if (*oracle) return cmd_oracle(g, ma, n, discretize);
  } catch (const GameLogError &e) {
    std::cerr << "error: " << e.what() << '\n';
    for (const auto &issue : e.errors()) {
      std::cerr << "  line " << issue.line << ": " << issue.message << '\n';
    }
    return EXIT_INPUT;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return EXIT_INPUT;
  }
  return EXIT_INPUT;
}
