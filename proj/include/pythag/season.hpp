#ifndef PYTHAG_SEASON_HPP_
#define PYTHAG_SEASON_HPP_

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace pythag {

struct Game {
  int runs_scored = 0;
  int runs_allowed = 0;

  bool won() const { return runs_scored > runs_allowed; }
  bool operator==(const Game &) const = default;
};

/// One team's season as per-game (scored, allowed) pairs.
struct TeamSeason {
  std::string team_id;
  std::vector<Game> games;
  int wins = 0;

  std::size_t n_games() const { return games.size(); }

  std::vector<int> runs_scored() const {
    std::vector<int> out;
    out.reserve(games.size());
    for (const auto &g : games) {
      out.push_back(g.runs_scored);
    }
    return out;
  }

  std::vector<int> runs_allowed() const {
    std::vector<int> out;
    out.reserve(games.size());
    for (const auto &g : games) {
      out.push_back(g.runs_allowed);
    }
    return out;
  }

  double mean_runs_scored() const {
    if (games.empty()) {
      return 0.0;
    }
    double total = 0.0;
    for (const auto &g : games) {
      total += g.runs_scored;
    }
    return total / static_cast<double>(games.size());
  }

  double mean_runs_allowed() const {
    if (games.empty()) {
      return 0.0;
    }
    double total = 0.0;
    for (const auto &g : games) {
      total += g.runs_allowed;
    }
    return total / static_cast<double>(games.size());
  }

  void validate() const {
    int counted = 0;
    for (const auto &g : games) {
      if (g.runs_scored < 0 || g.runs_allowed < 0) {
        throw std::invalid_argument("TeamSeason " + team_id +
                                    ": negative run total");
      }
      if (g.runs_scored == g.runs_allowed) {
        throw std::invalid_argument("TeamSeason " + team_id +
                                    ": tied game " +
                                    std::to_string(g.runs_scored) + "-" +
                                    std::to_string(g.runs_allowed));
      }
      counted += g.won() ? 1 : 0;
    }
    if (counted != wins) {
      throw std::invalid_argument("TeamSeason " + team_id +
                                  ": wins field disagrees with game results");
    }
  }
};

/// Builds a validated season; wins are derived from the games.
inline TeamSeason make_team_season(std::string team_id,
                                   std::vector<Game> games) {
  TeamSeason season{std::move(team_id), std::move(games), 0};
  season.wins = static_cast<int>(
      std::count_if(season.games.begin(), season.games.end(),
                    [](const Game &g) { return g.won(); }));
  season.validate();
  return season;
}

inline double sample_sd(const std::vector<int> &values) {
  const auto n = values.size();
  if (n < 2) {
    return 0.0;
  }
  const double m =
      std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (const int v : values) {
    ss += (v - m) * (v - m);
  }
  return std::sqrt(ss / static_cast<double>(n - 1));
}

} // namespace pythag

#endif // PYTHAG_SEASON_HPP_
