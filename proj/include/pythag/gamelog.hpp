#ifndef PYTHAG_GAMELOG_HPP_
#define PYTHAG_GAMELOG_HPP_

/*
 * Game-log CSV ingestion.
 *
 * Format: UTF-8, LF or CRLF line endings, a required header naming the
 * columns date,team_id,opponent_id,runs_scored,runs_allowed (in any order;
 * extra columns are ignored), then one row per team-game. A game between two
 * teams normally appears twice, once from each side.
 */

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "pythag/season.hpp"

namespace pythag {

struct GameLogRecord {
  std::string date;
  std::string team_id;
  std::string opponent_id;
  int runs_scored = 0;
  int runs_allowed = 0;

  bool operator==(const GameLogRecord &) const = default;
};

struct ParseIssue {
  std::size_t line = 0;
  std::string message;
};

struct ParsedGameLog {
  std::vector<GameLogRecord> records;
  std::vector<ParseIssue> errors;
};

class GameLogError : public std::runtime_error {
public:
  GameLogError(const std::string &what, std::vector<ParseIssue> errors = {})
      : std::runtime_error(what), errors_(std::move(errors)) {}
  const std::vector<ParseIssue> &errors() const { return errors_; }

private:
  std::vector<ParseIssue> errors_;
};

/// Fraction of data rows that may be rejected before parsing fails outright.
constexpr double MAX_INVALID_ROW_FRACTION = 0.05;

namespace details {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

inline bool parse_int(std::string_view s, int &out) {
  if (s.empty()) {
    return false;
  }
  const auto *end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

// YYYY-MM-DD with a plausible month and day.
inline bool is_iso_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') {
    return false;
  }
  for (const std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9}) {
    if (s[i] < '0' || s[i] > '9') {
      return false;
    }
  }
  const int month = (s[5] - '0') * 10 + (s[6] - '0');
  const int day = (s[8] - '0') * 10 + (s[9] - '0');
  return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

} // namespace details

inline ParsedGameLog parse_game_log(std::istream &in) {
  static const std::vector<std::string> required = {
      "date", "team_id", "opponent_id", "runs_scored", "runs_allowed"};

  ParsedGameLog out;
  std::string line;
  std::size_t line_no = 0;

  std::map<std::string, std::size_t> column;
  bool have_header = false;
  while (!have_header && std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) {
      line.erase(0, 3);
    }
    if (details::trim(line).empty()) {
      continue;
    }
    const auto fields = details::split_csv(line);
    for (std::size_t i = 0; i < fields.size(); ++i) {
      column.emplace(std::string(fields[i]), i);
    }
    for (const auto &name : required) {
      if (!column.contains(name)) {
        throw GameLogError("game log header is missing column '" + name + "'");
      }
    }
    have_header = true;
  }
  if (!have_header) {
    throw GameLogError("game log is empty: header required");
  }

  std::size_t data_rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (details::trim(line).empty()) {
      continue;
    }
    ++data_rows;
    const auto fields = details::split_csv(line);
    auto field = [&](const std::string &name) -> std::string_view {
      const auto i = column.at(name);
      return i < fields.size() ? fields[i] : std::string_view{};
    };
    auto reject = [&](std::string msg) {
      out.errors.push_back({line_no, std::move(msg)});
    };

    if (fields.size() < column.size()) {
      reject("expected " + std::to_string(column.size()) + " columns, found " +
             std::to_string(fields.size()));
      continue;
    }
    GameLogRecord rec;
    rec.date = std::string(field("date"));
    rec.team_id = std::string(field("team_id"));
    rec.opponent_id = std::string(field("opponent_id"));
    if (!details::is_iso_date(rec.date)) {
      reject("invalid date '" + rec.date + "'");
      continue;
    }
    if (rec.team_id.empty() || rec.opponent_id.empty()) {
      reject("empty team or opponent id");
      continue;
    }
    if (!details::parse_int(field("runs_scored"), rec.runs_scored) ||
        !details::parse_int(field("runs_allowed"), rec.runs_allowed)) {
      reject("runs must be integers");
      continue;
    }
    if (rec.runs_scored < 0 || rec.runs_allowed < 0) {
      reject("runs must be nonnegative");
      continue;
    }
    if (rec.runs_scored == rec.runs_allowed) {
      reject("tie violation: runs scored equal runs allowed (" +
             std::to_string(rec.runs_scored) + ")");
      continue;
    }
    out.records.push_back(std::move(rec));
  }

  if (data_rows > 0 &&
      static_cast<double>(out.errors.size()) >
          MAX_INVALID_ROW_FRACTION * static_cast<double>(data_rows)) {
    throw GameLogError(std::to_string(out.errors.size()) + " of " +
                           std::to_string(data_rows) +
                           " rows are invalid (limit 5%)",
                       out.errors);
  }
  return out;
}

inline ParsedGameLog parse_game_log_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw GameLogError("cannot open game log '" + path + "'");
  }
  return parse_game_log(in);
}

/// One season per team id, sorted by id; games keep file order.
inline std::vector<TeamSeason>
aggregate_seasons(const std::vector<GameLogRecord> &records) {
  std::map<std::string, std::vector<Game>> by_team;
  for (const auto &r : records) {
    by_team[r.team_id].push_back({r.runs_scored, r.runs_allowed});
  }
  std::vector<TeamSeason> out;
  out.reserve(by_team.size());
  for (auto &[id, games] : by_team) {
    out.push_back(make_team_season(id, std::move(games)));
  }
  return out;
}

/*
 * Cross-checks the two rows of each game when both teams are in the log:
 * for every (date, team, opponent) the multiset of (scored, allowed) must
 * mirror the opponent's (allowed, scored). Returns one message per mismatch.
 */
inline std::vector<std::string>
cross_check_pairs(const std::vector<GameLogRecord> &records) {
  using Key = std::tuple<std::string, std::string, std::string>;
  std::map<Key, std::vector<std::pair<int, int>>> sides;
  std::map<std::string, bool> present;
  for (const auto &r : records) {
    sides[{r.date, r.team_id, r.opponent_id}].emplace_back(r.runs_scored,
                                                           r.runs_allowed);
    present[r.team_id] = true;
  }
  std::vector<std::string> issues;
  for (auto &[key, scores] : sides) {
    const auto &[date, team, opp] = key;
    if (!present.contains(opp)) {
      continue;
    }
    if (team > opp) {
      // Compared from the other side unless that side is missing entirely.
      if (!sides.contains({date, opp, team})) {
        issues.push_back(date + " " + team + " vs " + opp + ": no row from " +
                         opp);
      }
      continue;
    }
    std::vector<std::pair<int, int>> mirrored;
    if (const auto it = sides.find({date, opp, team}); it != sides.end()) {
      for (const auto &[s, a] : it->second) {
        mirrored.emplace_back(a, s);
      }
    }
    auto mine = scores;
    std::sort(mine.begin(), mine.end());
    std::sort(mirrored.begin(), mirrored.end());
    if (mine != mirrored) {
      issues.push_back(date + " " + team + " vs " + opp +
                       ": rows from the two teams do not mirror each other");
    }
  }
  return issues;
}

} // namespace pythag

#endif // PYTHAG_GAMELOG_HPP_
