#ifndef PYTHAG_SIMULATE_HPP_
#define PYTHAG_SIMULATE_HPP_

/*
 * Seeded Monte Carlo sampling of Weibull matchups.
 *
 * The random stream is fully specified so it can be reproduced bit for bit in
 * other languages:
 *
 *   - state: xoshiro256** (Blackman & Vigna), four 64-bit words seeded by
 *     four successive outputs of splitmix64 starting from the user seed,
 *   - uniform: U = (next() >> 11) * 2^-53, so U lies in [0, 1),
 *   - Weibull draw: X = beta + alpha * (-ln(1 - U))^(1 / gamma).
 *
 * A game draws X (runs scored) first, then Y (runs allowed).
 *
 * Streams are independent per seed; concurrent simulations must use distinct
 * seeds.
 */

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pythag/season.hpp"
#include "pythag/weibull.hpp"

namespace pythag {

inline std::uint64_t splitmix64(std::uint64_t &state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Xoshiro256 {
public:
  explicit Xoshiro256(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto &word : s_) {
      word = splitmix64(sm);
    }
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  double uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
};

inline double draw_weibull(const WeibullParams &p, Xoshiro256 &rng) {
  const double u = rng.uniform();
  return p.beta + p.alpha * std::pow(-std::log(1.0 - u), 1.0 / p.gamma);
}

inline std::vector<double> sample_weibull(const WeibullParams &p,
                                          std::size_t n, std::uint64_t seed) {
  p.validate();
  Xoshiro256 rng(seed);
  std::vector<double> out(n);
  for (auto &x : out) {
    x = draw_weibull(p, rng);
  }
  return out;
}

/// Nearest integer with ties to even, clamped at zero.
inline int discretize_runs(double x) {
  double r = std::floor(x);
  const double frac = x - r;
  if (frac > 0.5 || (frac == 0.5 && std::fmod(r, 2.0) != 0.0)) {
    r += 1.0;
  }
  return r < 0.0 ? 0 : static_cast<int>(r);
}

struct SimConfig {
  MatchupParams matchup;
  std::size_t n_games = 1;
  std::uint64_t seed = 0;
  bool discretize = false;

  void validate() const {
    matchup.validate();
    if (n_games < 1) {
      throw std::invalid_argument("SimConfig: n_games must be at least 1");
    }
  }
};

struct EmpiricalWinResult {
  double probability = 0.0;
  std::size_t games = 0;
  std::size_t wins = 0;
  // Discretized games that came out tied and were replayed.
  std::size_t rejected_ties = 0;
};

inline EmpiricalWinResult empirical_win_prob(const SimConfig &cfg) {
  cfg.validate();
  Xoshiro256 rng(cfg.seed);
  EmpiricalWinResult out;
  out.games = cfg.n_games;
  for (std::size_t g = 0; g < cfg.n_games; ++g) {
    if (!cfg.discretize) {
      const double x = draw_weibull(cfg.matchup.rs, rng);
      const double y = draw_weibull(cfg.matchup.ra, rng);
      out.wins += x > y ? 1 : 0;
      continue;
    }
    while (true) {
      const int x = discretize_runs(draw_weibull(cfg.matchup.rs, rng));
      const int y = discretize_runs(draw_weibull(cfg.matchup.ra, rng));
      if (x == y) {
        ++out.rejected_ties;
        continue;
      }
      out.wins += x > y ? 1 : 0;
      break;
    }
  }
  out.probability =
      static_cast<double>(out.wins) / static_cast<double>(out.games);
  return out;
}

/// Integer-scored season with ties replayed; requires cfg.discretize.
inline TeamSeason synthetic_season(const SimConfig &cfg,
                                   std::string team_id = "SIM") {
  cfg.validate();
  if (!cfg.discretize) {
    throw std::invalid_argument("synthetic_season: requires discretize mode");
  }
  Xoshiro256 rng(cfg.seed);
  std::vector<Game> games;
  games.reserve(cfg.n_games);
  while (games.size() < cfg.n_games) {
    const int x = discretize_runs(draw_weibull(cfg.matchup.rs, rng));
    const int y = discretize_runs(draw_weibull(cfg.matchup.ra, rng));
    if (x != y) {
      games.push_back({x, y});
    }
  }
  return make_team_season(std::move(team_id), std::move(games));
}

} // namespace pythag

#endif // PYTHAG_SIMULATE_HPP_
