#ifndef PYTHAG_PREDICTOR_HPP_
#define PYTHAG_PREDICTOR_HPP_

/*
 * Season-level predictions built on the won-loss formula: predicted wins,
 * games off, the win value of extra runs scored or prevented, and the linear
 * predictor 0.5 + B (RS - RA) with B = gamma / (4 R_total) obtained by
 * expanding the formula to first order about RS = RA = R_total.
 *
 * Run-value surfaces work in season totals with beta = 0 by default; fits of
 * per-game data use beta = -0.5. RunEnvironment carries the shift so either
 * convention can be used.
 */

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pythag/matrix.hpp"
#include "pythag/weibull.hpp"

namespace pythag {

struct RunEnvironment {
  double r_total = 700.0;
  double gamma = 1.83;
  int games_per_season = 162;
  double beta = 0.0;

  void validate() const {
    if (!(r_total > 0.0)) {
      throw std::invalid_argument("RunEnvironment: r_total must be positive");
    }
    if (!(gamma > 0.0)) {
      throw std::invalid_argument("RunEnvironment: gamma must be positive");
    }
    if (games_per_season <= 0) {
      throw std::invalid_argument("RunEnvironment: games_per_season must be "
                                  "positive");
    }
  }
};

inline double predicted_wins(double wp, int games) {
  if (!(wp >= 0.0 && wp <= 1.0)) {
    throw std::domain_error("predicted_wins: winning percentage outside "
                            "[0, 1]");
  }
  if (games <= 0) {
    throw std::domain_error("predicted_wins: games must be positive");
  }
  return wp * games;
}

struct GamesOff {
  double signed_diff = 0.0;
  double absolute = 0.0;
};

inline GamesOff games_off(int observed_wins, double predicted) {
  const double d = observed_wins - predicted;
  return {d, std::fabs(d)};
}

inline double marginal_wins_scoring(double x, double y, double s,
                                    const RunEnvironment &env) {
  env.validate();
  return env.games_per_season * (pythag_wp(x + s, y, env.beta, env.gamma) -
                                 pythag_wp(x, y, env.beta, env.gamma));
}

inline double marginal_wins_preventing(double x, double y, double s,
                                       const RunEnvironment &env) {
  env.validate();
  if (!(y - s > env.beta)) {
    throw std::domain_error("marginal_wins_preventing: cannot prevent more "
                            "runs than were allowed");
  }
  return env.games_per_season * (pythag_wp(x, y - s, env.beta, env.gamma) -
                                 pythag_wp(x, y, env.beta, env.gamma));
}

/// Values indexed (y, x): rows follow y_range, columns follow x_range.
struct WinValueGrid {
  std::vector<double> x_range;
  std::vector<double> y_range;
  MatrixD values;
};

/// Evenly spaced grid [lo, hi] with the given step (600..800 by 5 by default).
inline std::vector<double> run_grid(double lo = 600.0, double hi = 800.0,
                                    double step = 5.0) {
  if (!(step > 0.0) || hi < lo) {
    throw std::invalid_argument("run_grid: need step > 0 and hi >= lo");
  }
  std::vector<double> out;
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) {
    out.push_back(lo + static_cast<double>(i) * step);
  }
  return out;
}

template <typename CellFn>
WinValueGrid evaluate_surface(const std::vector<double> &x_range,
                              const std::vector<double> &y_range,
                              CellFn &&cell) {
  WinValueGrid grid{x_range, y_range, MatrixD(y_range.size(), x_range.size())};
  for (std::size_t i = 0; i < y_range.size(); ++i) {
    for (std::size_t j = 0; j < x_range.size(); ++j) {
      grid.values(i, j) = cell(x_range[j], y_range[i]);
    }
  }
  return grid;
}

inline WinValueGrid scoring_surface(const std::vector<double> &x_range,
                                    const std::vector<double> &y_range,
                                    double s, const RunEnvironment &env) {
  return evaluate_surface(x_range, y_range, [&](double x, double y) {
    return marginal_wins_scoring(x, y, s, env);
  });
}

inline WinValueGrid preventing_surface(const std::vector<double> &x_range,
                                       const std::vector<double> &y_range,
                                       double s, const RunEnvironment &env) {
  return evaluate_surface(x_range, y_range, [&](double x, double y) {
    return marginal_wins_preventing(x, y, s, env);
  });
}

/// Wins from scoring s more minus wins from allowing s fewer. Positive where
/// runs allowed are high relative to runs scored.
inline WinValueGrid score_vs_prevent_surface(const std::vector<double> &x_range,
                                             const std::vector<double> &y_range,
                                             double s,
                                             const RunEnvironment &env) {
  return evaluate_surface(x_range, y_range, [&](double x, double y) {
    return marginal_wins_scoring(x, y, s, env) -
           marginal_wins_preventing(x, y, s, env);
  });
}

inline double slope_B(const RunEnvironment &env) {
  env.validate();
  return env.gamma / (4.0 * env.r_total);
}

struct LinearWp {
  double value = 0.5;
  bool clamped = false;
};

/// 0.5 + b (RS - RA) with season-total runs, clamped to [0, 1].
inline LinearWp linear_wp(double rs_total, double ra_total, double b) {
  const double raw = 0.5 + b * (rs_total - ra_total);
  if (raw < 0.0) {
    return {0.0, true};
  }
  if (raw > 1.0) {
    return {1.0, true};
  }
  return {raw, false};
}

/// |pythag - linear| at (RS, RA), the first-order Taylor remainder.
inline double linearization_error(double rs_total, double ra_total,
                                  const RunEnvironment &env) {
  const double exact = pythag_wp(rs_total, ra_total, env.beta, env.gamma);
  return std::fabs(exact - linear_wp(rs_total, ra_total, slope_B(env)).value);
}

struct LinearizationBand {
  double max_error = 0.0;
  double worst_rs = 0.0;
  double worst_ra = 0.0;
};

/// Largest linearization error over RS, RA in [R - band, R + band] with
/// |RS - RA| <= band, scanned on a grid of the given resolution.
inline LinearizationBand linearization_band(const RunEnvironment &env,
                                            double band, int steps = 200) {
  LinearizationBand out;
  const double lo = env.r_total - band;
  const double h = 2.0 * band / steps;
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= steps; ++j) {
      const double rs = lo + i * h;
      const double ra = lo + j * h;
      if (std::fabs(rs - ra) > band + 1e-9 || rs <= env.beta ||
          ra <= env.beta) {
        continue;
      }
      const double e = linearization_error(rs, ra, env);
      if (e > out.max_error) {
        out = {e, rs, ra};
      }
    }
  }
  return out;
}

} // namespace pythag

#endif // PYTHAG_PREDICTOR_HPP_
