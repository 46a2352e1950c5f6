#ifndef PYTHAG_FIT_HPP_
#define PYTHAG_FIT_HPP_

/*
 * Per-team estimation of (alpha_rs, alpha_ra, gamma) with a fixed shift beta
 * from binned per-game runs, by least squares on bin counts or by binned
 * maximum likelihood.
 *
 * Both methods minimise over (log alpha_rs, log alpha_ra, log gamma) with
 * Nelder-Mead, multi-started from method-of-moments scales at a few shapes.
 */

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "pythag/binning.hpp"
#include "pythag/optimize.hpp"
#include "pythag/season.hpp"
#include "pythag/weibull.hpp"

namespace pythag {

enum class FitMethod { LeastSquares, MaxLikelihood };

inline std::string to_string(FitMethod m) {
  return m == FitMethod::LeastSquares ? "ls" : "mle";
}

struct FitConfig {
  BinScheme bins = default_fit_bins();
  double beta = -0.5;
  std::vector<double> gamma_starts{1.5, 1.8, 2.1};
  // Extra starts with shapes drawn uniformly from [1, 3] using this seed.
  int random_starts = 0;
  std::uint64_t seed = 0;
  // Pins the shape and fits only the two scales.
  std::optional<double> fixed_gamma;
  double ftol = 1e-8;
  double xtol = 1e-9;
  int max_evaluations = 10000;
  int max_restarts = 8;
  std::size_t min_reliable_games = 20;
  // Search box, in natural units.
  double alpha_min = 1e-3;
  double alpha_max = 1e3;
  double gamma_min = 0.05;
  double gamma_max = 50.0;
};

struct FitResult {
  double alpha_rs = 0.0;
  double alpha_ra = 0.0;
  double gamma = 0.0;
  double beta = -0.5;
  // Sum of squared count residuals for LeastSquares; the (maximised)
  // log-likelihood for MaxLikelihood.
  double objective = 0.0;
  FitMethod method = FitMethod::LeastSquares;
  int iterations = 0;
  bool converged = false;
  bool at_boundary = false;
  bool unreliable_sample = false;

  WeibullParams rs_params() const { return {alpha_rs, beta, gamma}; }
  WeibullParams ra_params() const { return {alpha_ra, beta, gamma}; }
  MatchupParams matchup() const { return {rs_params(), ra_params()}; }
  double predicted_rs_mean() const { return mean(rs_params()); }
  double predicted_ra_mean() const { return mean(ra_params()); }
  double predicted_wp() const {
    return pythag_wp(predicted_rs_mean(), predicted_ra_mean(), beta, gamma);
  }
};

namespace details {

inline void require_compatible(const BinnedCounts &rs, const BinnedCounts &ra) {
  if (!(rs.scheme == ra.scheme)) {
    throw std::invalid_argument("runs scored and allowed use different bins");
  }
  if (rs.total_games != ra.total_games) {
    throw std::invalid_argument("runs scored and allowed have different game "
                                "counts");
  }
  if (rs.counts.size() != rs.scheme.size() ||
      ra.counts.size() != ra.scheme.size()) {
    throw std::invalid_argument("bin counts do not match the bin scheme");
  }
}

inline double squared_residuals(const BinnedCounts &obs,
                                const WeibullParams &p) {
  const double g = static_cast<double>(obs.total_games);
  double sum = 0.0;
  for (std::size_t k = 0; k < obs.counts.size(); ++k) {
    const double r =
        static_cast<double>(obs.counts[k]) - g * bin_area(p, obs.scheme, k);
    sum += r * r;
  }
  return sum;
}

inline double binned_log_likelihood(const BinnedCounts &obs,
                                    const WeibullParams &p) {
  double sum = 0.0;
  for (std::size_t k = 0; k < obs.counts.size(); ++k) {
    if (obs.counts[k] == 0) {
      continue;
    }
    const double a = bin_area(p, obs.scheme, k);
    if (!(a > 0.0)) {
      return -std::numeric_limits<double>::infinity();
    }
    sum += static_cast<double>(obs.counts[k]) * std::log(a);
  }
  return sum;
}

} // namespace details

/// Sum over bins of (observed - G * area)^2 for both runs scored and allowed,
/// with G the number of games.
inline double least_squares_objective(const BinnedCounts &rs,
                                      const BinnedCounts &ra, double alpha_rs,
                                      double alpha_ra, double gamma,
                                      double beta = -0.5) {
  details::require_compatible(rs, ra);
  return details::squared_residuals(rs, {alpha_rs, beta, gamma}) +
         details::squared_residuals(ra, {alpha_ra, beta, gamma});
}

/// Binned multinomial log-likelihood without the multinomial coefficients.
/// Returns -inf when an occupied bin has zero model probability.
inline double log_likelihood(const BinnedCounts &rs, const BinnedCounts &ra,
                             double alpha_rs, double alpha_ra, double gamma,
                             double beta = -0.5) {
  details::require_compatible(rs, ra);
  const double a = details::binned_log_likelihood(rs, {alpha_rs, beta, gamma});
  if (std::isinf(a)) {
    return a;
  }
  return a + details::binned_log_likelihood(ra, {alpha_ra, beta, gamma});
}

namespace details {

struct FitProblem {
  BinnedCounts rs;
  BinnedCounts ra;
  FitMethod method;
  const FitConfig *config;

  // Value minimised by the optimizer, in natural parameters.
  double loss(double alpha_rs, double alpha_ra, double gamma) const {
    const auto &c = *config;
    if (!(alpha_rs >= c.alpha_min && alpha_rs <= c.alpha_max &&
          alpha_ra >= c.alpha_min && alpha_ra <= c.alpha_max &&
          gamma >= c.gamma_min && gamma <= c.gamma_max)) {
      return std::numeric_limits<double>::infinity();
    }
    if (method == FitMethod::LeastSquares) {
      return least_squares_objective(rs, ra, alpha_rs, alpha_ra, gamma,
                                     c.beta);
    }
    return -log_likelihood(rs, ra, alpha_rs, alpha_ra, gamma, c.beta);
  }

  std::array<double, 3> unpack(const std::vector<double> &x) const {
    const double gamma =
        config->fixed_gamma ? *config->fixed_gamma : std::exp(x[2]);
    return {std::exp(x[0]), std::exp(x[1]), gamma};
  }

  double operator()(const std::vector<double> &x) const {
    const auto p = unpack(x);
    return loss(p[0], p[1], p[2]);
  }
};

// True when no +-h perturbation of a natural parameter improves the loss by
// more than `improvement`.
inline bool is_local_minimum(const FitProblem &problem,
                             const std::array<double, 3> &p, double h,
                             double improvement) {
  const double base = problem.loss(p[0], p[1], p[2]);
  const std::size_t dims = problem.config->fixed_gamma ? 2 : 3;
  for (std::size_t i = 0; i < dims; ++i) {
    for (const double sign : {-1.0, 1.0}) {
      auto q = p;
      q[i] += sign * h;
      if (problem.loss(q[0], q[1], q[2]) < base - improvement) {
        return false;
      }
    }
  }
  return true;
}

inline bool near_boundary(const FitConfig &c, const std::array<double, 3> &p) {
  const double margin = 1.01;
  auto near = [&](double v, double lo, double hi) {
    return v < lo * margin || v > hi / margin;
  };
  return near(p[0], c.alpha_min, c.alpha_max) ||
         near(p[1], c.alpha_min, c.alpha_max) ||
         (!c.fixed_gamma && near(p[2], c.gamma_min, c.gamma_max));
}

inline std::vector<double> shape_starts(const FitConfig &config) {
  if (config.fixed_gamma) {
    return {*config.fixed_gamma};
  }
  std::vector<double> starts = config.gamma_starts;
  if (config.random_starts > 0) {
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> shape(1.0, 3.0);
    for (int i = 0; i < config.random_starts; ++i) {
      starts.push_back(shape(rng));
    }
  }
  if (starts.empty()) {
    starts.push_back(1.8);
  }
  return starts;
}

} // namespace details

/// Method-of-moments scales at the given shape: the Weibull means match the
/// observed per-game means.
inline std::array<double, 2> moment_scales(const TeamSeason &team, double beta,
                                           double gamma) {
  return {alpha_from_mean(team.mean_runs_scored(), beta, gamma),
          alpha_from_mean(team.mean_runs_allowed(), beta, gamma)};
}

inline FitResult fit_team(const TeamSeason &team, FitMethod method,
                          const FitConfig &config = {}) {
  if (team.games.empty()) {
    throw std::invalid_argument("fit: team " + team.team_id + " has no games");
  }
  const auto rs_scores = team.runs_scored();
  const auto ra_scores = team.runs_allowed();
  details::FitProblem problem{bin_counts(rs_scores, config.bins),
                              bin_counts(ra_scores, config.bins), method,
                              &config};

  NelderMeadOptions options{config.ftol, config.xtol, config.max_evaluations};
  const std::size_t dims = config.fixed_gamma ? 2 : 3;

  FitResult best;
  best.method = method;
  best.beta = config.beta;
  double best_loss = std::numeric_limits<double>::infinity();
  bool best_converged = false;
  int evaluations = 0;

  for (const double g0 : details::shape_starts(config)) {
    const auto scales = moment_scales(team, config.beta, g0);
    std::vector<double> x{std::log(scales[0]), std::log(scales[1])};
    if (dims == 3) {
      x.push_back(std::log(g0));
    }
    std::vector<double> step(dims, 0.1);

    NelderMeadResult run = nelder_mead(problem, x, step, options);
    evaluations += run.evaluations;
    // Restart from the best vertex until a fresh simplex cannot improve
    // and the perturbation check agrees.
    for (int r = 0; r < config.max_restarts; ++r) {
      const std::vector<double> restart_step(dims, r == 0 ? 0.05 : 1e-3);
      NelderMeadResult next =
          nelder_mead(problem, run.x, restart_step, options);
      evaluations += next.evaluations;
      const bool improved = next.value < run.value - config.ftol;
      if (next.value <= run.value) {
        run = next;
      }
      if (!improved && run.converged &&
          details::is_local_minimum(problem, problem.unpack(run.x), 1e-6,
                                    1e-9)) {
        break;
      }
    }

    if (run.value < best_loss) {
      best_loss = run.value;
      const auto p = problem.unpack(run.x);
      best.alpha_rs = p[0];
      best.alpha_ra = p[1];
      best.gamma = p[2];
      best_converged = run.converged;
    }
  }

  const std::array<double, 3> p{best.alpha_rs, best.alpha_ra, best.gamma};
  best.iterations = evaluations;
  best.at_boundary = !std::isfinite(best_loss) ||
                     details::near_boundary(config, p);
  best.converged = best_converged && std::isfinite(best_loss) &&
                   !best.at_boundary &&
                   details::is_local_minimum(problem, p, 1e-6, 1e-9);
  best.unreliable_sample = team.n_games() < config.min_reliable_games;
  best.objective =
      method == FitMethod::LeastSquares ? best_loss : -best_loss;
  return best;
}

inline FitResult fit_least_squares(const TeamSeason &team,
                                   const FitConfig &config = {}) {
  return fit_team(team, FitMethod::LeastSquares, config);
}

inline FitResult fit_mle(const TeamSeason &team, const FitConfig &config = {}) {
  return fit_team(team, FitMethod::MaxLikelihood, config);
}

} // namespace pythag

#endif // PYTHAG_FIT_HPP_
