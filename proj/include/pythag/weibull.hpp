#ifndef PYTHAG_WEIBULL_HPP_
#define PYTHAG_WEIBULL_HPP_

/*
 * Three-parameter Weibull distribution (scale alpha, shift beta, shape gamma)
 * and the closed-form Pythagorean win probability it implies.
 *
 *   f(x) = (gamma / alpha) ((x - beta) / alpha)^(gamma - 1)
 *          exp(-((x - beta) / alpha)^gamma),   x >= beta
 *
 * If runs scored X ~ W(alpha_rs, beta, gamma) and runs allowed
 * Y ~ W(alpha_ra, beta, gamma) are independent then
 *
 *   P(X > Y) = alpha_rs^gamma / (alpha_rs^gamma + alpha_ra^gamma)
 *            = (RS - beta)^gamma / ((RS - beta)^gamma + (RA - beta)^gamma)
 *
 * where RS and RA are the means. The formula is homogeneous of degree zero in
 * (RS - beta, RA - beta), so per-game averages and season totals give the
 * same answer when beta = 0.
 */

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pythag/special.hpp"

namespace pythag {

struct WeibullParams {
  double alpha = 1.0;
  double beta = 0.0;
  double gamma = 1.0;

  void validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
      throw std::invalid_argument("WeibullParams: alpha must be positive");
    }
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
      throw std::invalid_argument("WeibullParams: gamma must be positive");
    }
    if (!std::isfinite(beta)) {
      throw std::invalid_argument("WeibullParams: beta must be finite");
    }
  }

  bool operator==(const WeibullParams &) const = default;
};

inline WeibullParams make_weibull(double alpha, double beta, double gamma) {
  WeibullParams p{alpha, beta, gamma};
  p.validate();
  return p;
}

/// Runs-scored and runs-allowed distributions sharing shift and shape.
struct MatchupParams {
  WeibullParams rs;
  WeibullParams ra;

  void validate() const {
    rs.validate();
    ra.validate();
    if (rs.beta != ra.beta) {
      throw std::invalid_argument("MatchupParams: rs and ra must share beta");
    }
    if (rs.gamma != ra.gamma) {
      throw std::invalid_argument("MatchupParams: rs and ra must share gamma");
    }
  }
};

inline MatchupParams make_matchup(double alpha_rs, double alpha_ra,
                                  double beta, double gamma) {
  MatchupParams m{{alpha_rs, beta, gamma}, {alpha_ra, beta, gamma}};
  m.validate();
  return m;
}

inline double pdf(const WeibullParams &p, double x) {
  if (x < p.beta) {
    return 0.0;
  }
  const double z = (x - p.beta) / p.alpha;
  return (p.gamma / p.alpha) * std::pow(z, p.gamma - 1.0) *
         std::exp(-std::pow(z, p.gamma));
}

/// P(X > x); 1 below the support.
inline double survival(const WeibullParams &p, double x) {
  if (x <= p.beta) {
    return 1.0;
  }
  if (std::isinf(x)) {
    return 0.0;
  }
  return std::exp(-std::pow((x - p.beta) / p.alpha, p.gamma));
}

inline double cdf(const WeibullParams &p, double x) {
  if (x <= p.beta) {
    return 0.0;
  }
  if (std::isinf(x)) {
    return 1.0;
  }
  return -std::expm1(-std::pow((x - p.beta) / p.alpha, p.gamma));
}

inline double mean(const WeibullParams &p) {
  return p.alpha * gamma_fn(1.0 + 1.0 / p.gamma) + p.beta;
}

inline double variance(const WeibullParams &p) {
  const double g1 = gamma_fn(1.0 + 1.0 / p.gamma);
  const double g2 = gamma_fn(1.0 + 2.0 / p.gamma);
  // Gamma(1 + 2/g) >= Gamma(1 + 1/g)^2 by log-convexity; clamp rounding.
  return std::max(0.0, p.alpha * p.alpha * (g2 - g1 * g1));
}

/// Scale that gives W(alpha, beta, gamma) the requested mean.
inline double alpha_from_mean(double target_mean, double beta, double gamma) {
  if (!(target_mean > beta)) {
    throw std::domain_error("alpha_from_mean: mean " +
                            std::to_string(target_mean) +
                            " must exceed beta " + std::to_string(beta));
  }
  if (!(gamma > 0.0)) {
    throw std::domain_error("alpha_from_mean: gamma must be positive");
  }
  return (target_mean - beta) / gamma_fn(1.0 + 1.0 / gamma);
}

namespace details {

// a^g / (a^g + b^g) for a, b > 0. The larger argument always goes in the
// denominator of the ratio so the power never overflows, and the smaller
// probability is formed as an exact complement so that swapping the
// arguments sums to exactly 1.
inline double power_share(double a, double b, double g) {
  if (a >= b) {
    return 1.0 / (1.0 + std::pow(b / a, g));
  }
  return 1.0 - 1.0 / (1.0 + std::pow(a / b, g));
}

} // namespace details

/// Won-loss percentage from mean runs scored and allowed.
/// Accepts per-game averages or season totals.
inline double pythag_wp(double rs_mean, double ra_mean, double beta,
                        double gamma) {
  if (!(rs_mean > beta) || !(ra_mean > beta)) {
    throw std::domain_error("pythag_wp: runs scored and allowed must exceed "
                            "beta");
  }
  if (!(gamma > 0.0)) {
    throw std::domain_error("pythag_wp: gamma must be positive");
  }
  return details::power_share(rs_mean - beta, ra_mean - beta, gamma);
}

/// P(X > Y) for the matchup, from the scales directly.
inline double win_probability(const MatchupParams &m) {
  m.validate();
  return details::power_share(m.rs.alpha, m.ra.alpha, m.rs.gamma);
}

/// Head-to-head estimate for a team of strength a against strength b.
inline double log5(double a, double b) {
  if (!(a > 0.0 && a < 1.0) || !(b > 0.0 && b < 1.0)) {
    throw std::domain_error("log5: winning percentages must lie in (0, 1)");
  }
  const double num = a * (1.0 - b);
  return num / (num + (1.0 - a) * b);
}

} // namespace pythag

#endif // PYTHAG_WEIBULL_HPP_
