#ifndef PYTHAG_OPTIMIZE_HPP_
#define PYTHAG_OPTIMIZE_HPP_

/*
 * Nelder-Mead downhill simplex minimizer with the standard coefficients
 * (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
 *
 * Termination requires both the spread of objective values across the
 * simplex to fall below ftol and the simplex diameter (max-norm distance from
 * the best vertex) to fall below xtol. Non-finite objective values are
 * treated as +inf, which lets callers encode box constraints by returning
 * infinity outside the feasible region.
 */

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace pythag {

struct NelderMeadOptions {
  double ftol = 1e-8;
  double xtol = 1e-9;
  int max_evaluations = 10000;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = std::numeric_limits<double>::infinity();
  int evaluations = 0;
  bool converged = false;
};

template <typename Objective>
NelderMeadResult nelder_mead(Objective &&objective, std::vector<double> start,
                             const std::vector<double> &step,
                             const NelderMeadOptions &options = {}) {
  const std::size_t n = start.size();
  NelderMeadResult result;

  auto eval = [&](const std::vector<double> &x) {
    ++result.evaluations;
    const double v = objective(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  std::vector<std::vector<double>> simplex(n + 1, start);
  std::vector<double> values(n + 1);
  values[0] = eval(start);
  for (std::size_t i = 0; i < n; ++i) {
    simplex[i + 1][i] += step[i];
    values[i + 1] = eval(simplex[i + 1]);
  }

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);

  auto point_along = [&](double t, const std::vector<double> &worst,
                         std::vector<double> &out) {
    for (std::size_t j = 0; j < n; ++j) {
      out[j] = centroid[j] + t * (worst[j] - centroid[j]);
    }
  };

  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return values[a] < values[b];
    });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[n - 1];

    double diameter = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        diameter =
            std::max(diameter, std::fabs(simplex[i][j] - simplex[best][j]));
      }
    }
    const double spread = values[worst] - values[best];
    if (std::isfinite(values[best]) && spread <= options.ftol &&
        diameter <= options.xtol) {
      result.converged = true;
      break;
    }
    if (result.evaluations >= options.max_evaluations) {
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) {
        continue;
      }
      for (std::size_t j = 0; j < n; ++j) {
        centroid[j] += simplex[i][j] / static_cast<double>(n);
      }
    }

    point_along(-1.0, simplex[worst], trial);
    const double reflected = eval(trial);

    if (reflected < values[best]) {
      point_along(-2.0, simplex[worst], trial2);
      const double expanded = eval(trial2);
      if (expanded < reflected) {
        simplex[worst] = trial2;
        values[worst] = expanded;
      } else {
        simplex[worst] = trial;
        values[worst] = reflected;
      }
      continue;
    }
    if (reflected < values[second_worst]) {
      simplex[worst] = trial;
      values[worst] = reflected;
      continue;
    }

    // Contraction: outside if the reflection improved on the worst vertex,
    // inside otherwise.
    const bool outside = reflected < values[worst];
    point_along(outside ? -0.5 : 0.5, simplex[worst], trial2);
    const double contracted = eval(trial2);
    if (contracted < std::min(reflected, values[worst])) {
      simplex[worst] = trial2;
      values[worst] = contracted;
      continue;
    }

    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) {
        continue;
      }
      for (std::size_t j = 0; j < n; ++j) {
        simplex[i][j] =
            simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
      }
      values[i] = eval(simplex[i]);
    }
  }

  const auto best_it = std::min_element(values.begin(), values.end());
  const auto best_index = static_cast<std::size_t>(best_it - values.begin());
  result.x = simplex[best_index];
  result.value = *best_it;
  return result;
}

} // namespace pythag

#endif // PYTHAG_OPTIMIZE_HPP_
