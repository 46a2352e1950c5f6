#ifndef PYTHAG_TESTS_ORACLE_QUADRATURE_HPP_
#define PYTHAG_TESTS_ORACLE_QUADRATURE_HPP_

/*
 * Test-only numerical integration, independent of the library's closed
 * forms: adaptive Gauss-Kronrod (7/15) with global error control, plus
 * helpers for Weibull expectations over the semi-infinite support using the
 * substitution u = ((x - beta) / alpha)^gamma.
 */

#include <array>
#include <cmath>
#include <functional>
#include <queue>
#include <vector>

#include "pythag/weibull.hpp"

namespace oracle {

namespace details {

constexpr std::array<double, 8> XGK = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> WGK = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
constexpr std::array<double, 4> WG = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment &o) const { return error < o.error; }
};

template <typename F> Segment gk15(F &f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = fc * WGK[7];
  double gauss = fc * WG[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = h * XGK[i];
    const double s = f(c - dx) + f(c + dx);
    kronrod += WGK[i] * s;
    if (i % 2 == 1) {
      gauss += WG[i / 2] * s;
    }
  }
  return {a, b, kronrod * h, std::fabs((kronrod - gauss) * h)};
}

} // namespace details

/// Integral of f over [a, b] to absolute tolerance tol.
template <typename F>
double integrate(F &&f, double a, double b, double tol = 1e-12,
                 int max_segments = 20000) {
  std::priority_queue<details::Segment> queue;
  auto first = details::gk15(f, a, b);
  double total = first.value;
  double error = first.error;
  queue.push(first);
  int segments = 1;
  while (error > tol && segments < max_segments) {
    const auto worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const auto left = details::gk15(f, worst.a, mid);
    const auto right = details::gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++segments;
  }
  // Re-sum to shed accumulated cancellation in the running total.
  double sum = 0.0;
  while (!queue.empty()) {
    sum += queue.top().value;
    queue.pop();
  }
  return sum;
}

/// Upper limit in u beyond which e^-u times any moment used here is < 1e-20.
constexpr double U_MAX = 70.0;

/// E[g(X)] for X ~ W(p), integrating over u = ((x - beta)/alpha)^gamma.
template <typename G>
double weibull_expectation(const pythag::WeibullParams &p, G &&g,
                           double tol = 1e-13) {
  auto integrand = [&](double u) {
    return g(p.beta + p.alpha * std::pow(u, 1.0 / p.gamma)) * std::exp(-u);
  };
  return integrate(integrand, 0.0, U_MAX, tol);
}

/// Gamma(s) from its defining integral, after substituting u = v^(1/s) so the
/// integrand exp(-v^(1/s)) / s is smooth at the origin.
inline double gamma_by_quadrature(double s) {
  auto integrand = [s](double v) { return std::exp(-std::pow(v, 1.0 / s)); };
  return integrate(integrand, 0.0, std::pow(U_MAX, s), 1e-14) / s;
}

/// P(X > Y) by nested quadrature: outer over x, inner integral of the RA
/// density over [beta, x].
inline double win_probability_by_quadrature(const pythag::MatchupParams &m) {
  auto inner = [&](double x) {
    if (x <= m.ra.beta) {
      return 0.0;
    }
    return integrate([&](double y) { return pythag::pdf(m.ra, y); }, m.ra.beta,
                     x, 1e-12);
  };
  return weibull_expectation(m.rs, inner, 1e-11);
}

} // namespace oracle

#endif // PYTHAG_TESTS_ORACLE_QUADRATURE_HPP_
