#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracle/quadrature.hpp"
#include "pythag/weibull.hpp"

namespace pythag {

namespace {

WeibullParams random_params(std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> alpha(0.5, 10.0);
  std::uniform_real_distribution<double> beta(-1.0, 1.0);
  std::uniform_real_distribution<double> gamma(1.0, 3.0);
  return {alpha(rng), beta(rng), gamma(rng)};
}

} // namespace

TEST(test_weibull, params_validation) {
  EXPECT_THROW(make_weibull(0.0, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(make_weibull(1.0, 0.0, -2.0), std::invalid_argument);
  EXPECT_NO_THROW(make_weibull(1.0, -0.5, 1.8));
  EXPECT_THROW(make_matchup(1.0, 2.0, 0.0, 0.0), std::invalid_argument);
  MatchupParams mixed{{1.0, 0.0, 1.5}, {1.0, 0.0, 1.6}};
  EXPECT_THROW(mixed.validate(), std::invalid_argument);
  MatchupParams shifted{{1.0, 0.0, 1.5}, {1.0, -0.5, 1.5}};
  EXPECT_THROW(shifted.validate(), std::invalid_argument);
}

TEST(test_weibull, pdf_examples) {
  const WeibullParams exp1{1.0, 0.0, 1.0};
  EXPECT_EQ(pdf(exp1, -0.5), 0.0);
  EXPECT_NEAR(pdf(exp1, 1.0), 0.3678794, 1e-7);

  // Centered finite difference of the CDF.
  const WeibullParams p{2.0, -0.5, 1.8};
  const double h = 1e-5;
  const double fd = (cdf(p, 3.0 + h) - cdf(p, 3.0 - h)) / (2.0 * h);
  EXPECT_NEAR(pdf(p, 3.0), fd, 1e-6);
}

TEST(test_weibull, cdf_examples) {
  const WeibullParams exp1{1.0, 0.0, 1.0};
  EXPECT_EQ(cdf(exp1, 0.0), 0.0);
  EXPECT_EQ(cdf({2.3, -0.5, 1.7}, -0.5), 0.0);
  EXPECT_NEAR(cdf(exp1, 1.0), 0.6321206, 1e-7);

  const WeibullParams p{1.5, -0.5, 1.7};
  const double area = oracle::integrate(
      [&](double x) { return pdf(p, x); }, p.beta, 4.0, 1e-13);
  EXPECT_NEAR(cdf(p, 4.0), area, 1e-8);
}

TEST(test_weibull, pdf_is_a_density) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20; ++i) {
    const auto p = random_params(rng);
    const double total = oracle::weibull_expectation(p, [](double) { return 1.0; });
    EXPECT_NEAR(total, 1.0, 1e-8);
    // Direct x-space integral over the bulk plus the closed-form tail.
    const double upper = p.beta + 8.0 * p.alpha;
    const double bulk = oracle::integrate([&](double x) { return pdf(p, x); },
                                          p.beta, upper, 1e-12);
    EXPECT_NEAR(bulk + survival(p, upper), 1.0, 1e-8);
    for (double x : {p.beta - 1.0, p.beta - 1e-9}) {
      EXPECT_EQ(pdf(p, x), 0.0);
    }
  }
}

TEST(test_weibull, cdf_is_integral_of_pdf) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> offset(0.0, 15.0);
  for (int i = 0; i < 30; ++i) {
    const auto p = random_params(rng);
    const double x = p.beta + offset(rng);
    const double area = oracle::integrate([&](double t) { return pdf(p, t); },
                                          p.beta, x, 1e-13);
    EXPECT_NEAR(cdf(p, x) - cdf(p, p.beta), area, 1e-8);
  }
}

TEST(test_weibull, cdf_monotone) {
  const WeibullParams p{3.0, -0.5, 1.7};
  double prev = 0.0;
  for (double x = -1.0; x < 30.0; x += 0.05) {
    const double c = cdf(p, x);
    EXPECT_GE(c, prev);
    EXPECT_LE(c, 1.0);
    prev = c;
  }
}

TEST(test_weibull, mean_examples) {
  EXPECT_NEAR(mean({1.0, 0.0, 1.0}), 1.0, 1e-14);
  EXPECT_NEAR(mean({1.0, -0.5, 1.0}), 0.5, 1e-14);
  const WeibullParams p{3.0, -0.5, 1.8};
  const double m = oracle::weibull_expectation(p, [](double x) { return x; });
  EXPECT_NEAR(mean(p), m, 1e-8);
}

TEST(test_weibull, variance_examples) {
  EXPECT_NEAR(variance({1.0, 0.0, 1.0}), 1.0, 1e-13);
  EXPECT_EQ(variance({2.5, -3.0, 1.4}), variance({2.5, 7.0, 1.4}));

  const WeibullParams p{2.0, 0.0, 2.0};
  const double m = oracle::weibull_expectation(p, [](double x) { return x; });
  const double v = oracle::weibull_expectation(
      p, [m](double x) { return (x - m) * (x - m); });
  EXPECT_NEAR(variance(p), v, 1e-8);
}

TEST(test_weibull, moments_match_quadrature_on_grid) {
  for (double alpha : {0.5, 2.0, 4.5, 7.0, 10.0}) {
    for (double gamma : {1.0, 1.5, 2.0, 2.5, 3.0}) {
      const WeibullParams p{alpha, -0.5, gamma};
      const double m = oracle::weibull_expectation(p, [](double x) { return x; });
      const double v = oracle::weibull_expectation(
          p, [m](double x) { return (x - m) * (x - m); });
      EXPECT_NEAR(mean(p), m, 1e-8) << alpha << " " << gamma;
      EXPECT_NEAR(variance(p), v, 1e-8) << alpha << " " << gamma;
      EXPECT_GE(variance(p), 0.0);
    }
  }
}

TEST(test_weibull, alpha_from_mean) {
  EXPECT_NEAR(alpha_from_mean(1.0, 0.0, 1.0), 1.0, 1e-14);
  EXPECT_NEAR(alpha_from_mean(4.51, -0.5, 1.76),
              (4.51 + 0.5) / gamma_fn(1.0 + 1.0 / 1.76), 1e-14);
  EXPECT_THROW(alpha_from_mean(-0.5, -0.5, 1.8), std::domain_error);
  EXPECT_THROW(alpha_from_mean(-1.0, -0.5, 1.8), std::domain_error);

  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> m(-0.4, 12.0);
  std::uniform_real_distribution<double> g(0.5, 4.0);
  for (int i = 0; i < 200; ++i) {
    const double target = m(rng);
    const double gamma = g(rng);
    const double alpha = alpha_from_mean(target, -0.5, gamma);
    EXPECT_NEAR(mean({alpha, -0.5, gamma}), target, 1e-12);
  }
}

TEST(test_weibull, pythag_wp_examples) {
  EXPECT_EQ(pythag_wp(4.2, 4.2, -0.5, 1.8), 0.5);
  EXPECT_EQ(pythag_wp(700, 700, 0.0, 1.83), 0.5);
  // Nationals and Pirates predicted runs with their fitted shapes.
  EXPECT_NEAR(pythag_wp(4.54, 3.49, -0.5, 1.76), 0.602, 1e-3);
  EXPECT_NEAR(pythag_wp(4.12, 4.17, -0.5, 1.63), 0.496, 1e-3);
  EXPECT_THROW(pythag_wp(-0.5, 3.0, -0.5, 1.8), std::domain_error);
  EXPECT_THROW(pythag_wp(3.0, -0.7, -0.5, 1.8), std::domain_error);
}

TEST(test_weibull, pythag_wp_complement_and_monotonicity) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> runs(0.0, 1000.0);
  std::uniform_real_distribution<double> g(0.5, 4.0);
  for (int i = 0; i < 1000; ++i) {
    const double rs = runs(rng), ra = runs(rng), gamma = g(rng);
    EXPECT_EQ(pythag_wp(rs, ra, -0.5, gamma) + pythag_wp(ra, rs, -0.5, gamma),
              1.0);
    EXPECT_LT(pythag_wp(rs, ra, -0.5, gamma),
              pythag_wp(rs * 1.01 + 0.01, ra, -0.5, gamma));
    EXPECT_GT(pythag_wp(rs, ra, -0.5, gamma),
              pythag_wp(rs, ra * 1.01 + 0.01, -0.5, gamma));
  }
}

TEST(test_weibull, pythag_wp_scale_invariant_and_stable) {
  // Totals and per-game averages agree when beta = 0.
  EXPECT_NEAR(pythag_wp(731, 594, 0.0, 1.83),
              pythag_wp(731.0 / 162, 594.0 / 162, 0.0, 1.83), 1e-14);
  // Extreme ratios stay finite.
  EXPECT_NEAR(pythag_wp(1e6, 1.0, 0.0, 50.0), 1.0, 1e-15);
  EXPECT_NEAR(pythag_wp(1.0, 1e6, 0.0, 50.0), 0.0, 1e-15);
}

TEST(test_weibull, win_probability_matches_formula_and_quadrature) {
  EXPECT_EQ(win_probability(make_matchup(3.0, 3.0, -0.5, 1.7)), 0.5);

  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> means(2.0, 7.0);
  std::uniform_real_distribution<double> g(1.0, 3.0);
  for (int i = 0; i < 8; ++i) {
    const double rs = means(rng), ra = means(rng), gamma = g(rng);
    const auto m = make_matchup(alpha_from_mean(rs, -0.5, gamma),
                                alpha_from_mean(ra, -0.5, gamma), -0.5, gamma);
    EXPECT_NEAR(win_probability(m), pythag_wp(mean(m.rs), mean(m.ra), -0.5, gamma),
                1e-12);
    EXPECT_NEAR(win_probability(m), pythag_wp(rs, ra, -0.5, gamma), 1e-12);
    EXPECT_NEAR(win_probability(m), oracle::win_probability_by_quadrature(m),
                1e-6);
  }
}

TEST(test_weibull, log5_identities) {
  EXPECT_EQ(log5(0.3, 0.3), 0.5);
  for (double b : {0.1, 0.35, 0.5, 0.77, 0.99}) {
    EXPECT_NEAR(log5(0.5, b), 1.0 - b, 1e-15);
  }
  EXPECT_THROW(log5(0.0, 0.5), std::domain_error);
  EXPECT_THROW(log5(0.5, 1.0), std::domain_error);

  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> runs(1.0, 1000.0);
  for (int i = 0; i < 100; ++i) {
    const double rs = runs(rng), ra = runs(rng);
    const double a = rs / (rs + ra), b = ra / (rs + ra);
    EXPECT_NEAR(log5(a, b), pythag_wp(rs, ra, 0.0, 2.0), 1e-12);
  }
}

} // namespace pythag
