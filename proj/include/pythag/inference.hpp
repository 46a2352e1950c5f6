#ifndef PYTHAG_INFERENCE_HPP_
#define PYTHAG_INFERENCE_HPP_

/*
 * Statistical checks of the fitted model:
 *
 *   - z-tests comparing observed and model mean runs per game,
 *   - a chi-square goodness-of-fit test over the runs-scored and runs-allowed
 *     bins (20 degrees of freedom for the default twelve bins),
 *   - a chi-square test of independence between runs scored and runs allowed
 *     on an incomplete contingency table whose diagonal cells are structural
 *     zeros (a game cannot end tied). Expected counts under
 *     quasi-independence come from iterative proportional fitting started at
 *     E = 1 off the diagonal and 0 on it.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pythag/binning.hpp"
#include "pythag/fit.hpp"
#include "pythag/matrix.hpp"
#include "pythag/season.hpp"
#include "pythag/special.hpp"

namespace pythag {

struct ZTestResult {
  double statistic = 0.0;
  double observed_mean = 0.0;
  double predicted_mean = 0.0;
  double observed_sd = 0.0;
  std::size_t n_games = 0;
};

inline ZTestResult z_test_from_summary(double observed_mean,
                                       double predicted_mean,
                                       double observed_sd,
                                       std::size_t n_games) {
  if (n_games < 2) {
    throw std::domain_error("z_test: need at least two games");
  }
  if (!(observed_sd > 0.0)) {
    throw std::domain_error("z_test: observed standard deviation is zero "
                            "(degenerate season)");
  }
  const double se = observed_sd / std::sqrt(static_cast<double>(n_games));
  return {(observed_mean - predicted_mean) / se, observed_mean, predicted_mean,
          observed_sd, n_games};
}

/// z = (observed mean - predicted mean) / (sample sd / sqrt(n)).
inline ZTestResult z_test_runs(const std::vector<int> &observed,
                               double predicted_mean) {
  if (observed.size() < 2) {
    throw std::domain_error("z_test: need at least two games");
  }
  double total = 0.0;
  for (const int v : observed) {
    total += v;
  }
  const double m = total / static_cast<double>(observed.size());
  return z_test_from_summary(m, predicted_mean, sample_sd(observed),
                             observed.size());
}

/// Keys used in ChiSquareResult::thresholds.
namespace threshold_names {
inline const std::string P95 = "p95";
inline const std::string P99 = "p99";
inline const std::string P95_BONFERRONI = "p95_bonferroni30";
inline const std::string P99_BONFERRONI = "p99_bonferroni30";
} // namespace threshold_names

/// Number of simultaneous per-team comparisons in a league season.
constexpr int BONFERRONI_COMPARISONS = 30;

// Published critical values (95%, 99%, and the same with the significance
// level divided by 30). The 95% and 99% entries of the 89 d.f. set are the
// 90 d.f. quantiles (112.02 and 122.94 are the 89 d.f. ones), so decisions
// use computed values and these are kept for comparison only.
constexpr std::array<double, 4> GOF_CRITICAL_20_DOF = {31.41, 37.57, 43.67,
                                                       48.75};
constexpr std::array<double, 4> INDEPENDENCE_CRITICAL_89_DOF = {
    113.15, 124.12, 133.26, 141.56};

/// Critical values computed from the chi-square inverse CDF.
inline std::map<std::string, double>
critical_values(int dof, int comparisons = BONFERRONI_COMPARISONS) {
  const double d = dof;
  return {
      {threshold_names::P95, chi_square_quantile(0.95, d)},
      {threshold_names::P99, chi_square_quantile(0.99, d)},
      {threshold_names::P95_BONFERRONI,
       chi_square_quantile(1.0 - 0.05 / comparisons, d)},
      {threshold_names::P99_BONFERRONI,
       chi_square_quantile(1.0 - 0.01 / comparisons, d)},
  };
}

/// Tabulated values for 20 and 89 degrees of freedom; empty otherwise.
inline std::map<std::string, double> published_critical_values(int dof) {
  const std::array<double, 4> *table = nullptr;
  if (dof == 20) {
    table = &GOF_CRITICAL_20_DOF;
  } else if (dof == 89) {
    table = &INDEPENDENCE_CRITICAL_89_DOF;
  }
  if (table == nullptr) {
    return {};
  }
  return {{threshold_names::P95, (*table)[0]},
          {threshold_names::P99, (*table)[1]},
          {threshold_names::P95_BONFERRONI, (*table)[2]},
          {threshold_names::P99_BONFERRONI, (*table)[3]}};
}

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  std::map<std::string, double> thresholds;
  // Some expected count fell below 1.
  bool low_expected_count = false;
  std::vector<std::string> warnings;

  double p_value() const { return chi_square_survival(statistic, dof); }
};

/// Goodness of fit of both fitted Weibulls to the binned runs, reported with
/// 2 (bins - 2) degrees of freedom (20 for the default twelve bins).
inline ChiSquareResult chisq_gof(const BinnedCounts &rs, const BinnedCounts &ra,
                                 const FitResult &fit) {
  details::require_compatible(rs, ra);
  ChiSquareResult out;
  const double g = static_cast<double>(rs.total_games);
  auto accumulate = [&](const BinnedCounts &obs, const WeibullParams &p,
                        const char *label) {
    for (std::size_t k = 0; k < obs.counts.size(); ++k) {
      const double expected = g * bin_area(p, obs.scheme, k);
      if (!(expected > 0.0)) {
        throw std::domain_error(std::string("chisq_gof: zero expected count "
                                            "in ") +
                                label + " bin " + std::to_string(k + 1));
      }
      if (expected < 1.0) {
        out.low_expected_count = true;
        out.warnings.push_back(std::string(label) + " bin " +
                               std::to_string(k + 1) +
                               " has expected count below 1");
      }
      const double d = static_cast<double>(obs.counts[k]) - expected;
      out.statistic += d * d / expected;
    }
  };
  accumulate(rs, fit.rs_params(), "runs scored");
  accumulate(ra, fit.ra_params(), "runs allowed");
  out.dof = 2 * (static_cast<int>(rs.scheme.size()) - 2);
  out.thresholds = critical_values(out.dof);
  return out;
}

/*
 * Runs-scored x runs-allowed counts with a structural-zero diagonal.
 * Row/column r corresponds to bin r of the binning scheme used to build it.
 */
class ContingencyTable {
public:
  ContingencyTable() = default;

  explicit ContingencyTable(Matrix<std::int64_t> observed,
                            std::int64_t excluded_diagonal = 0)
      : observed_(std::move(observed)), excluded_(excluded_diagonal) {
    if (observed_.rows() != observed_.cols() || observed_.rows() < 2) {
      throw std::invalid_argument("ContingencyTable: need a square table of "
                                  "dimension >= 2");
    }
    for (std::size_t r = 0; r < dim(); ++r) {
      if (observed_(r, r) != 0) {
        throw std::invalid_argument("ContingencyTable: diagonal cell (" +
                                    std::to_string(r) +
                                    ") is a structural zero");
      }
      for (std::size_t c = 0; c < dim(); ++c) {
        if (observed_(r, c) < 0) {
          throw std::invalid_argument("ContingencyTable: negative count");
        }
      }
    }
  }

  std::size_t dim() const { return observed_.rows(); }
  const Matrix<std::int64_t> &observed() const { return observed_; }
  std::int64_t observed(std::size_t r, std::size_t c) const {
    return observed_.at(r, c);
  }

  /// Games whose scores fell in the same (wide) bin and were left out.
  std::int64_t excluded_diagonal() const { return excluded_; }

  std::int64_t total() const {
    std::int64_t t = 0;
    for (const auto v : observed_.data()) {
      t += v;
    }
    return t;
  }

  std::vector<std::size_t> empty_rows() const {
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < dim(); ++r) {
      if (observed_.row_sum(r) == 0) {
        out.push_back(r);
      }
    }
    return out;
  }

  std::vector<std::size_t> empty_cols() const {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < dim(); ++c) {
      if (observed_.col_sum(c) == 0) {
        out.push_back(c);
      }
    }
    return out;
  }

  /// (n - 1)^2 - n for an n x n table with a structural-zero diagonal.
  int degrees_of_freedom() const {
    const int n = static_cast<int>(dim());
    return (n - 1) * (n - 1) - n;
  }

  /// Free cells minus fitted margins once empty rows and columns are
  /// dropped; equal to degrees_of_freedom() when none are empty.
  int effective_degrees_of_freedom() const {
    std::vector<bool> row_used(dim()), col_used(dim());
    int rows = 0, cols = 0;
    for (std::size_t i = 0; i < dim(); ++i) {
      row_used[i] = observed_.row_sum(i) > 0;
      col_used[i] = observed_.col_sum(i) > 0;
      rows += row_used[i];
      cols += col_used[i];
    }
    int cells = 0;
    for (std::size_t r = 0; r < dim(); ++r) {
      for (std::size_t c = 0; c < dim(); ++c) {
        cells += r != c && row_used[r] && col_used[c];
      }
    }
    return cells - (rows + cols - 1);
  }

private:
  Matrix<std::int64_t> observed_;
  std::int64_t excluded_ = 0;
};

inline ContingencyTable
build_contingency(const TeamSeason &team,
                  const BinScheme &scheme = independence_bins()) {
  const std::size_t n = scheme.size();
  Matrix<std::int64_t> counts(n, n, 0);
  std::int64_t excluded = 0;
  for (const auto &g : team.games) {
    const auto r = scheme.index_of(g.runs_scored);
    const auto c = scheme.index_of(g.runs_allowed);
    if (!r || !c) {
      throw std::invalid_argument("build_contingency: score below first bin");
    }
    if (*r == *c) {
      ++excluded;
      continue;
    }
    ++counts(*r, *c);
  }
  return ContingencyTable(std::move(counts), excluded);
}

struct IpfResult {
  MatrixD expected;
  int sweeps = 0;
  // Max absolute entry change after each full (row + column) sweep.
  std::vector<double> trace;
};

class IpfConvergenceError : public std::runtime_error {
public:
  IpfConvergenceError(const std::string &what, std::vector<double> trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const std::vector<double> &trace() const { return trace_; }

private:
  std::vector<double> trace_;
};

/// Maximum-likelihood expected counts under quasi-independence. Empty rows
/// or columns are a precondition error unless allow_empty is set, in which
/// case their expected counts are zero.
inline IpfResult ipf_expected(const ContingencyTable &table, double tol = 1e-10,
                              int max_iter = 10000, bool allow_empty = false) {
  const auto empty_r = table.empty_rows();
  const auto empty_c = table.empty_cols();
  if (!allow_empty && (!empty_r.empty() || !empty_c.empty())) {
    std::ostringstream msg;
    msg << "ipf_expected: every row and column needs a nonzero entry; empty";
    for (const auto r : empty_r) {
      msg << " row " << r + 1;
    }
    for (const auto c : empty_c) {
      msg << " column " << c + 1;
    }
    throw std::invalid_argument(msg.str());
  }

  const std::size_t n = table.dim();
  std::vector<double> row_totals(n), col_totals(n);
  for (std::size_t i = 0; i < n; ++i) {
    row_totals[i] = static_cast<double>(table.observed().row_sum(i));
    col_totals[i] = static_cast<double>(table.observed().col_sum(i));
  }

  IpfResult out{MatrixD(n, n, 1.0), 0, {}};
  for (std::size_t i = 0; i < n; ++i) {
    out.expected(i, i) = 0.0;
  }

  MatrixD previous = out.expected;
  for (int sweep = 1; sweep <= max_iter; ++sweep) {
    for (std::size_t r = 0; r < n; ++r) {
      const double s = out.expected.row_sum(r);
      const double f = row_totals[r] > 0.0 ? row_totals[r] / s : 0.0;
      for (std::size_t c = 0; c < n; ++c) {
        out.expected(r, c) *= f;
      }
    }
    for (std::size_t c = 0; c < n; ++c) {
      const double s = out.expected.col_sum(c);
      const double f = col_totals[c] > 0.0 ? col_totals[c] / s : 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        out.expected(r, c) *= f;
      }
    }
    double change = 0.0;
    for (std::size_t i = 0; i < n * n; ++i) {
      change = std::max(change, std::fabs(out.expected.data()[i] -
                                          previous.data()[i]));
    }
    out.trace.push_back(change);
    out.sweeps = sweep;
    if (change < tol) {
      return out;
    }
    previous = out.expected;
  }
  throw IpfConvergenceError("ipf_expected: no convergence after " +
                                std::to_string(max_iter) + " sweeps",
                            out.trace);
}

inline ChiSquareResult chisq_independence(const ContingencyTable &table,
                                          const MatrixD &expected) {
  if (expected.rows() != table.dim() || expected.cols() != table.dim()) {
    throw std::invalid_argument("chisq_independence: dimension mismatch");
  }
  ChiSquareResult out;
  for (std::size_t r = 0; r < table.dim(); ++r) {
    for (std::size_t c = 0; c < table.dim(); ++c) {
      if (r == c) {
        continue;
      }
      const double e = expected(r, c);
      if (table.observed().row_sum(r) == 0 ||
          table.observed().col_sum(c) == 0) {
        continue;
      }
      if (!(e > 0.0)) {
        out.warnings.push_back("cell (" + std::to_string(r + 1) + "," +
                               std::to_string(c + 1) +
                               ") has zero expected count; skipped");
        continue;
      }
      const double d = e - static_cast<double>(table.observed(r, c));
      out.statistic += d * d / e;
      if (e < 1.0) {
        out.low_expected_count = true;
      }
    }
  }
  out.dof = table.effective_degrees_of_freedom();
  if (out.dof < 1) {
    throw std::invalid_argument("chisq_independence: table leaves no degrees "
                                "of freedom");
  }
  out.thresholds = critical_values(out.dof);
  return out;
}

} // namespace pythag

#endif // PYTHAG_INFERENCE_HPP_
