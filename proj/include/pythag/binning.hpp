#ifndef PYTHAG_BINNING_HPP_
#define PYTHAG_BINNING_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pythag/weibull.hpp"

namespace pythag {

/*
 * Half-open bins [edges[k], edges[k+1]) with the final bin [edges.back(), inf).
 * A scheme with n edges therefore has n bins.
 */
struct BinScheme {
  std::vector<double> edges;

  BinScheme() = default;
  explicit BinScheme(std::vector<double> e) : edges(std::move(e)) {
    if (edges.empty()) {
      throw std::invalid_argument("BinScheme: need at least one edge");
    }
    for (std::size_t i = 1; i < edges.size(); ++i) {
      if (!(edges[i] > edges[i - 1])) {
        throw std::invalid_argument("BinScheme: edges must strictly increase");
      }
    }
  }

  std::size_t size() const { return edges.size(); }

  double lower(std::size_t k) const { return edges.at(k); }

  double upper(std::size_t k) const {
    if (k >= edges.size()) {
      throw std::out_of_range("BinScheme: bin index out of range");
    }
    return k + 1 < edges.size() ? edges[k + 1]
                                : std::numeric_limits<double>::infinity();
  }

  /// Zero-based index of the bin containing x, or nullopt below the first
  /// edge.
  std::optional<std::size_t> index_of(double x) const {
    if (edges.empty() || x < edges.front() || std::isnan(x)) {
      return std::nullopt;
    }
    const auto it = std::upper_bound(edges.begin(), edges.end(), x);
    return static_cast<std::size_t>(it - edges.begin()) - 1;
  }

  bool operator==(const BinScheme &) const = default;
};

/// The twelve fitting bins: [-.5,.5), [.5,1.5), ..., [8.5,9.5), [9.5,11.5),
/// [11.5, inf). Integer scores sit at the bin centres.
inline BinScheme default_fit_bins() {
  std::vector<double> edges;
  for (int k = 0; k <= 10; ++k) {
    edges.push_back(k - 0.5);
  }
  edges.push_back(11.5);
  return BinScheme(std::move(edges));
}

/// The eleven contingency-table bins: [0,1), ..., [8,9), [9,11), [11, inf).
inline BinScheme independence_bins() {
  std::vector<double> edges;
  for (int k = 0; k <= 9; ++k) {
    edges.push_back(k);
  }
  edges.push_back(11.0);
  return BinScheme(std::move(edges));
}

struct BinnedCounts {
  BinScheme scheme;
  std::vector<std::int64_t> counts;
  std::int64_t total_games = 0;

  bool operator==(const BinnedCounts &) const = default;
};

inline BinnedCounts bin_counts(std::span<const int> scores,
                               const BinScheme &scheme) {
  BinnedCounts out{scheme, std::vector<std::int64_t>(scheme.size(), 0), 0};
  for (const int s : scores) {
    const auto k = scheme.index_of(s);
    if (!k) {
      throw std::invalid_argument("bin_counts: score " + std::to_string(s) +
                                  " lies below the first bin edge");
    }
    ++out.counts[*k];
    ++out.total_games;
  }
  return out;
}

/// Probability mass of W(p) in bin k of the scheme.
inline double bin_area(const WeibullParams &p, const BinScheme &scheme,
                       std::size_t k) {
  if (k >= scheme.size()) {
    throw std::out_of_range("bin_area: bin index " + std::to_string(k) +
                            " out of range");
  }
  // Differences of survival values stay accurate far into the upper tail.
  return survival(p, scheme.lower(k)) - survival(p, scheme.upper(k));
}

inline std::vector<double> bin_areas(const WeibullParams &p,
                                     const BinScheme &scheme) {
  std::vector<double> out(scheme.size());
  for (std::size_t k = 0; k < scheme.size(); ++k) {
    out[k] = bin_area(p, scheme, k);
  }
  return out;
}

} // namespace pythag

#endif // PYTHAG_BINNING_HPP_
