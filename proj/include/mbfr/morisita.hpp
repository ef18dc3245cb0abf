#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mbfr/dataset.hpp"
#include "mbfr/errors.hpp"
#include "mbfr/linear_fit.hpp"

namespace mbfr {

// Ordered set of inverse quadrat edge lengths (cells per axis).
struct ScaleSet {
  std::vector<int> inverse_edges;

  ScaleSet() = default;
  explicit ScaleSet(std::vector<int> edges) : inverse_edges(std::move(edges)) {
    validate();
  }

  static ScaleSet range(int lo, int hi) {
    std::vector<int> v;
    for (int k = lo; k <= hi; ++k) v.push_back(k);
    return ScaleSet(std::move(v));
  }

  // Accepts "5..20" or "1,2,4,8".
  static ScaleSet parse(const std::string& text) {
    std::vector<int> v;
    auto dots = text.find("..");
    if (dots != std::string::npos) {
      int lo = std::stoi(text.substr(0, dots));
      int hi = std::stoi(text.substr(dots + 2));
      return range(lo, hi);
    }
    std::size_t pos = 0;
    while (pos < text.size()) {
      auto comma = text.find(',', pos);
      if (comma == std::string::npos) comma = text.size();
      v.push_back(std::stoi(text.substr(pos, comma - pos)));
      pos = comma + 1;
    }
    return ScaleSet(std::move(v));
  }

  std::size_t size() const { return inverse_edges.size(); }

  void validate() const {
    if (inverse_edges.size() < 2)
      throw DataError("scale set needs at least 2 entries");
    int prev = 0;
    for (int k : inverse_edges) {
      if (k < 1) throw DataError("inverse edge lengths must be >= 1");
      if (k <= prev) throw DataError("scale set must be strictly increasing");
      prev = k;
    }
  }
};

// Log-log points, fitted slope and the resulting ID estimate for one
// variable subset.
struct IdEstimate {
  int m = 2;
  std::vector<int> scales_used;
  std::vector<std::pair<double, double>> points;  // (log inv_edge, log index)
  double slope = 0.0;
  double intrinsic_dim = 0.0;
  int embedding_dim = 0;
  std::vector<std::string> warnings;
};

// Columns participating in one index computation, without copying.
using ColumnView = std::vector<const std::vector<double>*>;

inline ColumnView view_of(const Dataset& d) {
  ColumnView v;
  for (std::size_t c = 0; c < d.n_cols(); ++c) v.push_back(&d.column(c));
  return v;
}

inline ColumnView view_of(const Dataset& d, const std::vector<std::string>& names) {
  ColumnView v;
  for (const auto& n : names) v.push_back(&d.column(n));
  return v;
}

namespace detail {

inline std::uint32_t quadrat_cell(double v, int inv_edge) {
  if (v < 0.0 || v > 1.0) throw DataError("coordinate outside [0,1]");
  // Half-open cells; coordinate exactly 1.0 lands in the last cell.
  auto cell = static_cast<std::uint32_t>(v * inv_edge);
  if (cell >= static_cast<std::uint32_t>(inv_edge))
    cell = static_cast<std::uint32_t>(inv_edge - 1);
  return cell;
}

// True when inv_edge^E fits in 64 bits, so a point key can be packed into
// a single integer.
inline bool keys_fit_u64(int inv_edge, std::size_t dims) {
  if (inv_edge <= 1) return true;
  long double capacity = 1.0L;
  for (std::size_t i = 0; i < dims; ++i) {
    capacity *= inv_edge;
    if (capacity > 1.8e19L) return false;
  }
  return true;
}

// Falling factorial n(n-1)...(n-m+1) as a double; exact for the counts and
// m values used here.
inline double falling(double n, int m) {
  double p = 1.0;
  for (int i = 0; i < m; ++i) p *= (n - i);
  return p;
}

inline double falling_sum_from_runs(std::vector<std::uint64_t>& keys, int m) {
  std::sort(keys.begin(), keys.end());
  double sum = 0.0;
  std::size_t i = 0;
  while (i < keys.size()) {
    std::size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    auto n = static_cast<double>(j - i);
    if (j - i >= static_cast<std::size_t>(m)) sum += falling(n, m);
    i = j;
  }
  return sum;
}

// Sum over occupied quadrats of n_i(n_i-1)...(n_i-m+1) at the given scale.
// Sparse: per-point cell keys are sorted and counted as runs, so only
// occupied quadrats are touched and the accumulation order is fixed.
inline double quadrat_falling_sum(const ColumnView& cols, int m, int inv_edge) {
  const std::size_t dims = cols.size();
  const std::size_t n = cols[0]->size();
  if (keys_fit_u64(inv_edge, dims)) {
    std::vector<std::uint64_t> keys(n);
    for (std::size_t r = 0; r < n; ++r) {
      std::uint64_t key = 0;
      for (std::size_t c = 0; c < dims; ++c)
        key = key * static_cast<std::uint64_t>(inv_edge) +
              quadrat_cell((*cols[c])[r], inv_edge);
      keys[r] = key;
    }
    return falling_sum_from_runs(keys, m);
  }
  // Wide embedding: lexicographic sort of per-point cell tuples.
  std::vector<std::uint32_t> cells(n * dims);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < dims; ++c)
      cells[r * dims + c] = quadrat_cell((*cols[c])[r], inv_edge);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(
        cells.begin() + a * dims, cells.begin() + (a + 1) * dims,
        cells.begin() + b * dims, cells.begin() + (b + 1) * dims);
  };
  auto equal = [&](std::size_t a, std::size_t b) {
    return std::equal(cells.begin() + a * dims, cells.begin() + (a + 1) * dims,
                      cells.begin() + b * dims);
  };
  std::sort(order.begin(), order.end(), less);
  double sum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && equal(order[j], order[i])) ++j;
    if (j - i >= static_cast<std::size_t>(m))
      sum += falling(static_cast<double>(j - i), m);
    i = j;
  }
  return sum;
}

// log I_{m,inv_edge}, or nullopt when no quadrat holds >= m points.
// Computed in log space so huge quadrat counts (Q = inv_edge^E for large E)
// do not overflow.
inline std::optional<double> log_morisita_index(const ColumnView& cols, int m,
                                                int inv_edge) {
  const std::size_t n = cols[0]->size();
  if (n < static_cast<std::size_t>(m))
    throw NumericError("morisita index needs N >= m");
  double sum = quadrat_falling_sum(cols, m, inv_edge);
  if (sum <= 0.0) return std::nullopt;
  double log_falling_n = 0.0;
  for (int i = 0; i < m; ++i)
    log_falling_n += std::log(static_cast<double>(n - i));
  return static_cast<double>(m - 1) * static_cast<double>(cols.size()) *
             std::log(static_cast<double>(inv_edge)) +
         std::log(sum) - log_falling_n;
}

}  // namespace detail

// Per-axis cell index of one point; coordinate 1.0 clamps to the last cell.
inline std::vector<std::uint32_t> point_to_quadrat(std::span<const double> coords,
                                                   int inv_edge) {
  std::vector<std::uint32_t> key(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i)
    key[i] = detail::quadrat_cell(coords[i], inv_edge);
  return key;
}

// Multipoint Morisita index I_{m,inv_edge} over the unit cube.
inline double morisita_index(const ColumnView& cols, int m, int inv_edge) {
  if (m < 2) throw NumericError("morisita index needs m >= 2");
  if (inv_edge < 1) throw DataError("inverse edge length must be >= 1");
  const std::size_t n = cols[0]->size();
  if (n < static_cast<std::size_t>(m))
    throw NumericError("morisita index needs N >= m");
  double sum = detail::quadrat_falling_sum(cols, m, inv_edge);
  double q = std::pow(static_cast<double>(inv_edge),
                      static_cast<double>(cols.size()));
  return std::pow(q, static_cast<double>(m - 1)) * sum /
         detail::falling(static_cast<double>(n), m);
}

inline double morisita_index(const Dataset& d, int m, int inv_edge) {
  return morisita_index(view_of(d), m, inv_edge);
}

// MINDID estimate: OLS fit of log I_{m,l} against log(1/l) over the scale
// set, M_m = E - slope/(m-1). Scales with a zero index are dropped from the
// fit with a warning.
inline IdEstimate mindid(const ColumnView& cols, int m, const ScaleSet& scales) {
  scales.validate();
  if (m < 2) throw NumericError("mindid needs m >= 2");
  IdEstimate est;
  est.m = m;
  est.embedding_dim = static_cast<int>(cols.size());
  std::vector<double> xs, ys;
  for (int k : scales.inverse_edges) {
    auto log_index = detail::log_morisita_index(cols, m, k);
    if (!log_index) {
      est.warnings.push_back("scale " + std::to_string(k) +
                             " dropped: no quadrat holds >= m points");
      continue;
    }
    est.scales_used.push_back(k);
    xs.push_back(std::log(static_cast<double>(k)));
    ys.push_back(*log_index);
    est.points.emplace_back(xs.back(), ys.back());
  }
  if (xs.size() < 2)
    throw NumericError("mindid: fewer than 2 usable scales");
  OlsFit fit = ols_fit(xs, ys);
  est.slope = fit.slope;
  est.intrinsic_dim =
      static_cast<double>(est.embedding_dim) - fit.slope / (m - 1);
  if (fit.slope < -0.1 * (m - 1))
    est.warnings.push_back("intrinsic dimension exceeds embedding dimension "
                           "beyond the noise band");
  return est;
}

inline IdEstimate mindid(const Dataset& d, int m, const ScaleSet& scales) {
  return mindid(view_of(d), m, scales);
}

// Result of the scale-set selection heuristic.
struct ScaleChoice {
  ScaleSet scales;
  int window_lo = 0;
  int window_hi = 0;
  double r2 = 0.0;
  std::vector<std::pair<double, double>> probe_points;  // full log-log probe
  std::vector<std::string> warnings;
};

// Linearity bar for the scale-window search. A window qualifies when the
// OLS fit explains the variance (r2) or the residuals are tiny in absolute
// terms (rmse, which covers flat profiles where r2 is uninformative).
inline constexpr double kScaleWindowR2 = 0.99;
inline constexpr double kScaleWindowRmse = 0.05;

// Selects the analysis scales from the full dataset: probe inv_edge
// 1..probe_max, keep the longest contiguous window with a near-linear
// log-log plot, and thin to a ratio-2 geometric progression when the upper
// bound reaches 30.
inline ScaleChoice choose_scales(const Dataset& d, int probe_max = 130,
                                 bool prefer_steepest = false) {
  if (!d.rescaled()) throw DataError("choose_scales expects a rescaled dataset");
  ColumnView cols = view_of(d);
  const int m = 2;

  // Probe every scale; the upper bound is the largest inv_edge at which at
  // least one quadrat still holds two points.
  std::vector<std::optional<double>> log_index(probe_max + 1);
  int ubound = 0;
  for (int k = 1; k <= probe_max; ++k) {
    log_index[k] = detail::log_morisita_index(cols, m, k);
    if (log_index[k]) ubound = k;
  }
  if (ubound < 2)
    throw NumericError("choose_scales: index vanishes at every scale > 1");

  ScaleChoice choice;
  for (int k = 1; k <= ubound; ++k)
    if (log_index[k])
      choice.probe_points.emplace_back(std::log(static_cast<double>(k)),
                                       *log_index[k]);

  struct Window {
    int lo = 0, hi = 0;
    double r2 = 0.0, slope = 0.0;
    bool linear = false;
  };
  Window best;
  auto better = [&](const Window& a, const Window& b) {
    if (a.linear != b.linear) return a.linear;
    int la = a.hi - a.lo, lb = b.hi - b.lo;
    if (a.linear && la != lb) return la > lb;
    if (prefer_steepest && a.linear && la == lb)
      return std::abs(a.slope) > std::abs(b.slope);
    return a.r2 > b.r2;
  };
  for (int lo = 1; lo < ubound; ++lo) {
    if (!log_index[lo]) continue;
    std::vector<double> xs, ys;
    xs.push_back(std::log(static_cast<double>(lo)));
    ys.push_back(*log_index[lo]);
    for (int hi = lo + 1; hi <= ubound && log_index[hi]; ++hi) {
      xs.push_back(std::log(static_cast<double>(hi)));
      ys.push_back(*log_index[hi]);
      OlsFit fit = ols_fit(xs, ys);
      Window w{lo, hi, fit.r2, fit.slope,
               fit.r2 >= kScaleWindowR2 || fit.rmse <= kScaleWindowRmse};
      if (better(w, best)) best = w;
    }
  }
  if (best.hi == 0) throw NumericError("choose_scales: no usable window");
  if (!best.linear)
    choice.warnings.push_back(
        "no window met the linearity bar; returning the best-fit window");

  choice.window_lo = best.lo;
  choice.window_hi = best.hi;
  choice.r2 = best.r2;
  std::vector<int> edges;
  if (best.hi >= 30) {
    for (int k = best.lo; k <= best.hi; k *= 2) edges.push_back(k);
    if (edges.size() < 2) edges = {best.lo, best.hi};
  } else {
    for (int k = best.lo; k <= best.hi; ++k) edges.push_back(k);
  }
  choice.scales = ScaleSet(std::move(edges));
  return choice;
}

}  // namespace mbfr
