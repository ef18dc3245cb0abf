#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "mbfr/dataset.hpp"
#include "mbfr/errors.hpp"
#include "mbfr/parallel.hpp"
#include "mbfr/rng.hpp"

namespace mbfr {

// Single-hidden-layer network with frozen random input weights; only the
// output weights are learnt, as a minimum-norm least-squares solution.
struct ElmModel {
  Eigen::MatrixXd input_weights;  // features x hidden
  Eigen::VectorXd hidden_biases;  // hidden (zero when biases disabled)
  Eigen::VectorXd output_weights; // hidden
  int n_hidden = 0;
  bool warning_interpolation = false;  // n_hidden >= N
};

namespace detail {

inline Eigen::MatrixXd hidden_activations(const ElmModel& model,
                                          const Eigen::MatrixXd& x) {
  Eigen::MatrixXd h = x * model.input_weights;
  h.rowwise() += model.hidden_biases.transpose();
  return ((-h.array()).exp() + 1.0).inverse().matrix();
}

}  // namespace detail

inline ElmModel elm_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                        int n_hidden, std::uint64_t seed,
                        bool use_biases = true) {
  if (n_hidden < 1) throw NumericError("elm_fit: n_hidden must be >= 1");
  ElmModel model;
  model.n_hidden = n_hidden;
  model.warning_interpolation = n_hidden >= x.rows();
  Rng rng(seed);
  model.input_weights.resize(x.cols(), n_hidden);
  for (Eigen::Index c = 0; c < n_hidden; ++c)
    for (Eigen::Index r = 0; r < x.cols(); ++r)
      model.input_weights(r, c) = rng.uniform(-1.0, 1.0);
  model.hidden_biases = Eigen::VectorXd::Zero(n_hidden);
  if (use_biases)
    for (int i = 0; i < n_hidden; ++i)
      model.hidden_biases(i) = rng.uniform(-1.0, 1.0);
  Eigen::MatrixXd h = detail::hidden_activations(model, x);
  // The threshold must be set before compute(): it controls the rank cut
  // used while building the factorization, not only the reported rank.
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
  cod.setThreshold(1e-10);
  cod.compute(h);
  model.output_weights = cod.solve(y);
  return model;
}

inline Eigen::VectorXd elm_predict(const ElmModel& model,
                                   const Eigen::MatrixXd& x) {
  return detail::hidden_activations(model, x) * model.output_weights;
}

// Relative mean squared error: residual sum of squares over the centered
// sum of squares of the true values. 1 matches the mean predictor.
inline double relative_error(const Eigen::VectorXd& y_true,
                             const Eigen::VectorXd& y_pred) {
  if (y_true.size() != y_pred.size() || y_true.size() < 2)
    throw NumericError("relative_error: need equal lengths >= 2");
  double mean = y_true.mean();
  double denom = (y_true.array() - mean).square().sum();
  if (denom <= 0.0)
    throw NumericError("relative_error: constant y_true");
  return (y_true - y_pred).squaredNorm() / denom;
}

inline double relative_error(const std::vector<double>& y_true,
                             const std::vector<double>& y_pred) {
  return relative_error(
      Eigen::Map<const Eigen::VectorXd>(y_true.data(),
                                        static_cast<Eigen::Index>(y_true.size())),
      Eigen::Map<const Eigen::VectorXd>(y_pred.data(),
                                        static_cast<Eigen::Index>(y_pred.size())));
}

struct EvalProtocol {
  int n_splits = 20;
  int cv_folds = 10;
  int retrains = 100;
  std::vector<int> hidden_grid;  // empty -> default thinned grid
  std::uint64_t seed = 0;
  bool use_biases = true;

  // {1..20} plus {25,30,...,350}; the full 1..350 grid is available when
  // runtime is no concern.
  static std::vector<int> default_grid() {
    std::vector<int> g;
    for (int i = 1; i <= 20; ++i) g.push_back(i);
    for (int i = 25; i <= 350; i += 5) g.push_back(i);
    return g;
  }
  static std::vector<int> full_grid() {
    std::vector<int> g;
    for (int i = 1; i <= 350; ++i) g.push_back(i);
    return g;
  }
  std::vector<int> grid() const {
    return hidden_grid.empty() ? default_grid() : hidden_grid;
  }
};

struct EvalReport {
  std::vector<double> re_per_split;
  std::vector<int> chosen_n_hidden;
  double mean_re = 0.0;
  double sd_re = 0.0;
  double runtime_seconds = 0.0;
};

namespace detail {

struct ScaledSplit {
  Eigen::MatrixXd x_train, x_test;
  Eigen::VectorXd y_train_scaled, y_test_original;
  double y_min = 0.0, y_span = 1.0;
};

// 80/20 split with min/max scaling coefficients taken from the training
// portion only; test rows may fall outside [0,1] and are used unclipped.
inline ScaledSplit make_split(const Dataset& d,
                              const std::vector<std::string>& features,
                              std::uint64_t seed) {
  const std::size_t n = d.n_rows();
  Rng rng(seed);
  auto perm = rng.permutation(n);
  std::size_t n_test = std::max<std::size_t>(1, n / 5);
  std::size_t n_train = n - n_test;

  ScaledSplit s;
  s.x_train.resize(static_cast<Eigen::Index>(n_train),
                   static_cast<Eigen::Index>(features.size()));
  s.x_test.resize(static_cast<Eigen::Index>(n_test),
                  static_cast<Eigen::Index>(features.size()));
  s.y_train_scaled.resize(static_cast<Eigen::Index>(n_train));
  s.y_test_original.resize(static_cast<Eigen::Index>(n_test));

  const auto& y = d.target();
  for (std::size_t f = 0; f < features.size(); ++f) {
    const auto& col = d.column(features[f]);
    double mn = col[perm[n_test]], mx = mn;
    for (std::size_t i = n_test; i < n; ++i) {
      mn = std::min(mn, col[perm[i]]);
      mx = std::max(mx, col[perm[i]]);
    }
    double span = (mx > mn) ? (mx - mn) : 1.0;
    for (std::size_t i = 0; i < n_test; ++i)
      s.x_test(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(f)) =
          (col[perm[i]] - mn) / span;
    for (std::size_t i = n_test; i < n; ++i)
      s.x_train(static_cast<Eigen::Index>(i - n_test),
                static_cast<Eigen::Index>(f)) = (col[perm[i]] - mn) / span;
  }
  double ymn = y[perm[n_test]], ymx = ymn;
  for (std::size_t i = n_test; i < n; ++i) {
    ymn = std::min(ymn, y[perm[i]]);
    ymx = std::max(ymx, y[perm[i]]);
  }
  s.y_min = ymn;
  s.y_span = (ymx > ymn) ? (ymx - ymn) : 1.0;
  for (std::size_t i = n_test; i < n; ++i)
    s.y_train_scaled(static_cast<Eigen::Index>(i - n_test)) =
        (y[perm[i]] - ymn) / s.y_span;
  for (std::size_t i = 0; i < n_test; ++i)
    s.y_test_original(static_cast<Eigen::Index>(i)) = y[perm[i]];
  return s;
}

struct CvChoice {
  int n_hidden = 1;
  double mean_mse = 0.0;
};

// 10-fold CV over the hidden-size grid. Among sizes whose mean MSE is
// within one standard error of the minimum, the smallest wins (automated
// stand-in for manual variance inspection).
inline CvChoice cross_validate(const Eigen::MatrixXd& x,
                               const Eigen::VectorXd& y,
                               const EvalProtocol& proto, std::uint64_t seed,
                               unsigned threads) {
  const auto n = static_cast<std::size_t>(x.rows());
  const int folds = std::min<int>(proto.cv_folds, static_cast<int>(n));
  Rng rng(seed);
  auto perm = rng.permutation(n);
  std::vector<int> fold_of(n);
  for (std::size_t i = 0; i < n; ++i)
    fold_of[perm[i]] = static_cast<int>(i % folds);

  auto grid = proto.grid();
  std::vector<double> mean_mse(grid.size()), sd_mse(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t g) {
    int nh = grid[g];
    std::vector<double> fold_mse(static_cast<std::size_t>(folds));
    for (int f = 0; f < folds; ++f) {
      std::vector<std::size_t> tr, va;
      for (std::size_t i = 0; i < n; ++i)
        (fold_of[i] == f ? va : tr).push_back(i);
      Eigen::MatrixXd xtr(tr.size(), x.cols()), xva(va.size(), x.cols());
      Eigen::VectorXd ytr(tr.size()), yva(va.size());
      for (std::size_t i = 0; i < tr.size(); ++i) {
        xtr.row(static_cast<Eigen::Index>(i)) =
            x.row(static_cast<Eigen::Index>(tr[i]));
        ytr(static_cast<Eigen::Index>(i)) =
            y(static_cast<Eigen::Index>(tr[i]));
      }
      for (std::size_t i = 0; i < va.size(); ++i) {
        xva.row(static_cast<Eigen::Index>(i)) =
            x.row(static_cast<Eigen::Index>(va[i]));
        yva(static_cast<Eigen::Index>(i)) =
            y(static_cast<Eigen::Index>(va[i]));
      }
      ElmModel model =
          elm_fit(xtr, ytr, nh, seed + 7919u * static_cast<unsigned>(f) + nh,
                  proto.use_biases);
      Eigen::VectorXd pred = elm_predict(model, xva);
      fold_mse[static_cast<std::size_t>(f)] =
          (yva - pred).squaredNorm() / static_cast<double>(va.size());
    }
    double m = std::accumulate(fold_mse.begin(), fold_mse.end(), 0.0) /
               static_cast<double>(folds);
    double var = 0.0;
    for (double v : fold_mse) var += (v - m) * (v - m);
    mean_mse[g] = m;
    sd_mse[g] = folds > 1 ? std::sqrt(var / (folds - 1)) : 0.0;
  });

  std::size_t best = 0;
  for (std::size_t g = 1; g < grid.size(); ++g)
    if (mean_mse[g] < mean_mse[best]) best = g;
  double bar = mean_mse[best] + sd_mse[best] / std::sqrt(double(folds));
  CvChoice choice{grid[best], mean_mse[best]};
  for (std::size_t g = 0; g < grid.size(); ++g)
    if (mean_mse[g] <= bar && grid[g] < choice.n_hidden) {
      choice.n_hidden = grid[g];
      choice.mean_mse = mean_mse[g];
    }
  return choice;
}

}  // namespace detail

// Five-step evaluation of a feature subset: 80/20 split, train-only
// scaling, CV over the hidden-layer size, 100 averaged retrains scored by
// the relative error in original units, 20 repetitions.
inline EvalReport evaluate_subset(const Dataset& d,
                                  const std::vector<std::string>& features,
                                  const EvalProtocol& proto,
                                  unsigned threads = 0) {
  if (!d.has_target()) throw DataError("evaluate_subset needs a target");
  if (features.empty()) throw DataError("evaluate_subset: empty feature set");
  for (const auto& f : features) (void)d.index_of(f);

  auto start = std::chrono::steady_clock::now();
  EvalReport rep;
  for (int split = 0; split < proto.n_splits; ++split) {
    std::uint64_t split_seed = proto.seed + 104729u * static_cast<unsigned>(split);
    auto s = detail::make_split(d, features, split_seed);
    auto choice = detail::cross_validate(s.x_train, s.y_train_scaled, proto,
                                         split_seed + 1, threads);
    // Averaged predictions over independent retrains on the full train set.
    std::vector<Eigen::VectorXd> preds(static_cast<std::size_t>(proto.retrains));
    parallel_for(static_cast<std::size_t>(proto.retrains), threads,
                 [&](std::size_t r) {
                   ElmModel model = elm_fit(
                       s.x_train, s.y_train_scaled, choice.n_hidden,
                       split_seed + 31337u + r, proto.use_biases);
                   preds[r] = elm_predict(model, s.x_test);
                 });
    Eigen::VectorXd avg = Eigen::VectorXd::Zero(s.x_test.rows());
    for (const auto& p : preds) avg += p;
    avg /= static_cast<double>(proto.retrains);
    Eigen::VectorXd avg_original =
        (avg.array() * s.y_span + s.y_min).matrix();
    rep.re_per_split.push_back(relative_error(s.y_test_original, avg_original));
    rep.chosen_n_hidden.push_back(choice.n_hidden);
  }
  double mean = std::accumulate(rep.re_per_split.begin(),
                                rep.re_per_split.end(), 0.0) /
                static_cast<double>(rep.re_per_split.size());
  double var = 0.0;
  for (double v : rep.re_per_split) var += (v - mean) * (v - mean);
  rep.mean_re = mean;
  rep.sd_re = rep.re_per_split.size() > 1
                  ? std::sqrt(var / (rep.re_per_split.size() - 1))
                  : 0.0;
  rep.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return rep;
}

// Wrapper baseline: SFS scored by the cross-validated ELM MSE; returns the
// candidate set with the lowest MSE seen anywhere in the search.
inline std::vector<std::string> elm_sfs(const Dataset& d,
                                        const EvalProtocol& proto,
                                        int max_steps = 0,
                                        unsigned threads = 0) {
  if (!d.has_target()) throw DataError("elm_sfs needs a target");
  auto candidates = d.feature_names();
  int steps = max_steps > 0
                  ? std::min<int>(max_steps, static_cast<int>(candidates.size()))
                  : static_cast<int>(candidates.size());

  std::vector<std::string> selected, best_set;
  double best_mse = std::numeric_limits<double>::infinity();
  for (int step = 0; step < steps; ++step) {
    double step_best = std::numeric_limits<double>::infinity();
    std::size_t winner = 0;
    std::vector<double> scores(candidates.size());
    parallel_for(candidates.size(), threads, [&](std::size_t j) {
      std::vector<std::string> trial = selected;
      trial.push_back(candidates[j]);
      auto s = detail::make_split(d, trial, proto.seed);
      scores[j] = detail::cross_validate(s.x_train, s.y_train_scaled, proto,
                                         proto.seed + 1, 1)
                      .mean_mse;
    });
    for (std::size_t j = 0; j < candidates.size(); ++j)
      if (scores[j] < step_best) {
        step_best = scores[j];
        winner = j;
      }
    selected.push_back(candidates[winner]);
    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(winner));
    if (step_best < best_mse) {
      best_mse = step_best;
      best_set = selected;
    }
  }
  return best_set;
}

// Dataset-level convenience: fit on the (already rescaled) feature columns.
inline ElmModel elm_fit(const Dataset& train, int n_hidden, std::uint64_t seed,
                        bool use_biases = true) {
  auto features = train.feature_names();
  Eigen::MatrixXd x(train.n_rows(), features.size());
  for (std::size_t f = 0; f < features.size(); ++f) {
    const auto& col = train.column(features[f]);
    for (std::size_t r = 0; r < col.size(); ++r)
      x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(f)) = col[r];
  }
  const auto& y = train.target();
  return elm_fit(x,
                 Eigen::Map<const Eigen::VectorXd>(
                     y.data(), static_cast<Eigen::Index>(y.size())),
                 n_hidden, seed, use_biases);
}

}  // namespace mbfr
