#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mbfr/dataset.hpp"
#include "mbfr/errors.hpp"
#include "mbfr/filter.hpp"
#include "mbfr/parallel.hpp"
#include "mbfr/rng.hpp"

namespace mbfr {

struct NeuronWeights {
  double w1 = 0.0;
  double w2 = 0.0;
  double beta = 0.0;
};

// Fixed hidden-layer weights of the butterfly generator.
inline constexpr std::array<NeuronWeights, 10> kButterflyWeights{{
    {0.6655, 0.8939, 1.3446},
    {1.2611, -0.3512, -0.0115},
    {0.3961, -1.7827, 1.2770},
    {-1.7065, -0.5297, 0.5962},
    {0.8807, 1.9574, -0.8530},
    {1.8260, 0.7962, -0.7290},
    {1.3400, 1.5001, 1.2339},
    {1.2919, -0.4462, 0.1186},
    {-1.3902, 1.6856, 0.5277},
    {0.0743, 1.5625, -0.6952},
}};

enum class Sigmoid { kLogistic, kTanh };

struct ButterflyConfig {
  std::size_t n = 10000;
  double noise_sd_fraction = 0.0;  // fraction of sd(noise-free Y)
  std::uint64_t seed = 0;
  Sigmoid sigmoid = Sigmoid::kLogistic;
  // Replaces the non-linear redundancies with pure linear ones: J columns
  // become copies of X1, I7/I8 copies of I6.
  bool linear_variant = false;
  std::array<NeuronWeights, 10> weights = kButterflyWeights;
};

struct FriedmanConfig {
  std::size_t n = 40000;
  double noise_sd = 1.0;
  std::uint64_t seed = 0;
};

inline double apply_sigmoid(Sigmoid s, double x) {
  return s == Sigmoid::kLogistic ? 1.0 / (1.0 + std::exp(-x)) : std::tanh(x);
}

// Noise-free butterfly response for one input point.
inline double butterfly_response(const ButterflyConfig& cfg, double x1,
                                 double x2) {
  double y = 0.0;
  for (const auto& nw : cfg.weights)
    y += nw.beta * apply_sigmoid(cfg.sigmoid, x1 * nw.w1 + x2 * nw.w2);
  return y;
}

// Butterfly dataset: 2 relevant, 3 redundant and 3 irrelevant features plus
// the target. X1, X2, I6 are i.i.d. Unif(-5,5); the noise sd is relative to
// the sd of the noise-free response of the sample at hand.
inline Dataset gen_butterfly(const ButterflyConfig& cfg) {
  if (cfg.n < 1) throw DataError("butterfly: n must be >= 1");
  if (cfg.noise_sd_fraction < 0.0 || cfg.noise_sd_fraction > 1.0)
    throw DataError("butterfly: noise fraction must lie in [0,1]");
  Rng rng(cfg.seed);
  const std::size_t n = cfg.n;
  std::vector<double> x1(n), x2(n), i6(n), y(n);
  for (std::size_t r = 0; r < n; ++r) {
    x1[r] = rng.uniform(-5.0, 5.0);
    x2[r] = rng.uniform(-5.0, 5.0);
    i6[r] = rng.uniform(-5.0, 5.0);
  }
  double mean = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    y[r] = butterfly_response(cfg, x1[r], x2[r]);
    mean += y[r];
  }
  mean /= static_cast<double>(n);
  if (cfg.noise_sd_fraction > 0.0 && n > 1) {
    double var = 0.0;
    for (double v : y) var += (v - mean) * (v - mean);
    double sd = std::sqrt(var / static_cast<double>(n - 1));
    for (std::size_t r = 0; r < n; ++r)
      y[r] += rng.gaussian(0.0, cfg.noise_sd_fraction * sd);
  }
  std::vector<double> j3(n), j4(n), j5(n), i7(n), i8(n);
  for (std::size_t r = 0; r < n; ++r) {
    if (cfg.linear_variant) {
      j3[r] = x1[r];
      j4[r] = x1[r];
      j5[r] = x1[r];
      i7[r] = i6[r];
      i8[r] = i6[r];
    } else {
      j3[r] = std::log10(x1[r] + 5.0);
      j4[r] = x1[r] * x1[r] - x2[r] * x2[r];
      j5[r] = std::pow(x1[r], 4) - std::pow(x2[r], 4);
      i7[r] = std::log10(i6[r] + 5.0);
      i8[r] = i6[r] + i7[r];
    }
  }
  return Dataset::from_columns(
      {"X1", "X2", "J3", "J4", "J5", "I6", "I7", "I8", "Y"},
      {std::move(x1), std::move(x2), std::move(j3), std::move(j4),
       std::move(j5), std::move(i6), std::move(i7), std::move(i8),
       std::move(y)},
      "Y");
}

// Friedman benchmark: Y = 10 sin(pi X1 X2) + 20 (X3 - 0.5)^2 + 10 X4 + 5 X5
// + eps, with five extra irrelevant Unif(0,1) features.
inline Dataset gen_friedman(const FriedmanConfig& cfg) {
  if (cfg.n < 1) throw DataError("friedman: n must be >= 1");
  Rng rng(cfg.seed);
  const std::size_t n = cfg.n;
  std::vector<std::vector<double>> cols(11, std::vector<double>(n));
  constexpr double kPi = 3.14159265358979323846;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < 10; ++c) cols[c][r] = rng.uniform(0.0, 1.0);
    cols[10][r] = 10.0 * std::sin(kPi * cols[0][r] * cols[1][r]) +
                  20.0 * (cols[2][r] - 0.5) * (cols[2][r] - 0.5) +
                  10.0 * cols[3][r] + 5.0 * cols[4][r] +
                  rng.gaussian(0.0, cfg.noise_sd);
  }
  return Dataset::from_columns(
      {"X1", "X2", "X3", "X4", "X5", "I6", "I7", "I8", "I9", "I10", "Y"},
      std::move(cols), "Y");
}

// One Monte Carlo experiment: generate, optionally shuffle the target, run
// the filter, extract the first-k selections and the dissimilarity profile.
struct ExperimentSpec {
  enum class Generator { kButterfly, kFriedman };
  Generator generator = Generator::kButterfly;
  ButterflyConfig butterfly;
  FriedmanConfig friedman;
  ScaleSet scales;
  int c = 1;
  bool shuffle_target = false;
  int first_k = 2;
};

struct StepStats {
  double mean_diss = 0.0, sd_diss = 0.0;
  double mean_id_with = 0.0, sd_id_with = 0.0;
  double mean_id_without = 0.0, sd_id_without = 0.0;
};

struct McSummary {
  int sims = 0;
  std::vector<StepStats> steps;
  std::map<std::vector<std::string>, int> first_k_counts;
  std::vector<std::vector<std::string>> per_seed_first_k;  // seed order
  std::vector<double> per_seed_min_diss;
  std::vector<double> per_seed_target_id;
  double mean_min_diss = 0.0, sd_min_diss = 0.0;
  double mean_target_id = 0.0, sd_target_id = 0.0;
};

namespace detail {

inline std::pair<double, double> mean_sd(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (v.size() < 2) return {mean, 0.0};
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  return {mean, std::sqrt(var / static_cast<double>(v.size() - 1))};
}

}  // namespace detail

inline SelectionTrace run_experiment(const ExperimentSpec& spec,
                                     std::uint64_t seed, unsigned threads = 0) {
  Dataset d;
  if (spec.generator == ExperimentSpec::Generator::kButterfly) {
    ButterflyConfig cfg = spec.butterfly;
    cfg.seed = seed;
    d = gen_butterfly(cfg);
  } else {
    FriedmanConfig cfg = spec.friedman;
    cfg.seed = seed;
    d = gen_friedman(cfg);
  }
  if (spec.shuffle_target) d = d.shuffle_target(seed + 1);
  return mbfr_select(d.rescale_unit(), spec.scales, spec.c, threads);
}

inline McSummary monte_carlo(const ExperimentSpec& spec, int sims,
                             std::uint64_t base_seed, unsigned threads = 0) {
  if (sims < 1) throw DataError("monte_carlo: sims must be >= 1");
  std::vector<SelectionTrace> traces(static_cast<std::size_t>(sims));
  // Simulations run in parallel; each candidate evaluation inside a trace
  // stays single-threaded to avoid oversubscription.
  parallel_for(static_cast<std::size_t>(sims), threads, [&](std::size_t i) {
    traces[i] = run_experiment(spec, base_seed + i, 1);
  });

  McSummary s;
  s.sims = sims;
  std::size_t n_steps = traces[0].steps.size();
  for (std::size_t step = 0; step < n_steps; ++step) {
    std::vector<double> diss, idw, idwo;
    for (const auto& t : traces) {
      diss.push_back(t.steps[step].diss);
      idw.push_back(t.steps[step].id_with_target);
      idwo.push_back(t.steps[step].id_without_target);
    }
    StepStats st;
    std::tie(st.mean_diss, st.sd_diss) = detail::mean_sd(diss);
    std::tie(st.mean_id_with, st.sd_id_with) = detail::mean_sd(idw);
    std::tie(st.mean_id_without, st.sd_id_without) = detail::mean_sd(idwo);
    s.steps.push_back(st);
  }
  for (const auto& t : traces) {
    auto sel = t.selected();
    std::vector<std::string> first(
        sel.begin(),
        sel.begin() + std::min<std::size_t>(sel.size(),
                                            static_cast<std::size_t>(spec.first_k)));
    s.first_k_counts[first] += 1;
    s.per_seed_first_k.push_back(first);
    s.per_seed_min_diss.push_back(t.min_diss());
    s.per_seed_target_id.push_back(t.target_id);
  }
  std::tie(s.mean_min_diss, s.sd_min_diss) = detail::mean_sd(s.per_seed_min_diss);
  std::tie(s.mean_target_id, s.sd_target_id) =
      detail::mean_sd(s.per_seed_target_id);
  return s;
}

}  // namespace mbfr
