// Acceptance suite: one pass/fail line per criterion. Exits non-zero when
// any required criterion fails. The real-data criterion is skipped when the
// Abalone CSV is not available locally (set MBFR_ABALONE_CSV to run it).

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mbfr/dataset.hpp"
#include "mbfr/elm.hpp"
#include "mbfr/filter.hpp"
#include "mbfr/morisita.hpp"
#include "mbfr/parallel.hpp"
#include "mbfr/simgen.hpp"

using namespace mbfr;

namespace {

int g_failures = 0;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void report(int id, const std::string& name, bool pass,
            const std::string& detail, double seconds) {
  std::ostringstream os;
  os << (pass ? "[PASS] " : "[FAIL] ") << id << ". " << name << " — "
     << detail << " (" << std::fixed;
  os.precision(1);
  os << seconds << " s)";
  std::cout << os.str() << std::endl;
  if (!pass) ++g_failures;
}

void report_skip(int id, const std::string& name, const std::string& why) {
  std::cout << "[SKIP] " << id << ". " << name << " — " << why << std::endl;
}

std::vector<double> uniform_column(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

// ---- 1. uniform-manifold intrinsic dimensions ----
void criterion_1() {
  Timer t;
  ScaleSet scales = ScaleSet::range(5, 20);
  double worst_1d = 0.0, worst_2d = 0.0, worst_diag = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto a = uniform_column(10000, 1000 + seed);
    auto b = uniform_column(10000, 2000 + seed);
    double m1 = mindid(Dataset::from_columns({"x"}, {a}, "x"), 2, scales)
                    .intrinsic_dim;
    double m2 =
        mindid(Dataset::from_columns({"x", "y"}, {a, b}, "y"), 2, scales)
            .intrinsic_dim;
    double md =
        mindid(Dataset::from_columns({"x", "y"}, {a, a}, "y"), 2, scales)
            .intrinsic_dim;
    worst_1d = std::max(worst_1d, std::abs(m1 - 1.0));
    worst_2d = std::max(worst_2d, std::abs(m2 - 2.0));
    worst_diag = std::max(worst_diag, std::abs(md - 1.0));
  }
  bool pass = worst_1d <= 0.05 && worst_2d <= 0.05 && worst_diag <= 0.05 &&
              t.seconds() < 5.0;
  std::ostringstream d;
  d.precision(3);
  d << "max |error|: 1-D " << worst_1d << ", 2-D " << worst_2d << ", diagonal "
    << worst_diag;
  report(1, "uniform-manifold ID", pass, d.str(), t.seconds());
}

// ---- 2 & 3. butterfly first-two selection and DR ----
void criteria_2_3() {
  Timer t;
  const int sims = 20;
  std::vector<int> hit(sims, 0);
  std::vector<double> dr(sims, 0.0);
  ScaleSet scales = ScaleSet::range(5, 20);
  parallel_for(sims, 0, [&](std::size_t i) {
    ButterflyConfig cfg;
    cfg.n = 10000;
    cfg.seed = 3000 + i;
    Dataset d = gen_butterfly(cfg).rescale_unit();
    auto trace = mbfr_select(d, scales, 2, 1);
    hit[i] = (trace.steps[0].feature == "X1" && trace.steps[1].feature == "X2")
                 ? 1
                 : 0;
    dr[i] = dimensional_relevance(d, {"X1", "X2"}, scales).dr;
  });
  int hits = 0;
  double dr_mean = 0.0;
  for (int i = 0; i < sims; ++i) {
    hits += hit[i];
    dr_mean += dr[i];
  }
  dr_mean /= sims;
  double secs = t.seconds();
  std::ostringstream d2;
  d2 << "(X1,X2) first in " << hits << "/" << sims;
  report(2, "butterfly first-two selection", hits >= 19 && secs < 120.0,
         d2.str(), secs);
  std::ostringstream d3;
  d3.precision(3);
  d3 << "mean DR({X1,X2}) = " << dr_mean;
  report(3, "butterfly DR", std::abs(dr_mean - 0.97) <= 0.03, d3.str(), secs);
}

// ---- 4. noise robustness ----
void criterion_4() {
  Timer t;
  const int sims = 20;
  const std::vector<double> noise = {0.0, 0.25, 1.0};
  const std::vector<double> paper_min_diss = {0.02, 0.55, 0.85};
  ScaleSet scales = ScaleSet::range(5, 20);
  bool first_ok = true;
  std::vector<double> mean_min(noise.size(), 0.0);
  std::string bad_first;
  for (std::size_t lvl = 0; lvl < noise.size(); ++lvl) {
    std::vector<double> mins(sims, 0.0);
    std::vector<std::string> firsts(sims);
    parallel_for(sims, 0, [&](std::size_t i) {
      ButterflyConfig cfg;
      cfg.n = 10000;
      cfg.seed = 4000 + 100 * lvl + i;
      cfg.noise_sd_fraction = noise[lvl];
      auto trace = mbfr_select(gen_butterfly(cfg).rescale_unit(), scales, 8, 1);
      mins[i] = trace.min_diss();
      firsts[i] = trace.steps[0].feature;
    });
    for (int i = 0; i < sims; ++i) {
      mean_min[lvl] += mins[i];
      if (firsts[i] != "X1" && firsts[i] != "X2" && firsts[i] != "J3") {
        first_ok = false;
        bad_first = firsts[i];
      }
    }
    mean_min[lvl] /= sims;
  }
  bool within = true;
  for (std::size_t lvl = 0; lvl < noise.size(); ++lvl)
    within = within && std::abs(mean_min[lvl] - paper_min_diss[lvl]) <= 0.15;
  bool increasing = mean_min[0] < mean_min[1] && mean_min[1] < mean_min[2];
  double secs = t.seconds();
  std::ostringstream d;
  d.precision(3);
  d << "mean min(diss) = {" << mean_min[0] << ", " << mean_min[1] << ", "
    << mean_min[2] << "} vs {0.02, 0.55, 0.85}";
  if (!first_ok) d << "; irrelevant feature selected first: " << bad_first;
  report(4, "noise robustness", first_ok && within && increasing && secs < 600.0,
         d.str(), secs);
}

// ---- 5. friedman relevance ----
void criterion_5() {
  Timer t;
  const int sims = 5;
  ScaleSet scales = ScaleSet::range(1, 6);
  std::vector<int> ok(sims, 0);
  parallel_for(sims, 0, [&](std::size_t i) {
    FriedmanConfig cfg;
    cfg.n = 40000;
    cfg.seed = 5000 + i;
    auto trace = mbfr_select(gen_friedman(cfg).rescale_unit(), scales, 5, 1);
    auto order = trace.selected();
    std::set<std::string> first_five(order.begin(), order.end());
    ok[i] = (first_five ==
             std::set<std::string>{"X1", "X2", "X3", "X4", "X5"})
                ? 1
                : 0;
  });
  int good = 0;
  for (int v : ok) good += v;
  double secs = t.seconds();
  std::ostringstream d;
  d << "X1..X5 fill the first five positions in " << good << "/" << sims
    << " sims";
  report(5, "friedman relevance", good == sims && secs < 300.0, d.str(), secs);
}

// ---- 6. shuffled-target null ----
void criterion_6() {
  Timer t;
  const int sims = 20;
  ScaleSet scales = ScaleSet::range(5, 20);
  std::vector<double> ratio(sims, 0.0);
  parallel_for(sims, 0, [&](std::size_t i) {
    ButterflyConfig cfg;
    cfg.n = 10000;
    cfg.seed = 6000 + i;
    Dataset d = gen_butterfly(cfg).shuffle_target(6100 + i).rescale_unit();
    auto trace = mbfr_select(d, scales, 8, 1);
    ratio[i] = trace.min_diss() / trace.target_id;
  });
  double worst = 1e9;
  for (double r : ratio) worst = std::min(worst, r);
  double secs = t.seconds();
  std::ostringstream d;
  d.precision(3);
  d << "min over sims of min(diss)/M2(Y) = " << worst << " (need >= 0.7)";
  report(6, "shuffled-target null", worst >= 0.7 && secs < 120.0, d.str(),
         secs);
}

// ---- 7. redundancy/irrelevance diagnostic ----
void criterion_7() {
  Timer t;
  const int sims = 20;
  ScaleSet scales = ScaleSet::range(5, 20);
  std::vector<double> j3_score(sims, 0.0), i6_score(sims, 0.0);
  parallel_for(sims, 0, [&](std::size_t i) {
    ButterflyConfig cfg;
    cfg.n = 10000;
    cfg.seed = 7000 + i;
    Dataset d = gen_butterfly(cfg).rescale_unit();
    j3_score[i] = classify_rejected(d, {"X1"}, "J3", scales);
    i6_score[i] = classify_rejected(d, {"X1", "X2"}, "I6", scales);
  });
  double worst_j3 = 1.0, worst_i6 = 0.0;
  for (int i = 0; i < sims; ++i) {
    worst_j3 = std::min(worst_j3, j3_score[i]);
    worst_i6 = std::max(worst_i6, i6_score[i]);
  }
  double secs = t.seconds();
  std::ostringstream d;
  d.precision(3);
  d << "min score(J3) = " << worst_j3 << " (need >= 0.8), max score(I6) = "
    << worst_i6 << " (need <= 0.2)";
  report(7, "redundancy/irrelevance diagnostic",
         worst_j3 >= 0.8 && worst_i6 <= 0.2 && secs < 120.0, d.str(), secs);
}

// ---- 8. brute-force oracle ----
double dense_morisita_index(const std::vector<std::vector<double>>& cols,
                            int m, int k) {
  const std::size_t dims = cols.size();
  const std::size_t n = cols[0].size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < dims; ++i) total *= static_cast<std::size_t>(k);
  std::vector<std::size_t> counts(total, 0);
  for (std::size_t r = 0; r < n; ++r) {
    std::size_t idx = 0;
    for (std::size_t c = 0; c < dims; ++c) {
      auto cell = static_cast<std::size_t>(cols[c][r] * k);
      if (cell >= static_cast<std::size_t>(k)) cell = k - 1;
      idx = idx * k + cell;
    }
    counts[idx] += 1;
  }
  double sum = 0.0;
  for (std::size_t q = 0; q < total; ++q)
    if (counts[q] >= static_cast<std::size_t>(m)) {
      double p = 1.0;
      for (int i = 0; i < m; ++i) p *= static_cast<double>(counts[q]) - i;
      sum += p;
    }
  double falling_n = 1.0;
  for (int i = 0; i < m; ++i) falling_n *= static_cast<double>(n - i);
  return std::pow(std::pow(static_cast<double>(k), static_cast<double>(dims)),
                  m - 1) *
         sum / falling_n;
}

void criterion_8() {
  Timer t;
  std::mt19937_64 rng(808);
  std::uniform_int_distribution<int> n_dist(3, 200);
  std::uniform_int_distribution<int> e_dist(1, 3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    int n = n_dist(rng), e = e_dist(rng);
    std::vector<std::vector<double>> cols(e, std::vector<double>(n));
    std::vector<std::string> names;
    for (int c = 0; c < e; ++c) {
      names.push_back("c" + std::to_string(c));
      for (int r = 0; r < n; ++r) {
        double v = u(rng);
        if (r > 0 && r % 5 == 0) v = cols[c][r - 1];
        if (r % 13 == 0) v = 1.0;
        cols[c][r] = v;
      }
    }
    Dataset d = Dataset::from_columns(names, cols, names[0]);
    for (int m : {2, 3})
      for (int k = 1; k <= 8; ++k)
        if (morisita_index(d, m, k) != dense_morisita_index(cols, m, k))
          ++mismatches;
  }
  double secs = t.seconds();
  std::ostringstream d;
  d << mismatches << " mismatches over 200 datasets x {m=2,3} x {k=1..8}";
  report(8, "brute-force oracle (bitwise)", mismatches == 0 && secs < 10.0,
         d.str(), secs);
}

// ---- 9. relative error definitional checks ----
void criterion_9() {
  Timer t;
  std::vector<double> y = {0, 1, 2};
  bool pass = relative_error(y, y) == 0.0 &&
              relative_error(y, std::vector<double>{1, 1, 1}) == 1.0 &&
              relative_error(y, std::vector<double>{0, 0, 0}) == 2.5;
  report(9, "relative error definitional checks", pass,
         "perfect = 0, mean = 1, hand example = 2.5", t.seconds());
}

// ---- 10. Abalone real-data reproduction (optional network) ----
void criterion_10() {
  const char* env = std::getenv("MBFR_ABALONE_CSV");
  std::string path = env ? env : "data/abalone.csv";
  std::ifstream probe(path);
  if (!probe.good()) {
    report_skip(10, "Abalone reproduction",
                "dataset not available; set MBFR_ABALONE_CSV to a CSV with "
                "header and 7 numeric features plus target 'Rings' "
                "(preprocessing: drop the Sex column and original instances "
                "1418 and 2052)");
    return;
  }
  Timer t;
  Dataset d = load_csv(path, "Rings");
  Dataset r = d.rescale_unit();
  ScaleSet scales({4, 8, 16, 32, 64});
  auto trace = mbfr_select(r, scales, static_cast<int>(d.n_cols()) - 1);
  int knee = knee_step(trace);
  auto order = trace.selected();
  std::vector<std::string> chosen(order.begin(), order.begin() + knee);
  auto dr = dimensional_relevance(r, chosen, scales);
  EvalProtocol proto;
  auto rep = evaluate_subset(d, chosen, proto);
  bool pass = knee == 3 && std::abs(dr.dr - 0.46) <= 0.08 &&
              std::abs(rep.mean_re - 0.46) <= 0.08;
  std::ostringstream det;
  det.precision(3);
  det << "selected " << knee << " features, DR = " << dr.dr
      << ", mean RE_tst = " << rep.mean_re;
  report(10, "Abalone reproduction", pass, det.str(), t.seconds());
}

}  // namespace

int main() {
  criterion_1();
  criteria_2_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (g_failures > 0) {
    std::cout << g_failures << " criterion(s) failed" << std::endl;
    return 1;
  }
  std::cout << "all criteria passed" << std::endl;
  return 0;
}
