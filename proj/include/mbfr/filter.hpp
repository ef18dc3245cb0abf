#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "mbfr/dataset.hpp"
#include "mbfr/errors.hpp"
#include "mbfr/morisita.hpp"
#include "mbfr/parallel.hpp"

namespace mbfr {

// One SFS step: the winning feature, its dissimilarity, both raw ID terms,
// and the score of every candidate evaluated at this step.
struct StepRecord {
  std::string feature;
  double diss = 0.0;
  double id_with_target = 0.0;
  double id_without_target = 0.0;
  std::map<std::string, double> candidate_scores;
};

struct SelectionTrace {
  std::vector<StepRecord> steps;
  double target_id = 0.0;  // M_2 of the target alone
  ScaleSet scales;
  int c = 0;

  std::vector<std::string> selected() const {
    std::vector<std::string> out;
    for (const auto& s : steps) out.push_back(s.feature);
    return out;
  }

  double min_diss() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& s : steps) m = std::min(m, s.diss);
    return m;
  }
};

struct DissResult {
  double diss = 0.0;
  double id_with_target = 0.0;
  double id_without_target = 0.0;
};

struct DrReport {
  double dr = 0.0;          // raw, may exceed [0,1] through estimation noise
  double dr_clipped = 0.0;  // clamped companion
  double diss = 0.0;
  double target_id = 0.0;
};

// Diss(F,Y) = M_2(F,Y) - M_2(F), both terms estimated with the same scale
// set and m = 2.
inline DissResult dissimilarity(const Dataset& d,
                                const std::vector<std::string>& features,
                                const ScaleSet& scales) {
  if (!d.has_target()) throw DataError("dissimilarity needs a target column");
  std::vector<std::string> with = features;
  with.push_back(d.target_name());
  IdEstimate id_with = mindid(view_of(d, with), 2, scales);
  IdEstimate id_without = mindid(view_of(d, features), 2, scales);
  DissResult r;
  r.id_with_target = id_with.intrinsic_dim;
  r.id_without_target = id_without.intrinsic_dim;
  r.diss = r.id_with_target - r.id_without_target;
  return r;
}

inline double target_intrinsic_dim(const Dataset& d, const ScaleSet& scales) {
  return mindid(view_of(d, {d.target_name()}), 2, scales).intrinsic_dim;
}

// Sequential forward selection minimizing the estimated dissimilarity.
// Candidate evaluations within a step run in parallel; the argmin is taken
// in original column order, which also breaks ties.
inline SelectionTrace mbfr_select(const Dataset& d, const ScaleSet& scales,
                                  int c, unsigned threads = 0) {
  if (!d.has_target()) throw DataError("mbfr_select needs a target column");
  auto candidates = d.feature_names();
  const int max_c = static_cast<int>(candidates.size());
  if (c < 1 || c > max_c)
    throw DataError("C must be in [1, E-1]");

  SelectionTrace trace;
  trace.scales = scales;
  trace.c = c;
  trace.target_id = target_intrinsic_dim(d, scales);

  std::vector<std::string> selected;
  for (int step = 0; step < c; ++step) {
    std::vector<DissResult> scores(candidates.size());
    parallel_for(candidates.size(), threads, [&](std::size_t j) {
      std::vector<std::string> trial = selected;
      trial.push_back(candidates[j]);
      scores[j] = dissimilarity(d, trial, scales);
    });
    std::size_t winner = 0;
    for (std::size_t j = 1; j < candidates.size(); ++j)
      if (scores[j].diss < scores[winner].diss) winner = j;

    StepRecord rec;
    rec.feature = candidates[winner];
    rec.diss = scores[winner].diss;
    rec.id_with_target = scores[winner].id_with_target;
    rec.id_without_target = scores[winner].id_without_target;
    for (std::size_t j = 0; j < candidates.size(); ++j)
      rec.candidate_scores[candidates[j]] = scores[j].diss;
    trace.steps.push_back(std::move(rec));

    selected.push_back(candidates[winner]);
    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(winner));
  }
  return trace;
}

// DR(F,Y) = 1 - Diss(F,Y) / ID(Y).
inline DrReport dimensional_relevance(const Dataset& d,
                                      const std::vector<std::string>& features,
                                      const ScaleSet& scales) {
  DrReport rep;
  rep.target_id = target_intrinsic_dim(d, scales);
  if (rep.target_id <= 0.0)
    throw NumericError("dimensional relevance: degenerate target (ID <= 0)");
  rep.diss = dissimilarity(d, features, scales).diss;
  rep.dr = 1.0 - rep.diss / rep.target_id;
  rep.dr_clipped = std::clamp(rep.dr, 0.0, 1.0);
  return rep;
}

// Redundancy score of a rejected feature against the selected set Z:
// 1 - [M_2(Z + rejected) - M_2(Z)] / M_2(rejected), clipped to [0,1].
// 1 means fully redundant, 0 fully irrelevant.
inline double classify_rejected(const Dataset& d,
                                const std::vector<std::string>& selected,
                                const std::string& rejected,
                                const ScaleSet& scales) {
  if (selected.empty())
    throw DataError("classify_rejected needs a non-empty selected set");
  for (const auto& s : selected)
    if (s == rejected)
      throw DataError("rejected feature is among the selected set");
  double standalone =
      mindid(view_of(d, {rejected}), 2, scales).intrinsic_dim;
  if (standalone <= 0.0)
    throw NumericError("classify_rejected: rejected feature has ID <= 0");
  std::vector<std::string> with = selected;
  with.push_back(rejected);
  double delta = mindid(view_of(d, with), 2, scales).intrinsic_dim -
                 mindid(view_of(d, selected), 2, scales).intrinsic_dim;
  return std::clamp(1.0 - delta / standalone, 0.0, 1.0);
}

inline double classify_rejected(const Dataset& d, const SelectionTrace& trace,
                                const std::string& rejected,
                                const ScaleSet& scales) {
  return classify_rejected(d, trace.selected(), rejected, scales);
}

// Heuristic cut-off suggestion: first step whose dissimilarity comes within
// 0.05 * M_2(Y) of the profile minimum. Reported, never enforced.
inline int knee_step(const SelectionTrace& trace) {
  if (trace.steps.empty()) throw DataError("knee_step: empty trace");
  double eps = 0.05 * trace.target_id;
  double min_diss = trace.min_diss();
  for (std::size_t i = 0; i < trace.steps.size(); ++i)
    if (trace.steps[i].diss <= min_diss + eps) return static_cast<int>(i) + 1;
  return static_cast<int>(trace.steps.size());
}

}  // namespace mbfr
