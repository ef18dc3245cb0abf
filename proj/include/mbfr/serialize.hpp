#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mbfr/elm.hpp"
#include "mbfr/errors.hpp"
#include "mbfr/filter.hpp"
#include "mbfr/morisita.hpp"
#include "mbfr/simgen.hpp"

namespace mbfr {

using json = nlohmann::ordered_json;

inline json to_json(const IdEstimate& est) {
  json j;
  j["m"] = est.m;
  j["scales"] = est.scales_used;
  json points = json::array();
  for (const auto& [x, y] : est.points) points.push_back({x, y});
  j["log_points"] = points;
  j["slope"] = est.slope;
  j["intrinsic_dim"] = est.intrinsic_dim;
  j["embedding_dim"] = est.embedding_dim;
  j["warnings"] = est.warnings;
  return j;
}

inline json to_json(const SelectionTrace& trace) {
  json j;
  j["target_id"] = trace.target_id;
  j["scales"] = trace.scales.inverse_edges;
  j["c"] = trace.c;
  j["knee_step"] = knee_step(trace);
  json steps = json::array();
  for (const auto& s : trace.steps) {
    json step;
    step["feature"] = s.feature;
    step["diss"] = s.diss;
    step["id_with_target"] = s.id_with_target;
    step["id_without_target"] = s.id_without_target;
    json scores = json::object();
    for (const auto& [name, v] : s.candidate_scores) scores[name] = v;
    step["candidate_scores"] = scores;
    steps.push_back(step);
  }
  j["steps"] = steps;
  return j;
}

inline std::string trace_to_csv(const SelectionTrace& trace) {
  std::ostringstream os;
  os.precision(17);
  os << "step,feature,diss,id_with,id_without\n";
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    os << (i + 1) << "," << s.feature << "," << s.diss << ","
       << s.id_with_target << "," << s.id_without_target << "\n";
  }
  return os.str();
}

inline json to_json(const DrReport& rep) {
  json j;
  j["dr"] = rep.dr;
  j["dr_clipped"] = rep.dr_clipped;
  j["diss"] = rep.diss;
  j["target_id"] = rep.target_id;
  return j;
}

inline json to_json(const EvalReport& rep) {
  json j;
  j["mean_re"] = rep.mean_re;
  j["sd_re"] = rep.sd_re;
  j["re_per_split"] = rep.re_per_split;
  j["chosen_n_hidden"] = rep.chosen_n_hidden;
  j["runtime_seconds"] = rep.runtime_seconds;
  return j;
}

inline std::string eval_report_csv_row(const std::string& dataset_id,
                                       const std::string& subset_id,
                                       std::size_t n_features,
                                       const EvalReport& rep) {
  std::ostringstream os;
  os.precision(17);
  os << "dataset,subset,n_features,mean_re,sd_re\n"
     << dataset_id << "," << subset_id << "," << n_features << ","
     << rep.mean_re << "," << rep.sd_re << "\n";
  return os.str();
}

inline json to_json(const McSummary& s) {
  json j;
  j["sims"] = s.sims;
  j["mean_target_id"] = s.mean_target_id;
  j["sd_target_id"] = s.sd_target_id;
  j["mean_min_diss"] = s.mean_min_diss;
  j["sd_min_diss"] = s.sd_min_diss;
  json steps = json::array();
  for (const auto& st : s.steps) {
    json e;
    e["mean_diss"] = st.mean_diss;
    e["sd_diss"] = st.sd_diss;
    e["mean_id_with"] = st.mean_id_with;
    e["sd_id_with"] = st.sd_id_with;
    e["mean_id_without"] = st.mean_id_without;
    e["sd_id_without"] = st.sd_id_without;
    steps.push_back(e);
  }
  j["steps"] = steps;
  json counts = json::array();
  for (const auto& [sel, count] : s.first_k_counts) {
    json e;
    e["features"] = sel;
    e["count"] = count;
    counts.push_back(e);
  }
  j["first_k_counts"] = counts;
  return j;
}

// Per-seed first-k selections, one row per simulation.
inline std::string mc_first_k_csv(const McSummary& s, std::uint64_t base_seed) {
  std::ostringstream os;
  os << "seed,first_k,min_diss,target_id\n";
  os.precision(17);
  for (std::size_t i = 0; i < s.per_seed_first_k.size(); ++i) {
    os << (base_seed + i) << ",\"";
    const auto& sel = s.per_seed_first_k[i];
    for (std::size_t k = 0; k < sel.size(); ++k)
      os << (k ? ";" : "") << sel[k];
    os << "\"," << s.per_seed_min_diss[i] << "," << s.per_seed_target_id[i]
       << "\n";
  }
  return os.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot open for writing: " + path);
  os << text;
}

}  // namespace mbfr
