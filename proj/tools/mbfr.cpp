// Command-line front end: dataset generation, scale selection, intrinsic
// dimension estimation, MBFR feature selection and ELM-based evaluation.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mbfr/dataset.hpp"
#include "mbfr/elm.hpp"
#include "mbfr/errors.hpp"
#include "mbfr/filter.hpp"
#include "mbfr/morisita.hpp"
#include "mbfr/serialize.hpp"
#include "mbfr/simgen.hpp"
#include "mbfr/svg.hpp"

namespace {

struct GlobalFlags {
  bool json = false;
  bool quiet = false;
  unsigned threads = 0;
};

void say(const GlobalFlags& g, const std::string& msg) {
  if (!g.quiet) std::cout << msg << "\n";
}

std::vector<std::string> split_names(const std::string& csv) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    auto comma = csv.find(',', pos);
    if (comma == std::string::npos) comma = csv.size();
    if (comma > pos) out.push_back(csv.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return out;
}

mbfr::ScaleSet scales_or_choose(const std::string& scales_arg,
                                const mbfr::Dataset& rescaled,
                                bool prefer_steepest,
                                std::vector<std::string>* warnings) {
  if (!scales_arg.empty()) return mbfr::ScaleSet::parse(scales_arg);
  auto choice = mbfr::choose_scales(rescaled, 130, prefer_steepest);
  if (warnings)
    warnings->insert(warnings->end(), choice.warnings.begin(),
                     choice.warnings.end());
  return choice.scales;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Morisita-based intrinsic dimension estimation and feature "
               "selection for regression"};
  app.require_subcommand(1);
  app.fallthrough();  // let --json/--quiet/--threads appear after a subcommand

  GlobalFlags g;
  app.add_flag("--json", g.json, "machine-readable JSON on stdout");
  app.add_flag("--quiet", g.quiet, "suppress informational output");
  app.add_option("--threads", g.threads,
                 "worker threads (0 = machine parallelism)");

  // ---- generate ----
  auto* gen = app.add_subcommand("generate", "write a simulated dataset CSV");
  std::string gen_kind, gen_out = "dataset.csv", gen_sig = "logistic";
  std::size_t gen_n = 10000;
  double gen_noise = 0.0;
  std::uint64_t gen_seed = 0;
  bool gen_linear = false, gen_shuffle = false;
  gen->add_option("kind", gen_kind, "butterfly or friedman")->required();
  gen->add_option("--n", gen_n, "sample size");
  gen->add_option("--noise", gen_noise,
                  "butterfly: fraction of sd(Y); friedman: noise sd");
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_option("--out", gen_out, "output CSV path");
  gen->add_option("--sig", gen_sig, "butterfly sigmoid: logistic or tanh");
  gen->add_flag("--linear-variant", gen_linear,
                "butterfly: pure linear redundancies");
  gen->add_flag("--shuffle-target", gen_shuffle,
                "shuffle Y after generation (null model)");

  // ---- estimate-id ----
  auto* est = app.add_subcommand("estimate-id",
                                 "Morisita intrinsic dimension of a dataset");
  std::string est_in, est_scales, est_cols, est_out_dir = ".";
  std::string est_target;
  int est_m = 2;
  est->add_option("--input", est_in, "input CSV")->required();
  est->add_option("--target", est_target, "target column (informational)");
  est->add_option("--scales", est_scales, "scale set, e.g. 5..20 or 1,2,4,8");
  est->add_option("--columns", est_cols, "comma-separated column subset");
  est->add_option("--m", est_m, "index order m (>= 2)");
  est->add_option("--out-dir", est_out_dir, "directory for JSON/SVG output");

  // ---- choose-scales ----
  auto* cho = app.add_subcommand("choose-scales",
                                 "select analysis scales from the data");
  std::string cho_in, cho_target;
  int cho_probe = 130;
  bool cho_steepest = false;
  cho->add_option("--input", cho_in, "input CSV")->required();
  cho->add_option("--target", cho_target, "target column")->required();
  cho->add_option("--probe-max", cho_probe, "largest probed inverse edge");
  cho->add_flag("--prefer-steepest", cho_steepest,
                "on ties, keep the steepest near-linear window");

  // ---- select ----
  auto* sel = app.add_subcommand("select", "MBFR sequential forward selection");
  std::string sel_in, sel_target, sel_scales, sel_out_dir = ".";
  int sel_c = 0;
  bool sel_steepest = false, sel_drop = false;
  sel->add_option("--input", sel_in, "input CSV")->required();
  sel->add_option("--target", sel_target, "target column")->required();
  sel->add_option("--scales", sel_scales, "scale set (default: chosen)");
  sel->add_option("--c", sel_c, "SFS steps (default E-1)");
  sel->add_option("--out-dir", sel_out_dir, "directory for outputs");
  sel->add_flag("--prefer-steepest", sel_steepest,
                "scale choice tie-break (see choose-scales)");
  sel->add_flag("--drop-incomplete", sel_drop,
                "drop rows with non-finite cells instead of failing");

  // ---- dr ----
  auto* drc = app.add_subcommand("dr", "coefficient of dimensional relevance");
  std::string dr_in, dr_target, dr_scales, dr_features;
  drc->add_option("--input", dr_in, "input CSV")->required();
  drc->add_option("--target", dr_target, "target column")->required();
  drc->add_option("--features", dr_features, "comma-separated feature set")
      ->required();
  drc->add_option("--scales", dr_scales, "scale set (default: chosen)");

  // ---- classify ----
  auto* cls = app.add_subcommand(
      "classify", "redundancy/irrelevance score of a rejected feature");
  std::string cls_in, cls_target, cls_scales, cls_selected, cls_rejected;
  cls->add_option("--input", cls_in, "input CSV")->required();
  cls->add_option("--target", cls_target, "target column")->required();
  cls->add_option("--selected", cls_selected, "comma-separated selected set")
      ->required();
  cls->add_option("--rejected", cls_rejected, "rejected feature")->required();
  cls->add_option("--scales", cls_scales, "scale set (default: chosen)");

  // ---- montecarlo ----
  auto* mc = app.add_subcommand("montecarlo",
                                "seeded simulation ensemble of the filter");
  std::string mc_gen = "butterfly", mc_scales, mc_out_dir = ".", mc_sig = "logistic";
  std::size_t mc_n = 10000;
  double mc_noise = 0.0;
  int mc_sims = 20, mc_c = 0, mc_first_k = 2;
  std::uint64_t mc_seed = 0;
  bool mc_shuffle = false;
  mc->add_option("--generator", mc_gen, "butterfly or friedman");
  mc->add_option("--n", mc_n, "sample size");
  mc->add_option("--noise", mc_noise, "noise level (see generate)");
  mc->add_option("--sims", mc_sims, "number of simulations");
  mc->add_option("--seed", mc_seed, "base seed");
  mc->add_option("--scales", mc_scales, "scale set")->required();
  mc->add_option("--c", mc_c, "SFS steps (default E-1)");
  mc->add_option("--first-k", mc_first_k, "record the first k selections");
  mc->add_option("--sig", mc_sig, "butterfly sigmoid: logistic or tanh");
  mc->add_flag("--shuffle-target", mc_shuffle, "shuffle Y in each simulation");
  mc->add_option("--out-dir", mc_out_dir, "directory for outputs");

  // ---- evaluate ----
  auto* ev = app.add_subcommand("evaluate",
                                "ELM evaluation of a feature subset");
  std::string ev_in, ev_target, ev_features, ev_out_dir = ".", ev_id = "subset";
  int ev_splits = 20, ev_retrains = 100, ev_folds = 10;
  std::uint64_t ev_seed = 0;
  bool ev_full_grid = false, ev_no_bias = false, ev_sfs = false, ev_drop = false;
  ev->add_option("--input", ev_in, "input CSV")->required();
  ev->add_option("--target", ev_target, "target column")->required();
  ev->add_option("--features", ev_features,
                 "comma-separated subset (omit with --elm-sfs)");
  ev->add_option("--splits", ev_splits, "outer train/test repetitions");
  ev->add_option("--retrains", ev_retrains, "models averaged per split");
  ev->add_option("--folds", ev_folds, "cross-validation folds");
  ev->add_option("--seed", ev_seed, "protocol seed");
  ev->add_option("--subset-id", ev_id, "label used in the CSV report");
  ev->add_flag("--full-grid", ev_full_grid, "search every hidden size 1..350");
  ev->add_flag("--no-biases", ev_no_bias, "disable hidden biases");
  ev->add_flag("--elm-sfs", ev_sfs, "run the ELM_SFS wrapper baseline instead");
  ev->add_option("--out-dir", ev_out_dir, "directory for outputs");
  ev->add_flag("--drop-incomplete", ev_drop,
               "drop rows with non-finite cells instead of failing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: usage: " << e.what() << "\n";
    return 1;
  }

  try {
    if (*gen) {
      mbfr::Dataset d;
      if (gen_kind == "butterfly") {
        mbfr::ButterflyConfig cfg;
        cfg.n = gen_n;
        cfg.noise_sd_fraction = gen_noise;
        cfg.seed = gen_seed;
        cfg.linear_variant = gen_linear;
        cfg.sigmoid =
            gen_sig == "tanh" ? mbfr::Sigmoid::kTanh : mbfr::Sigmoid::kLogistic;
        d = mbfr::gen_butterfly(cfg);
      } else if (gen_kind == "friedman") {
        mbfr::FriedmanConfig cfg;
        cfg.n = gen_n;
        cfg.noise_sd = gen_noise > 0.0 ? gen_noise : 1.0;
        cfg.seed = gen_seed;
        d = mbfr::gen_friedman(cfg);
      } else {
        std::cerr << "error: usage: unknown generator " << gen_kind << "\n";
        return 1;
      }
      if (gen_shuffle) d = d.shuffle_target(gen_seed + 1);
      d.write_csv(gen_out);
      say(g, "wrote " + gen_out + " (" + std::to_string(d.n_rows()) +
                 " rows, " + std::to_string(d.n_cols()) + " columns)");
      if (g.json) {
        mbfr::json j;
        j["path"] = gen_out;
        j["rows"] = d.n_rows();
        j["columns"] = d.n_cols();
        std::cout << j.dump(2) << "\n";
      }
      return 0;
    }

    if (*est) {
      mbfr::Dataset d = mbfr::load_csv(est_in, est_target.empty()
                                                   ? std::string()
                                                   : est_target)
                            .rescale_unit();
      if (!est_cols.empty()) d = d.subset(split_names(est_cols));
      std::vector<std::string> warnings;
      mbfr::ScaleSet scales = scales_or_choose(est_scales, d, false, &warnings);
      mbfr::IdEstimate e = mbfr::mindid(d, est_m, scales);
      e.warnings.insert(e.warnings.begin(), warnings.begin(), warnings.end());
      std::filesystem::create_directories(est_out_dir);
      auto j = mbfr::to_json(e);
      mbfr::write_text(est_out_dir + "/id_estimate.json", j.dump(2) + "\n");
      mbfr::emit_loglog_svg(e, est_out_dir + "/id_loglog.svg");
      say(g, "M_" + std::to_string(e.m) + " = " +
                 std::to_string(e.intrinsic_dim) + " (slope " +
                 std::to_string(e.slope) + ", E = " +
                 std::to_string(e.embedding_dim) + ")");
      if (g.json) std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (*cho) {
      mbfr::Dataset d = mbfr::load_csv(cho_in, cho_target).rescale_unit();
      auto choice = mbfr::choose_scales(d, cho_probe, cho_steepest);
      mbfr::json j;
      j["scales"] = choice.scales.inverse_edges;
      j["window"] = {choice.window_lo, choice.window_hi};
      j["r2"] = choice.r2;
      j["warnings"] = choice.warnings;
      std::ostringstream msg;
      msg << "scales:";
      for (int k : choice.scales.inverse_edges) msg << " " << k;
      say(g, msg.str());
      if (g.json) std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (*sel) {
      mbfr::Dataset d =
          mbfr::load_csv(sel_in, sel_target, sel_drop).rescale_unit();
      std::vector<std::string> warnings;
      mbfr::ScaleSet scales =
          scales_or_choose(sel_scales, d, sel_steepest, &warnings);
      int c = sel_c > 0 ? sel_c : static_cast<int>(d.n_cols()) - 1;
      mbfr::SelectionTrace trace = mbfr::mbfr_select(d, scales, c, g.threads);
      std::filesystem::create_directories(sel_out_dir);
      auto j = mbfr::to_json(trace);
      if (!warnings.empty()) j["scale_warnings"] = warnings;
      mbfr::write_text(sel_out_dir + "/trace.json", j.dump(2) + "\n");
      mbfr::write_text(sel_out_dir + "/trace.csv", mbfr::trace_to_csv(trace));
      mbfr::emit_profile_svg(trace, sel_out_dir + "/profile.svg");
      std::ostringstream msg;
      msg << "selected:";
      for (const auto& f : trace.selected()) msg << " " << f;
      msg << " (knee at step " << mbfr::knee_step(trace) << ")";
      say(g, msg.str());
      if (g.json) std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (*drc) {
      mbfr::Dataset d = mbfr::load_csv(dr_in, dr_target).rescale_unit();
      mbfr::ScaleSet scales = scales_or_choose(dr_scales, d, false, nullptr);
      auto rep =
          mbfr::dimensional_relevance(d, split_names(dr_features), scales);
      auto j = mbfr::to_json(rep);
      say(g, "DR = " + std::to_string(rep.dr) + " (diss " +
                 std::to_string(rep.diss) + ", ID(Y) " +
                 std::to_string(rep.target_id) + ")");
      if (g.json) std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (*cls) {
      mbfr::Dataset d = mbfr::load_csv(cls_in, cls_target).rescale_unit();
      mbfr::ScaleSet scales = scales_or_choose(cls_scales, d, false, nullptr);
      double score = mbfr::classify_rejected(d, split_names(cls_selected),
                                             cls_rejected, scales);
      say(g, "redundancy score of " + cls_rejected + " = " +
                 std::to_string(score) + " (1 redundant, 0 irrelevant)");
      if (g.json) {
        mbfr::json j;
        j["rejected"] = cls_rejected;
        j["redundancy_score"] = score;
        std::cout << j.dump(2) << "\n";
      }
      return 0;
    }

    if (*mc) {
      mbfr::ExperimentSpec spec;
      if (mc_gen == "butterfly") {
        spec.generator = mbfr::ExperimentSpec::Generator::kButterfly;
        spec.butterfly.n = mc_n;
        spec.butterfly.noise_sd_fraction = mc_noise;
        spec.butterfly.sigmoid = mc_sig == "tanh" ? mbfr::Sigmoid::kTanh
                                                  : mbfr::Sigmoid::kLogistic;
        spec.c = mc_c > 0 ? mc_c : 8;
      } else if (mc_gen == "friedman") {
        spec.generator = mbfr::ExperimentSpec::Generator::kFriedman;
        spec.friedman.n = mc_n;
        if (mc_noise > 0.0) spec.friedman.noise_sd = mc_noise;
        spec.c = mc_c > 0 ? mc_c : 10;
      } else {
        std::cerr << "error: usage: unknown generator " << mc_gen << "\n";
        return 1;
      }
      spec.scales = mbfr::ScaleSet::parse(mc_scales);
      spec.shuffle_target = mc_shuffle;
      spec.first_k = mc_first_k;
      auto summary = mbfr::monte_carlo(spec, mc_sims, mc_seed, g.threads);
      std::filesystem::create_directories(mc_out_dir);
      auto j = mbfr::to_json(summary);
      mbfr::write_text(mc_out_dir + "/montecarlo.json", j.dump(2) + "\n");
      mbfr::write_text(mc_out_dir + "/montecarlo_first_k.csv",
                       mbfr::mc_first_k_csv(summary, mc_seed));
      std::ostringstream msg;
      msg << "sims " << summary.sims << ", mean min(diss) "
          << summary.mean_min_diss << ", mean M2(Y) " << summary.mean_target_id;
      say(g, msg.str());
      if (g.json) std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (*ev) {
      mbfr::Dataset d = mbfr::load_csv(ev_in, ev_target, ev_drop);
      mbfr::EvalProtocol proto;
      proto.n_splits = ev_splits;
      proto.retrains = ev_retrains;
      proto.cv_folds = ev_folds;
      proto.seed = ev_seed;
      proto.use_biases = !ev_no_bias;
      if (ev_full_grid) proto.hidden_grid = mbfr::EvalProtocol::full_grid();
      std::vector<std::string> features;
      if (ev_sfs) {
        features = mbfr::elm_sfs(d, proto, 0, g.threads);
        std::ostringstream msg;
        msg << "ELM_SFS selected:";
        for (const auto& f : features) msg << " " << f;
        say(g, msg.str());
      } else {
        if (ev_features.empty()) {
          std::cerr << "error: usage: --features required without --elm-sfs\n";
          return 1;
        }
        features = split_names(ev_features);
      }
      auto rep = mbfr::evaluate_subset(d, features, proto, g.threads);
      std::filesystem::create_directories(ev_out_dir);
      auto j = mbfr::to_json(rep);
      j["features"] = features;
      mbfr::write_text(ev_out_dir + "/eval_report.json", j.dump(2) + "\n");
      mbfr::write_text(
          ev_out_dir + "/eval_report.csv",
          mbfr::eval_report_csv_row(ev_in, ev_id, features.size(), rep));
      say(g, "mean RE_tst = " + std::to_string(rep.mean_re) + " (sd " +
                 std::to_string(rep.sd_re) + ")");
      if (g.json) std::cout << j.dump(2) << "\n";
      return 0;
    }
  } catch (const mbfr::DataError& e) {
    std::cerr << "error: data: " << e.what() << "\n";
    return 2;
  } catch (const mbfr::NumericError& e) {
    std::cerr << "error: numeric: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
