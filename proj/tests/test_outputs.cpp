#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "mbfr/serialize.hpp"
#include "mbfr/simgen.hpp"
#include "mbfr/svg.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  REQUIRE(f.good());
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(MBFR_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

mbfr::SelectionTrace sample_trace() {
  mbfr::ButterflyConfig cfg;
  cfg.n = 1000;
  cfg.seed = 9;
  auto d = mbfr::gen_butterfly(cfg).rescale_unit();
  return mbfr::mbfr_select(d, mbfr::ScaleSet::range(5, 10), 3);
}

}  // namespace

TEST_CASE("trace serializes to JSON and CSV") {
  auto trace = sample_trace();
  auto j = mbfr::to_json(trace);
  CHECK(j["c"] == 3);
  CHECK(j["steps"].size() == 3);
  CHECK(j["steps"][0].contains("candidate_scores"));
  CHECK(j.contains("target_id"));
  CHECK(j.contains("knee_step"));

  auto csv = mbfr::trace_to_csv(trace);
  CHECK(csv.rfind("step,feature,diss,id_with,id_without\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("profile SVG contains the reference line and features") {
  auto trace = sample_trace();
  fs::path p = fs::temp_directory_path() / "mbfr_profile_test.svg";
  mbfr::emit_profile_svg(trace, p.string());
  auto svg = slurp(p);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("M2(Y)") != std::string::npos);
  CHECK(svg.find(trace.steps[0].feature) != std::string::npos);
  CHECK(svg.find("cut-off") != std::string::npos);
  fs::remove(p);

  mbfr::SelectionTrace single;
  single.target_id = 1.0;
  single.scales = mbfr::ScaleSet::range(5, 10);
  single.c = 1;
  single.steps = {trace.steps[0]};
  mbfr::emit_profile_svg(single, p.string());
  CHECK(slurp(p).find("circle") != std::string::npos);
  fs::remove(p);
}

TEST_CASE("cli runs the generate/select/estimate pipeline") {
  fs::path dir = fs::temp_directory_path() / "mbfr_cli_test";
  fs::create_directories(dir);
  auto csv = (dir / "b.csv").string();
  auto out = (dir / "out").string();

  REQUIRE(run_cli("generate butterfly --n 800 --seed 7 --out " + csv) == 0);
  auto header = slurp(dir / "b.csv").substr(0, 30);
  CHECK(header.rfind("X1,X2,J3,J4,J5,I6,I7,I8,Y", 0) == 0);

  REQUIRE(run_cli("select --input " + csv +
                  " --target Y --scales 5..10 --c 3 --out-dir " + out) == 0);
  CHECK(fs::exists(out + "/trace.json"));
  CHECK(fs::exists(out + "/trace.csv"));
  CHECK(fs::exists(out + "/profile.svg"));

  // Byte-identical reruns with identical flags and seeds.
  auto first = slurp(out + "/trace.json");
  REQUIRE(run_cli("select --input " + csv +
                  " --target Y --scales 5..10 --c 3 --out-dir " + out) == 0);
  CHECK(first == slurp(out + "/trace.json"));

  REQUIRE(run_cli("estimate-id --input " + csv +
                  " --scales 5..10 --out-dir " + out) == 0);
  CHECK(fs::exists(out + "/id_estimate.json"));
  CHECK(fs::exists(out + "/id_loglog.svg"));
  auto est = mbfr::json::parse(slurp(out + "/id_estimate.json"));
  CHECK(est["m"] == 2);
  CHECK(est["embedding_dim"] == 9);

  REQUIRE(run_cli("dr --input " + csv +
                  " --target Y --features X1,X2 --scales 5..10 --json") == 0);
  REQUIRE(run_cli("classify --input " + csv +
                  " --target Y --selected X1,X2 --rejected I6 --scales 5..10") == 0);

  fs::remove_all(dir);
}

TEST_CASE("cli maps failures to exit codes") {
  CHECK(run_cli("select --input missing.csv --target Y --scales 5..10") == 2);
  CHECK(run_cli("select") == 1);               // missing required flags
  CHECK(run_cli("generate nosuchkind") == 1);  // unknown generator
  CHECK(run_cli("") == 1);                     // no subcommand
}
