#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mht/run.hpp"

using namespace mht;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "mht_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("config parsing handles comments, whitespace and dotted keys") {
  const std::string text = R"(
# reference configuration
variant = mht_allee   # strong Allee effect
q = 700
s = 1.25
m = 15

simulate.t_end = 12.5
simulate.ic = 100:2, 10:0.5
region-map.nq = 7
)";
  const auto cfg = parse_config(text);
  CHECK(cfg.variant == ModelVariant::MhtAllee);
  CHECK(cfg.params.q == 700.0);
  CHECK(cfg.sim_t_end == 12.5);
  REQUIRE(cfg.sim_ics.size() == 2);
  CHECK(cfg.sim_ics[1].first == 10.0);
  CHECK(cfg.sim_ics[1].second == 0.5);
  CHECK(cfg.region_nq == 7);
}

TEST_CASE("unknown keys are errors that name the key") {
  try {
    parse_config("variant = mht\nbogus.key = 1\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("bogus.key") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("variant = nonsense\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("q = twelve\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("q = 700\nq = 500\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("simulate.ic = 1-2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("just a line\n"), ConfigError);
}

TEST_CASE("config round trip is lossless") {
  RunConfig cfg;
  cfg.variant = ModelVariant::MhtAlleeAltFood;
  cfg.params.q = 712.375;
  cfg.params.s = 1.0625;
  cfg.params.m = -15;
  cfg.analysis = "basin";
  cfg.threads = 3;
  cfg.sim_ics = {{1.5, 0.25}, {33.25, 0.125}};
  cfg.hopf_step = 7.5;
  cfg.basin_nx = 37;
  cfg.region_probe = false;
  const std::string once = serialize_config(cfg);
  const RunConfig back = parse_config(once);
  CHECK(serialize_config(back) == once);
  CHECK(back.variant == cfg.variant);
  CHECK(back.params.q == cfg.params.q);
  CHECK(back.sim_ics == cfg.sim_ics);
  CHECK(back.basin_nx == cfg.basin_nx);
  CHECK(back.region_probe == cfg.region_probe);
}

TEST_CASE("validation rejects inconsistent settings") {
  CHECK_THROWS_AS(parse_config("analysis = dance\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("output.formats = json,pdf\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("hopf.q_min = 900\nhopf.q_max = 400\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("basin.nx = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("m = 200\n"), ConfigError);  // m >= K
}

TEST_CASE("simulate writes the fixed trajectory schema (one CSV per ic, one overlay)") {
  RunConfig cfg;
  cfg.variant = ModelVariant::Mht;
  cfg.analysis = "simulate";
  cfg.sim_t_end = 5;
  cfg.sim_samples = 50;
  cfg.sim_ics = {{100, 2}, {10, 0.5}};
  cfg.out_dir = fresh_dir("sim").string();
  REQUIRE(run(cfg) == 0);

  for (const char* name : {"trajectory_0.csv", "trajectory_1.csv"}) {
    const auto csv = slurp(fs::path(cfg.out_dir) / name);
    CHECK(csv.rfind("time,prey,predator,frame\n", 0) == 0);
    // 50 samples + header
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 51);
  }
  const auto json = nlohmann::json::parse(slurp(fs::path(cfg.out_dir) / "result.json"));
  CHECK(json["schema_version"] == "1.0");
  CHECK(json["variant"] == "mht");
  CHECK(json["analysis"] == "simulate");
  CHECK(json["results"]["trajectories"].size() == 2);
  for (const char* f : {"timeseries_linear.svg", "timeseries_log.svg", "phase.svg"})
    CHECK(fs::exists(fs::path(cfg.out_dir) / f));
}

TEST_CASE("equilibria analysis reports the reference interior roots") {
  RunConfig cfg;
  cfg.variant = ModelVariant::MhtAllee;
  cfg.analysis = "equilibria";
  cfg.out_dir = fresh_dir("eq").string();
  REQUIRE(run(cfg) == 0);
  const auto json = nlohmann::json::parse(slurp(fs::path(cfg.out_dir) / "result.json"));
  const auto& interior = json["results"]["interior"];
  REQUIRE(interior.size() == 2);
  CHECK(std::abs(interior[0]["location"]["prey"].get<double>() - 0.1253) < 1e-3);
  CHECK(std::abs(interior[1]["location"]["prey"].get<double>() - 0.9678) < 1e-3);
  CHECK(interior[0]["lemma_class"] == "saddle");
  CHECK(interior[1]["lemma_class"] == "attractor");
  CHECK(json["results"]["roots"]["construction_ok"] == true);
  CHECK(json["params_nondimensional"]["M"] == 0.1);
}

TEST_CASE("hopf analysis writes the fixed locus schema") {
  RunConfig cfg;
  cfg.variant = ModelVariant::Mht;
  cfg.analysis = "hopf";
  cfg.hopf_q_min = 500;
  cfg.hopf_q_max = 700;
  cfg.hopf_step = 20;
  cfg.out_dir = fresh_dir("hopf").string();
  REQUIRE(run(cfg) == 0);
  const auto csv = slurp(fs::path(cfg.out_dir) / "hopf.csv");
  CHECK(csv.rfind("q,s,u_star,residual,det\n", 0) == 0);
  const auto json = nlohmann::json::parse(slurp(fs::path(cfg.out_dir) / "result.json"));
  CHECK(json["results"]["count"].get<int>() >= 5);
}

TEST_CASE("basin analysis writes the fixed basin schema") {
  RunConfig cfg;
  cfg.variant = ModelVariant::MhtAllee;
  cfg.analysis = "basin";
  cfg.basin_nx = 8;
  cfg.basin_ny = 6;
  cfg.threads = 2;
  cfg.out_dir = fresh_dir("basin").string();
  REQUIRE(run(cfg) == 0);
  const auto csv = slurp(fs::path(cfg.out_dir) / "basin.csv");
  CHECK(csv.rfind("prey,predator,label\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 8 * 6 + 1);
}

TEST_CASE("region-map analysis writes labels with legend counts") {
  RunConfig cfg;
  cfg.variant = ModelVariant::MhtAllee;
  cfg.analysis = "region-map";
  cfg.region_q_min = 600;
  cfg.region_q_max = 5400;
  cfg.region_nq = 6;
  cfg.region_s_min = 0.8;
  cfg.region_s_max = 1.6;
  cfg.region_ns = 4;
  cfg.out_dir = fresh_dir("region").string();
  REQUIRE(run(cfg) == 0);
  const auto csv = slurp(fs::path(cfg.out_dir) / "region_map.csv");
  CHECK(csv.rfind("q,s,label,uncertain\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6 * 4 + 1);
  const auto json = nlohmann::json::parse(slurp(fs::path(cfg.out_dir) / "result.json"));
  int total = 0;
  for (const auto& [k, v] : json["results"]["counts"].items()) total += v.get<int>();
  CHECK(total == 24);
}

TEST_CASE("identical configs produce byte-identical artifacts") {
  for (const char* analysis : {"equilibria", "collapse"}) {
    RunConfig cfg;
    cfg.variant = ModelVariant::MhtAlleeAltFood;
    cfg.analysis = analysis;
    cfg.collapse_q_min = 700;
    cfg.collapse_q_max = 14000;
    cfg.out_dir = fresh_dir(std::string("rep_a_") + analysis).string();
    REQUIRE(run(cfg) == 0);
    RunConfig cfg2 = cfg;
    cfg2.out_dir = fresh_dir(std::string("rep_b_") + analysis).string();
    REQUIRE(run(cfg2) == 0);
    for (const auto& entry : fs::directory_iterator(cfg.out_dir)) {
      const auto other = fs::path(cfg2.out_dir) / entry.path().filename();
      REQUIRE(fs::exists(other));
      CHECK(slurp(entry.path()) == slurp(other));
    }
  }
}

TEST_CASE("result documents re-parse and carry both parameter frames") {
  RunConfig cfg;
  cfg.variant = ModelVariant::MhtAltFood;
  cfg.analysis = "collapse";
  cfg.out_dir = fresh_dir("roundtrip").string();
  REQUIRE(run(cfg) == 0);
  const auto json = nlohmann::json::parse(slurp(fs::path(cfg.out_dir) / "result.json"));
  for (const char* key :
       {"schema_version", "variant", "params_dimensional", "params_nondimensional", "analysis",
        "results", "diagnostics"})
    CHECK(json.contains(key));
  // the reference alternative-food offset admits no fold: honest not-found
  CHECK(json["results"]["found"] == false);
}

TEST_CASE("format selection controls which artifacts are written") {
  RunConfig cfg;
  cfg.variant = ModelVariant::Mht;
  cfg.analysis = "equilibria";
  cfg.formats = {"json"};
  cfg.out_dir = fresh_dir("fmt").string();
  REQUIRE(run(cfg) == 0);
  CHECK(fs::exists(fs::path(cfg.out_dir) / "result.json"));
  CHECK(!fs::exists(fs::path(cfg.out_dir) / "equilibria.csv"));
  CHECK(!fs::exists(fs::path(cfg.out_dir) / "phase.svg"));
}

TEST_CASE("run without an analysis is a configuration error") {
  RunConfig cfg;
  cfg.analysis = "";
  CHECK_THROWS_AS(run(cfg), ConfigError);
}
