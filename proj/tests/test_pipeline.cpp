#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qt/pipeline.hpp"

using namespace qt;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("qtree_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PipelineConfig small_f2(const fs::path& dir) {
  std::ofstream(dir / "f2.pres") << "gens: a b\n";
  nlohmann::json j{{"presentation", "f2.pres"},
                   {"radius", 6},
                   {"L_cand", 4},
                   {"L", 2},
                   {"theta", "auto"},
                   {"stability_step", 2},
                   {"cert_radius", 1},
                   {"family_radius", 1},
                   {"samples", {{"formula_pairs", 30}, {"bottleneck_pairs", 10}, {"main_pairs", 10},
                                {"hyperbolicity_tuples", 500}}},
                   {"seed", 3},
                   {"output", (dir / "out").string()}};
  return PipelineConfig::from_json(j, dir);
}

}  // namespace

TEST_CASE("config parsing") {
  const auto dir = scratch("config");
  const auto cfg = small_f2(dir);
  CHECK(cfg.presentation == dir / "f2.pres");
  CHECK(cfg.radius == 6);
  CHECK_FALSE(cfg.theta);
  CHECK_FALSE(cfg.K);
  CHECK(cfg.K_policy);
  CHECK(cfg.resolved_estimate_L(5) == 2);

  nlohmann::json j = cfg.to_json();
  CHECK(j["theta"] == "auto");
  CHECK(j["K"] == "4xi");

  auto with = [&](const char* key, nlohmann::json v) {
    nlohmann::json k{{"presentation", "f2.pres"}, {"radius", 4}, {"L", 1}};
    k[key] = v;
    return PipelineConfig::from_json(k, dir);
  };
  CHECK(with("estimate_L", "2K").resolved_estimate_L(7) == 14);
  CHECK(with("estimate_L", 5).resolved_estimate_L(7) == 5);
  CHECK(*with("K", 12).K == 12);
  CHECK_FALSE(with("K_policy", "none").K_policy);
  CHECK_THROWS_AS(with("estimate_L", "3K"), Error);
  CHECK_THROWS_AS(with("theta", "sometimes"), Error);
  CHECK_THROWS_AS(with("K_policy", "loose"), Error);
  CHECK_THROWS_AS(with("cert_radius", 9), Error);
  CHECK_THROWS_AS(with("radius", "big"), Error);
  CHECK_THROWS_AS(PipelineConfig::from_json({{"radius", 3}}, dir), Error);
  CHECK_THROWS_WITH_AS(PipelineConfig::from_json({{"presentation", "missing.pres"}}, dir),
                       doctest::Contains("presentation file not found"), Error);
  std::ofstream(dir / "broken.json") << "{ not json";
  CHECK_THROWS_AS(PipelineConfig::load(dir / "broken.json"), Error);
}

TEST_CASE("explain") {
  CHECK(explain(nlohmann::json::object()) == "no checks run\n");
  CHECK(explain(nlohmann::json{{"checks", nlohmann::json::object()}}) == "no checks run\n");
  nlohmann::json r{{"checks",
                    {{"main estimate", {{"passed", true}, {"min_margin", 2}}},
                     {"projection axioms", {{"passed", false}, {"p1_violations", 1}}}}},
                   {"passed", false}};
  const auto text = explain(r);
  CHECK(text.find("PASS main estimate (min_margin=2)") != std::string::npos);
  CHECK(text.find("FAIL projection axioms (p1_violations=1)") != std::string::npos);
  CHECK(text.find("some checks failed") != std::string::npos);
}

TEST_CASE("synthetic run with planted violations fails by name") {
  const auto dir = scratch("synthetic");
  nlohmann::json j{{"synthetic", {{"seed", 5}, {"n", 9}, {"spread", 1}, {"planted", 1}}},
                   {"samples", {{"formula_pairs", 20}, {"bottleneck_pairs", 5}}},
                   {"output", (dir / "out").string()}};
  const auto res = run_pipeline(PipelineConfig::from_json(j, dir));
  CHECK_FALSE(res.passed);
  CHECK(res.report["checks"]["projection axioms"]["passed"] == false);
  CHECK(res.report["axioms"]["p1_violations"].size() == 1);
  CHECK(explain(res.report).find("FAIL projection axioms") != std::string::npos);
  CHECK(fs::exists(dir / "out" / "report.json"));

  j["synthetic"]["planted"] = 0;
  CHECK(run_pipeline(PipelineConfig::from_json(j, dir)).passed);
}

TEST_CASE("small free group run is complete and repeatable") {
  const auto dir = scratch("f2");
  auto cfg = small_f2(dir);
  const auto a = run_pipeline(cfg);
  CHECK(a.passed);
  CHECK(a.report["axioms"]["xi"] == 2);
  for (const char* name : {"report.json", "axioms.json", "axes.txt", "embedding.csv", "embedding.svg",
                           "embedding.json", "distance_formula.json", "main_estimate.json",
                           "scan_0.csv"}) {
    CHECK_MESSAGE(fs::exists(cfg.output / name), name);
  }
  CHECK(a.report["checks"].contains("distance formula"));
  CHECK(a.report["checks"].contains("main estimate"));
  CHECK(a.report["checks"].contains("orbit lower bound"));
  CHECK(a.report["checks"].contains("quasi-tree bottleneck"));
  CHECK(slurp(cfg.output / "embedding.csv").rfind("h,|h|,dist\n1,0,0\n", 0) == 0);

  const auto first = slurp(cfg.output / "report.json");
  cfg.output = dir / "again";
  run_pipeline(cfg);
  CHECK(slurp(cfg.output / "report.json") == first);
}

TEST_CASE("stage errors carry the stage name") {
  const auto dir = scratch("stage");
  auto cfg = small_f2(dir);
  cfg.K = 7;  // xi = 2 for this family
  try {
    run_pipeline(cfg);
    FAIL("K below 4 xi was accepted");
  } catch (const StageError& e) {
    CHECK(e.stage() == "complexes");
    CHECK(std::string(e.what()).find("threshold under 4ξ") != std::string::npos);
  }
  cfg.K_policy = false;
  CHECK_NOTHROW(run_pipeline(cfg));
  cfg.K_policy = true;

  std::ofstream(dir / "bad.pres") << "gens: a b\nrel: a b A B\n";
  cfg.presentation = dir / "bad.pres";
  CHECK_THROWS_WITH_AS(run_pipeline(cfg), doctest::Contains("stage presentation"), StageError);
}

TEST_CASE("scatter plot") {
  EmbeddingReport rep;
  rep.rows.push_back({Word{}, 0, 0, true, true});
  rep.rows.push_back({Word{}, 2, 3, true, true});
  rep.rows.push_back({Word{}, 2, 3, false, true});
  const auto svg = scatter_svg(rep);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  std::size_t circles = 0;
  for (auto pos = svg.find("<circle"); pos != std::string::npos; pos = svg.find("<circle", pos + 1)) ++circles;
  CHECK(circles == 2);
}
