#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "qt/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"quasi-tree pipeline for hyperbolic groups"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run the full pipeline from a JSON config");
  std::string config;
  std::optional<int> radius;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool quiet = false;
  run->add_option("--config", config, "pipeline config")->required()->check(CLI::ExistingFile);
  run->add_option("--radius", radius, "override the ball radius");
  run->add_option("--seed", seed, "override the sampling seed");
  run->add_option("--out", out, "override the output directory");
  run->add_flag("-q,--quiet", quiet, "no stage log");

  auto* exp = app.add_subcommand("explain", "summarise the checks in a report");
  std::string report_path;
  exp->add_option("report", report_path, "report.json")->required();

  auto* ball_cmd = app.add_subcommand("ball", "print the adjacency of a Cayley ball");
  std::string pres;
  int ball_radius = 2;
  ball_cmd->add_option("--presentation", pres, "presentation file")->required();
  ball_cmd->add_option("--radius", ball_radius, "ball radius")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      auto cfg = qt::PipelineConfig::load(config);
      if (radius) cfg.radius = *radius;
      if (seed) cfg.seed = *seed;
      if (!out.empty()) cfg.output = out;
      const auto res = qt::run_pipeline(cfg, quiet ? nullptr : &std::cerr);
      std::cout << qt::explain(res.report);
      return res.passed ? 0 : 1;
    }
    if (*exp) {
      std::ifstream in(report_path);
      if (!in) throw qt::Error("cannot open report " + report_path);
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw qt::Error("report is not valid JSON: " + std::string(e.what()));
      }
      const auto text = qt::explain(j);
      std::cout << text;
      return j.value("passed", false) ? 0 : 1;
    }
    if (*ball_cmd) {
      const auto p = qt::Presentation::load(pres);
      qt::CayleyBall(p, ball_radius).graph().write_adjacency(std::cout);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
