#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "qt/embed.hpp"

namespace qt {

/// Failure inside a named pipeline stage.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error("stage " + stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct SampleSizes {
  std::size_t hyperbolicity_tuples = 10000;
  std::size_t formula_pairs = 100;
  std::size_t bottleneck_pairs = 50;
  std::size_t main_pairs = 50;
};

struct PipelineConfig {
  std::filesystem::path presentation;
  int radius = 8;
  int L_cand = 2;
  int L = 1;                 // subword coverage for the preferred axes
  int estimate_L = 0;        // L in the main estimate and lower bound; 0: same as L, -1: 2K
  std::optional<int> R;      // empty: measured witness radius
  std::optional<int> theta;  // empty: smallest radius-stable value
  std::optional<int> K;      // empty: 4·xi (1 when xi = 0)
  bool K_policy = true;      // reject K < 4·xi
  int family_radius = 2;
  int axiom_window = -1;     // shift radius of the axiom window, -1 for all members
  int stability_step = 2;    // compare against radius + step; 0 disables
  int cert_radius = -1;      // QI certification ball, -1 skips
  SampleSizes samples;
  std::uint64_t seed = 0;
  std::filesystem::path output = "out";
  bool dump_family = false;
  bool dump_complexes = false;
  std::optional<SyntheticOptions> synthetic;

  static PipelineConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
  static PipelineConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
  int resolved_estimate_L(int K) const {
    return estimate_L == 0 ? L : estimate_L < 0 ? 2 * K : estimate_L;
  }
};

struct PipelineResult {
  nlohmann::json report;
  bool passed = false;
};

/// Runs every stage, writes the report bundle into cfg.output and returns the
/// summary. Stage failures surface as StageError.
PipelineResult run_pipeline(const PipelineConfig& cfg, std::ostream* log = nullptr);

/// Human-readable pass/fail lines for the checks recorded in a report.
std::string explain(const nlohmann::json& report);

/// Scatter plot of (|h|, d) pairs as a standalone SVG document.
std::string scatter_svg(const EmbeddingReport& rep);

}  // namespace qt
