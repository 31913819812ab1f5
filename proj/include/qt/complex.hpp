#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qt/projections.hpp"

namespace qt {

struct ComplexConfig {
  int K = 1;
  bool enforce_policy = true;  // require K >= 4·xi
};

/// Disjoint union of the members in `members` (indices into the family) plus
/// unit edges between π_X(Z) and π_Z(X) for every pair with no K-large middle.
class QuasiTreeComplex {
 public:
  const MetricGraph& graph() const { return graph_; }
  int K() const { return K_; }
  const std::vector<std::size_t>& members() const { return members_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& cross_pairs() const { return cross_; }

  /// Complex vertex of local vertex `local` on component `comp`.
  VertexId vertex(std::size_t comp, std::size_t local) const;
  /// Component of a family member, if it belongs to this complex.
  std::optional<std::size_t> component_of(std::size_t member) const;
  /// (component, local index) of a complex vertex.
  std::pair<std::size_t, std::size_t> locate(VertexId v) const;

 private:
  friend QuasiTreeComplex build_complex(const ProjectionFamily&, const std::vector<std::size_t>&,
                                        const ComplexConfig&, std::optional<int>);
  MetricGraph graph_;
  int K_ = 1;
  std::vector<std::size_t> members_;
  std::vector<VertexId> offset_;
  std::vector<std::pair<std::size_t, std::size_t>> cross_;  // component pairs, first < second
  std::vector<std::size_t> comp_of_member_;                  // npos when absent
};

/// `xi` is the measured projection constant; with the policy on, K < 4·xi is
/// rejected.
QuasiTreeComplex build_complex(const ProjectionFamily& fam, const std::vector<std::size_t>& members,
                               const ComplexConfig& cfg, std::optional<int> xi = std::nullopt);

/// Unordered member pairs (component indices) with d_Y < K for every other Y.
std::vector<std::pair<std::size_t, std::size_t>> unblocked_pairs(
    const ProjectionFamily& fam, const std::vector<std::size_t>& members, int K);

int complex_distance(const QuasiTreeComplex& c, VertexId x, VertexId z);

/// Sum over Y of the thresholded terms d_Y(x,z)_K, with the endpoint
/// conventions for Y = X and Y = Z. Sets `unsafe` when a cross projection, or a
/// projection feeding a nonzero term, touches the truncation boundary.
int distance_formula_sum(const QuasiTreeComplex& c, const ProjectionFamily& fam, VertexId x,
                         VertexId z, bool* unsafe = nullptr);

struct FormulaRow {
  VertexId x = 0, z = 0;
  int d = 0;
  int sigma = 0;
  bool ok = true;
};

struct FormulaReport {
  std::vector<FormulaRow> rows;  // evaluated (truncation-safe) pairs only
  std::size_t unsafe = 0;
  std::size_t violations = 0;
  double max_sigma_over_d = 0.0;  // lower bound asserts <= 4
  double max_excess_over_sigma = 0.0;  // (d - 3K) / sigma, upper bound asserts <= 2
};

/// Checks Σ/4 <= d <= 2Σ + 3K on each sampled pair of complex vertices.
FormulaReport verify_distance_formula(const QuasiTreeComplex& c, const ProjectionFamily& fam,
                                      const std::vector<std::pair<VertexId, VertexId>>& samples);

struct MainEstimateRow {
  Word x, y;
  int d = 0;
  int sigma = 0;
  int rhs = 0;
  int witness_R = 0;
  bool ok = true;
};

struct MainEstimateReport {
  std::vector<MainEstimateRow> rows;
  std::size_t skipped = 0;  // no witness axis within R
  std::size_t violations = 0;
  int max_witness_R = 0;
  int R = 0;           // radius actually used
  int min_margin = 0;  // min of rhs - d
};

struct MainEstimateConfig {
  int K = 1;
  int L = 1;
  int R = 0;  // negative: use the largest witness radius among the pairs
};

/// d(x,y) <= 2 Σ_γ d_γ(x,y)_K + L + 2R with the sum over all family members,
/// point projections taken in the ball graph and d the word metric.
MainEstimateReport verify_main_estimate(const CayleyBall& ball, const AxisCollection& axes,
                                        const ProjectionFamily& fam, const MainEstimateConfig& cfg,
                                        const std::vector<std::pair<Word, Word>>& pairs);

}  // namespace qt
