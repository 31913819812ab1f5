#pragma once

#include <string>
#include <vector>

#include "qt/complex.hpp"

namespace qt {

struct ColorClasses {
  int theta = 0;
  std::vector<std::vector<std::size_t>> classes;  // member indices, ascending
  std::vector<int> color_of;                       // per member
  std::vector<std::size_t> split_orbits;           // orbits that could not stay whole
  std::size_t m() const { return classes.size(); }
};

/// α and β conflict when diam π_α(β) > θ or diam π_β(α) > θ.
bool conflict(const ProjectionFamily& fam, std::size_t a, std::size_t b, int theta);

/// Greedy colouring of the conflict graph. Orbits are visited in order of
/// their index; a conflict-free orbit takes the smallest colour compatible
/// with all of its members, a conflicted orbit is coloured member by member.
ColorClasses greedy_color(const ProjectionFamily& fam, int theta);

/// Smallest θ for which no orbit is internally conflicted: the largest
/// projection diameter between two members of the same orbit.
int orbit_conflict_bound(const ProjectionFamily& fam);

struct ProductSpace {
  std::vector<QuasiTreeComplex> factors;
};

using BasepointTuple = std::vector<VertexId>;

int product_distance(const ProductSpace& sp, const BasepointTuple& a, const BasepointTuple& b);

/// The i-th coordinate is the identity vertex on the first member of factor i
/// whose shift is trivial.
BasepointTuple identity_basepoint(const ProductSpace& sp, const ProjectionFamily& fam,
                                  const CayleyBall& ball);

/// h acting coordinatewise: the vertex w on shift·γ goes to h·w on (h·shift)·γ.
BasepointTuple orbit_map(const Word& h, const BasepointTuple& x, const ProductSpace& sp,
                         const ProjectionFamily& fam, const AxisCollection& axes,
                         const CayleyBall& ball);

struct EmbeddingRow {
  Word h;
  int length = 0;
  int dist = 0;  // kUnreachable when some factor is disconnected
  bool lower_ok = true;
  bool upper_ok = true;
};

struct EmbeddingConfig {
  int L = 1;
  int R = 0;
  int radius = 0;  // certify every h with |h| <= radius
};

struct EmbeddingReport {
  std::vector<EmbeddingRow> rows;
  int c_up = 0;
  std::size_t lower_violations = 0;
  std::size_t upper_violations = 0;
  double min_ratio = 0.0;  // min over h != 1 of d / |h|
};

EmbeddingReport qi_certify(const ProductSpace& sp, const BasepointTuple& x,
                           const ProjectionFamily& fam, const AxisCollection& axes,
                           const CayleyBall& ball, const EmbeddingConfig& cfg);

}  // namespace qt
