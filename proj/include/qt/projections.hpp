#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "qt/axes.hpp"

namespace qt {

/// One element of the family: a finite segment with its own metric. For
/// Cayley families the member is shift·axes[orbit] restricted to the ball.
struct Member {
  std::size_t orbit = 0;
  Word shift;                     // canonical coset key; empty for synthetic members
  std::vector<VertexId> verts;    // ball vertices, empty for synthetic members
  std::vector<std::string> names; // vertex names used for export
  std::string label;
};

inline constexpr std::uint16_t kNoGroup = 0xFFFF;

class ProjectionFamily {
 public:
  std::size_t size() const { return members_.size(); }
  const Member& member(std::size_t i) const { return members_.at(i); }
  std::size_t member_size(std::size_t i) const { return members_.at(i).names.size(); }

  /// Metric of member y between its local vertices i and j.
  int local_distance(std::size_t y, std::size_t i, std::size_t j) const {
    const auto n = member_size(y);
    return local_dist_[y][i * n + j];
  }
  std::uint64_t boundary(std::size_t y) const { return boundary_[y]; }

  /// π_Y(X) as a bitmask over Y's local vertices.
  std::uint64_t projection(std::size_t y, std::size_t x) const;
  int proj_diam(std::size_t y, std::size_t x) const;
  /// diam(π_Y(X) ∪ π_Y(Z)); X = Z allowed, Y must differ from both.
  int d(std::size_t y, std::size_t x, std::size_t z) const;
  /// Projection touches the truncation boundary of Y.
  bool unsafe(std::size_t y, std::size_t x) const;
  /// Member distance in the ambient graph (0 for synthetic families).
  int separation(std::size_t y, std::size_t x) const;

  // Interned form: every distinct projection onto Y gets a small group id.
  std::uint16_t group(std::size_t y, std::size_t x) const { return table_[y * size() + x]; }
  std::uint16_t group_t(std::size_t x, std::size_t y) const { return table_t_[x * size() + y]; }
  const std::uint16_t* row_t(std::size_t x) const { return table_t_.data() + x * size(); }
  std::size_t group_count(std::size_t y) const { return groups_[y].masks.size(); }
  std::uint64_t group_mask(std::size_t y, std::uint16_t g) const { return groups_[y].masks[g]; }
  bool group_unsafe(std::size_t y, std::uint16_t g) const { return groups_[y].unsafe[g]; }
  int group_diam(std::size_t y, std::uint16_t a, std::uint16_t b) const {
    return groups_[y].diam[a * groups_[y].masks.size() + b];
  }
  int max_group_diam(std::size_t y) const { return groups_[y].max_diam; }

  /// Member index of shift·axes[orbit], if present.
  std::optional<std::size_t> find(std::size_t orbit, const Word& shift) const;
  /// Local index of a ball vertex on member y.
  std::optional<std::size_t> local_index(std::size_t y, VertexId v) const;

  /// Per-member diameter in its own metric.
  int diameter_of(std::size_t y, std::uint64_t mask) const;

  /// CSV `alpha,beta,proj_vertices`.
  void write_csv(std::ostream& out) const;

  /// Declared projection constant for synthetic families.
  std::optional<int> declared_xi;

 private:
  friend class FamilyAssembler;

  struct Groups {
    std::vector<std::uint64_t> masks;
    std::vector<char> unsafe;
    std::vector<std::uint16_t> diam;
    int max_diam = 0;
  };

  std::vector<Member> members_;
  std::vector<std::vector<std::uint16_t>> local_dist_;
  std::vector<std::uint64_t> boundary_;
  std::vector<std::uint16_t> table_;    // [y * n + x]
  std::vector<std::uint16_t> table_t_;  // [x * n + y]
  std::vector<std::uint8_t> separation_;
  std::vector<Groups> groups_;
  std::map<std::pair<std::size_t, Word>, std::size_t> by_shift_;
};

struct FamilyOptions {
  int shift_radius = 2;  // translates h·γ with |h| at most this
};

/// Translates of every axis by elements of B(shift_radius), each restricted
/// to the ball, with all pairwise nearest-point projections.
ProjectionFamily materialize_family(const AxisCollection& axes, const CayleyBall& ball,
                                    const FamilyOptions& opt);

/// value if value >= K, else 0.
int threshold(int value, int K);

struct Violation {
  std::size_t x, y, z;
  auto operator<=>(const Violation&) const = default;
};

struct AxiomReport {
  int xi = 0;
  int p0_max = 0;
  std::vector<Violation> p1_violations;
  std::map<int, std::size_t> p2_profile;  // #large middles -> #pairs
  int p2_max_count = 0;
  bool strong_ok = true;
  std::size_t members = 0;
  std::size_t safe_pairs = 0;
  std::size_t unsafe_pairs = 0;
  std::size_t triples = 0;
};

/// Checks (P0)-(P2) and (P1)' over the members in `window` (all when empty).
/// Pairs whose projections touch the truncation boundary are left out.
AxiomReport verify_axioms(const ProjectionFamily& fam, const std::vector<std::size_t>& window = {});

/// Members whose shift has length at most r.
std::vector<std::size_t> shift_window(const ProjectionFamily& fam, int r);

/// Hand-made families: segments with explicit projections.
class SyntheticBuilder {
 public:
  std::size_t add_member(std::size_t length, std::string label = {});
  void set_projection(std::size_t y, std::size_t x, std::vector<std::size_t> local);
  void set_boundary(std::size_t y, std::vector<std::size_t> local);
  ProjectionFamily build(std::optional<int> declared_xi = std::nullopt) &&;

 private:
  std::vector<std::size_t> lengths_;
  std::vector<std::string> labels_;
  std::vector<std::uint64_t> boundary_;
  std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> proj_;
};

struct SyntheticOptions {
  std::uint64_t seed = 0;
  std::size_t n = 3;
  int spread = 1;
  std::size_t planted = 0;  // number of planted (P1) violations
};

struct SyntheticFamily {
  ProjectionFamily family;
  std::vector<Violation> planted;  // canonical form (min(x,y), max(x,y), z)
};

/// Random segments whose projections sit within `spread` of the centre, so
/// (P0)-(P1) hold with xi = 2·spread. Each planted triple pushes two
/// projections far apart to break (P1) for exactly that triple.
SyntheticFamily synthetic_family(const SyntheticOptions& opt);

}  // namespace qt
