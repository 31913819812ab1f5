#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace qt {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using VertexId = std::int32_t;
inline constexpr int kUnreachable = -1;

/// Finite undirected graph with unit-length edges.
///
/// Vertices are numbered 0..n-1; that numbering is the total order used for
/// tie-breaking. Each vertex may carry a name (used for text export). The
/// graph is immutable once built; all queries are const.
class MetricGraph {
 public:
  class Builder {
   public:
    VertexId add_vertex(std::string name = {});
    void add_edge(VertexId u, VertexId v);
    /// Removes duplicate edges and freezes the adjacency lists.
    MetricGraph build(bool require_connected = false) &&;

    std::size_t size() const { return names_.size(); }

   private:
    std::vector<std::string> names_;
    std::vector<std::pair<VertexId, VertexId>> edges_;
  };

  MetricGraph() = default;

  std::size_t size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return targets_.size() / 2; }

  std::span<const VertexId> neighbors(VertexId v) const {
    check(v);
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  bool adjacent(VertexId u, VertexId v) const;

  const std::string& name(VertexId v) const {
    check(v);
    return names_[v];
  }
  std::optional<VertexId> find(const std::string& name) const;

  void check(VertexId v) const {
    if (v < 0 || static_cast<std::size_t>(v) >= size()) throw Error("vertex not in graph");
  }

  bool connected() const;

  /// BFS distances from a set of sources; unreachable vertices get kUnreachable.
  std::vector<int> distances_from(std::span<const VertexId> sources) const;
  std::vector<int> distances_from(VertexId source) const {
    return distances_from(std::span<const VertexId>(&source, 1));
  }

  /// Writes `name: neighbor,neighbor,...` lines in vertex order.
  void write_adjacency(std::ostream& out) const;
  static MetricGraph read_adjacency(std::istream& in);

 private:
  std::vector<std::string> names_;
  std::vector<std::size_t> offsets_;
  std::vector<VertexId> targets_;
  std::unordered_map<std::string, VertexId> by_name_;
};

using GeodesicPath = std::vector<VertexId>;

int shortest_path_distance(const MetricGraph& g, VertexId u, VertexId v);

/// One shortest path from u to v. Among all geodesics the one returned
/// always steps to the smallest-id neighbor that stays on a geodesic.
GeodesicPath geodesic(const MetricGraph& g, VertexId u, VertexId v);

/// Index of the midpoint of a geodesic: the middle vertex for even length,
/// the earlier of the two central vertices for odd length.
inline std::size_t midpoint_index(const GeodesicPath& path) {
  return path.empty() ? 0 : (path.size() - 1) / 2;
}

struct FourTuple {
  VertexId w, x, y, z;
};

struct HyperbolicityEstimate {
  double delta = 0.0;
  bool empty_sample = false;
  std::size_t tuples = 0;
};

/// Four-point defect of a single tuple given its six pairwise distances.
/// With sums S1 >= S2 >= S3 of the three pairings, the defect is (S1 - S2) / 2.
double four_point_defect(int wx, int yz, int wy, int xz, int wz, int xy);

/// Gromov four-point hyperbolicity over the sampled tuples.
HyperbolicityEstimate estimate_hyperbolicity(const MetricGraph& g,
                                             std::span<const FourTuple> sample);

/// {t in target : exists s in source with d(s,t) = d(s,target)}.
std::vector<VertexId> nearest_point_projection(const MetricGraph& g,
                                               std::span<const VertexId> target,
                                               std::span<const VertexId> source);

struct BottleneckResult {
  bool passed = true;
  int delta = 0;
  std::vector<int> per_pair;
};

/// Smallest radius Delta such that, for every sampled pair (x,z), removing the
/// open-ended ball B(m, Delta) around the midpoint m of geodesic(x,z)
/// disconnects x from z (or swallows an endpoint).
BottleneckResult bottleneck_check(const MetricGraph& g,
                                  std::span<const std::pair<VertexId, VertexId>> pairs);

/// Bottleneck radius for one pair.
int bottleneck_radius(const MetricGraph& g, VertexId x, VertexId z);

}  // namespace qt
