#include "qt/graph.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <istream>
#include <ostream>
#include <sstream>

namespace qt {

VertexId MetricGraph::Builder::add_vertex(std::string name) {
  names_.push_back(std::move(name));
  return static_cast<VertexId>(names_.size() - 1);
}

void MetricGraph::Builder::add_edge(VertexId u, VertexId v) {
  const auto n = static_cast<VertexId>(names_.size());
  if (u < 0 || v < 0 || u >= n || v >= n) throw Error("vertex not in graph");
  if (u == v) throw Error("self-loop");
  edges_.emplace_back(u, v);
  edges_.emplace_back(v, u);
}

MetricGraph MetricGraph::Builder::build(bool require_connected) && {
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  MetricGraph g;
  const std::size_t n = names_.size();
  g.offsets_.assign(n + 1, 0);
  for (const auto& e : edges_) ++g.offsets_[e.first + 1];
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
  g.targets_.reserve(edges_.size());
  for (const auto& e : edges_) g.targets_.push_back(e.second);
  g.names_ = std::move(names_);
  for (std::size_t i = 0; i < n; ++i) {
    if (!g.names_[i].empty()) g.by_name_.emplace(g.names_[i], static_cast<VertexId>(i));
  }
  if (require_connected && !g.connected()) throw Error("graph is not connected");
  return g;
}

bool MetricGraph::adjacent(VertexId u, VertexId v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::optional<VertexId> MetricGraph::find(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

bool MetricGraph::connected() const {
  if (size() == 0) return true;
  auto d = distances_from(VertexId{0});
  return std::none_of(d.begin(), d.end(), [](int x) { return x == kUnreachable; });
}

std::vector<int> MetricGraph::distances_from(std::span<const VertexId> sources) const {
  std::vector<int> dist(size(), kUnreachable);
  std::vector<VertexId> queue;
  queue.reserve(size());
  for (VertexId s : sources) {
    check(s);
    if (dist[s] == 0) continue;
    dist[s] = 0;
    queue.push_back(s);
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId u = queue[head];
    for (VertexId w : neighbors(u)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

void MetricGraph::write_adjacency(std::ostream& out) const {
  for (std::size_t v = 0; v < size(); ++v) {
    out << (names_[v].empty() ? std::to_string(v) : names_[v]) << ':';
    bool first = true;
    for (VertexId w : neighbors(static_cast<VertexId>(v))) {
      out << (first ? " " : ",") << (names_[w].empty() ? std::to_string(w) : names_[w]);
      first = false;
    }
    out << '\n';
  }
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

MetricGraph MetricGraph::read_adjacency(std::istream& in) {
  std::vector<std::pair<std::string, std::vector<std::string>>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto colon = line.rfind(':');
    if (colon == std::string::npos) throw Error("adjacency line without ':'");
    std::vector<std::string> nbrs;
    std::stringstream rest(line.substr(colon + 1));
    std::string tok;
    while (std::getline(rest, tok, ',')) {
      tok = trim(tok);
      if (!tok.empty()) nbrs.push_back(tok);
    }
    rows.emplace_back(trim(line.substr(0, colon)), std::move(nbrs));
  }
  Builder b;
  std::unordered_map<std::string, VertexId> ids;
  for (const auto& [name, _] : rows) {
    if (ids.count(name)) throw Error("duplicate vertex '" + name + "'");
    ids.emplace(name, b.add_vertex(name));
  }
  for (const auto& [name, nbrs] : rows) {
    for (const auto& w : nbrs) {
      auto it = ids.find(w);
      if (it == ids.end()) throw Error("unknown neighbor '" + w + "'");
      b.add_edge(ids[name], it->second);
    }
  }
  return std::move(b).build();
}

int shortest_path_distance(const MetricGraph& g, VertexId u, VertexId v) {
  g.check(u);
  g.check(v);
  if (u == v) return 0;
  const int d = g.distances_from(v)[u];
  if (d == kUnreachable) throw Error("unreachable");
  return d;
}

GeodesicPath geodesic(const MetricGraph& g, VertexId u, VertexId v) {
  g.check(u);
  g.check(v);
  const auto to_v = g.distances_from(v);
  if (to_v[u] == kUnreachable) throw Error("unreachable");
  GeodesicPath path{u};
  VertexId cur = u;
  while (cur != v) {
    for (VertexId w : g.neighbors(cur)) {  // sorted ascending
      if (to_v[w] == to_v[cur] - 1) {
        cur = w;
        break;
      }
    }
    path.push_back(cur);
  }
  return path;
}

double four_point_defect(int wx, int yz, int wy, int xz, int wz, int xy) {
  std::array<int, 3> s{wx + yz, wy + xz, wz + xy};
  std::sort(s.begin(), s.end());
  return (s[2] - s[1]) / 2.0;
}

HyperbolicityEstimate estimate_hyperbolicity(const MetricGraph& g,
                                             std::span<const FourTuple> sample) {
  HyperbolicityEstimate est;
  est.tuples = sample.size();
  if (sample.empty()) {
    est.empty_sample = true;
    return est;
  }
  // One BFS row per distinct sampled vertex.
  std::unordered_map<VertexId, std::vector<int>> rows;
  auto row = [&](VertexId v) -> const std::vector<int>& {
    auto it = rows.find(v);
    if (it == rows.end()) it = rows.emplace(v, g.distances_from(v)).first;
    return it->second;
  };
  auto dist = [&](VertexId a, VertexId b) {
    const int d = row(a)[b];
    if (d == kUnreachable) throw Error("unreachable");
    return d;
  };
  for (const auto& t : sample) {
    for (VertexId v : {t.w, t.x, t.y, t.z}) g.check(v);
    const double d = four_point_defect(dist(t.w, t.x), dist(t.y, t.z), dist(t.w, t.y),
                                       dist(t.x, t.z), dist(t.w, t.z), dist(t.x, t.y));
    est.delta = std::max(est.delta, d);
  }
  return est;
}

std::vector<VertexId> nearest_point_projection(const MetricGraph& g,
                                               std::span<const VertexId> target,
                                               std::span<const VertexId> source) {
  if (target.empty() || source.empty()) throw Error("empty projection input");
  const auto d = g.distances_from(target);
  // Walk down the distance gradient from every source point; the vertices at
  // distance zero reached this way are exactly the nearest points.
  std::vector<char> seen(g.size(), 0);
  std::vector<VertexId> frontier;
  for (VertexId s : source) {
    g.check(s);
    if (d[s] == kUnreachable) throw Error("unreachable");
    if (!seen[s]) {
      seen[s] = 1;
      frontier.push_back(s);
    }
  }
  std::vector<VertexId> result;
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    const VertexId u = frontier[head];
    if (d[u] == 0) {
      result.push_back(u);
      continue;
    }
    for (VertexId w : g.neighbors(u)) {
      if (d[w] == d[u] - 1 && !seen[w]) {
        seen[w] = 1;
        frontier.push_back(w);
      }
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

int bottleneck_radius(const MetricGraph& g, VertexId x, VertexId z) {
  const auto path = geodesic(g, x, z);
  const VertexId mid = path[midpoint_index(path)];
  const auto from_mid = g.distances_from(mid);
  const int reach = std::max(from_mid[x], from_mid[z]);
  std::vector<VertexId> queue;
  queue.reserve(g.size());
  std::vector<char> seen(g.size());
  for (int radius = 0; radius < reach; ++radius) {
    // Does some path from x to z avoid B(mid, radius)?
    if (from_mid[x] <= radius || from_mid[z] <= radius) return radius;
    std::fill(seen.begin(), seen.end(), 0);
    queue.clear();
    queue.push_back(x);
    seen[x] = 1;
    bool escaped = false;
    for (std::size_t head = 0; head < queue.size() && !escaped; ++head) {
      for (VertexId w : g.neighbors(queue[head])) {
        if (seen[w] || from_mid[w] <= radius) continue;
        if (w == z) {
          escaped = true;
          break;
        }
        seen[w] = 1;
        queue.push_back(w);
      }
    }
    if (!escaped) return radius;
  }
  return reach;
}

BottleneckResult bottleneck_check(const MetricGraph& g,
                                  std::span<const std::pair<VertexId, VertexId>> pairs) {
  BottleneckResult res;
  for (const auto& [x, z] : pairs) {
    const int r = bottleneck_radius(g, x, z);
    res.per_pair.push_back(r);
    res.delta = std::max(res.delta, r);
  }
  res.passed = true;
  return res;
}

}  // namespace qt
