#include "qt/projections.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <unordered_map>

namespace qt {

class FamilyAssembler {
 public:
  static void init(ProjectionFamily& f) {
    const std::size_t n = f.members_.size();
    f.table_.assign(n * n, kNoGroup);
    f.separation_.assign(n * n, 0);
    f.groups_.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
      if (!f.members_[i].shift.empty() || !f.members_[i].verts.empty()) {
        f.by_shift_.emplace(std::make_pair(f.members_[i].orbit, f.members_[i].shift), i);
      }
    }
  }

  // masks[x] is π_Y(X); entry y itself is ignored.
  static void set_row(ProjectionFamily& f, std::size_t y, const std::vector<std::uint64_t>& masks,
                      const std::vector<int>* sep) {
    const std::size_t n = f.members_.size();
    auto& grp = f.groups_[y];
    std::unordered_map<std::uint64_t, std::uint16_t> ids;
    for (std::size_t x = 0; x < n; ++x) {
      if (x == y) continue;
      if (masks[x] == 0) throw Error("empty projection for " + f.members_[x].label);
      auto [it, fresh] = ids.emplace(masks[x], static_cast<std::uint16_t>(grp.masks.size()));
      if (fresh) {
        if (grp.masks.size() + 1 >= kNoGroup) throw Error("too many distinct projections");
        grp.masks.push_back(masks[x]);
      }
      f.table_[y * n + x] = it->second;
      if (sep) f.separation_[y * n + x] = static_cast<std::uint8_t>(std::min((*sep)[x], 255));
    }
    const std::size_t g = grp.masks.size();
    grp.unsafe.resize(g);
    grp.diam.resize(g * g);
    for (std::size_t a = 0; a < g; ++a) {
      grp.unsafe[a] = (grp.masks[a] & f.boundary_[y]) != 0;
      for (std::size_t b = a; b < g; ++b) {
        const int d = f.diameter_of(y, grp.masks[a] | grp.masks[b]);
        grp.diam[a * g + b] = grp.diam[b * g + a] = static_cast<std::uint16_t>(d);
        grp.max_diam = std::max(grp.max_diam, d);
      }
    }
  }

  static void finish(ProjectionFamily& f) {
    const std::size_t n = f.members_.size();
    f.table_t_.assign(n * n, kNoGroup);
    constexpr std::size_t B = 64;
    for (std::size_t y0 = 0; y0 < n; y0 += B) {
      for (std::size_t x0 = 0; x0 < n; x0 += B) {
        for (std::size_t y = y0; y < std::min(n, y0 + B); ++y) {
          for (std::size_t x = x0; x < std::min(n, x0 + B); ++x) {
            f.table_t_[x * n + y] = f.table_[y * n + x];
          }
        }
      }
    }
  }

  static std::vector<Member>& members(ProjectionFamily& f) { return f.members_; }
  static std::vector<std::vector<std::uint16_t>>& local(ProjectionFamily& f) {
    return f.local_dist_;
  }
  static std::vector<std::uint64_t>& boundary(ProjectionFamily& f) { return f.boundary_; }
};

std::uint64_t ProjectionFamily::projection(std::size_t y, std::size_t x) const {
  if (y >= size() || x >= size() || x == y) throw Error("pair not materialized");
  return groups_[y].masks[group(y, x)];
}

int ProjectionFamily::proj_diam(std::size_t y, std::size_t x) const {
  if (y >= size() || x >= size() || x == y) throw Error("pair not materialized");
  const auto g = group(y, x);
  return group_diam(y, g, g);
}

int ProjectionFamily::d(std::size_t y, std::size_t x, std::size_t z) const {
  if (y >= size() || x >= size() || z >= size() || x == y || z == y) {
    throw Error("pair not materialized");
  }
  return group_diam(y, group(y, x), group(y, z));
}

bool ProjectionFamily::unsafe(std::size_t y, std::size_t x) const {
  if (y >= size() || x >= size() || x == y) throw Error("pair not materialized");
  return groups_[y].unsafe[group(y, x)];
}

int ProjectionFamily::separation(std::size_t y, std::size_t x) const {
  return separation_[y * size() + x];
}

std::optional<std::size_t> ProjectionFamily::find(std::size_t orbit, const Word& shift) const {
  auto it = by_shift_.find({orbit, shift});
  if (it == by_shift_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> ProjectionFamily::local_index(std::size_t y, VertexId v) const {
  const auto& vs = members_.at(y).verts;
  auto it = std::find(vs.begin(), vs.end(), v);
  if (it == vs.end()) return std::nullopt;
  return static_cast<std::size_t>(it - vs.begin());
}

int ProjectionFamily::diameter_of(std::size_t y, std::uint64_t mask) const {
  int best = 0;
  for (std::uint64_t a = mask; a; a &= a - 1) {
    const auto i = static_cast<std::size_t>(std::countr_zero(a));
    for (std::uint64_t b = a & (a - 1); b; b &= b - 1) {
      best = std::max(best, local_distance(y, i, static_cast<std::size_t>(std::countr_zero(b))));
    }
  }
  return best;
}

void ProjectionFamily::write_csv(std::ostream& out) const {
  out << "alpha,beta,proj_vertices\n";
  for (std::size_t y = 0; y < size(); ++y) {
    for (std::size_t x = 0; x < size(); ++x) {
      if (x == y) continue;
      out << y << ',' << x << ',';
      bool first = true;
      for (std::uint64_t m = projection(y, x); m; m &= m - 1) {
        out << (first ? "" : " ") << members_[y].names[std::countr_zero(m)];
        first = false;
      }
      out << '\n';
    }
  }
}

ProjectionFamily materialize_family(const AxisCollection& axes, const CayleyBall& ball,
                                    const FamilyOptions& opt) {
  if (opt.shift_radius < 0 || opt.shift_radius > ball.radius()) {
    throw Error("shift radius must lie in [0, ball radius]");
  }
  const Presentation& p = ball.presentation();
  const auto& sizes = ball.sphere_sizes();
  const VertexId shift_end = opt.shift_radius + 1 < static_cast<int>(sizes.size())
                                 ? ball.sphere_begin(opt.shift_radius + 1)
                                 : static_cast<VertexId>(ball.size());

  ProjectionFamily fam;
  auto& members = FamilyAssembler::members(fam);
  for (std::size_t i = 0; i < axes.axes.size(); ++i) {
    const Axis& axis = axes.axes[i];
    std::set<Word> keys;
    for (VertexId h = 0; h < shift_end; ++h) keys.insert(coset_key(p, axis, ball.word(h)));
    for (const auto& key : keys) {
      Member m;
      m.orbit = i;
      m.shift = key;
      const AxisSegment seg = axis.materialize(ball, key);
      if (seg.verts.size() > 64) throw Error("member segment exceeds 64 vertices; lower the radius");
      m.verts = seg.verts;
      for (VertexId v : m.verts) m.names.push_back(ball.graph().name(v));
      m.label = p.format(key) + ":" + p.format(axis.g());
      members.push_back(std::move(m));
    }
  }
  const std::size_t n = members.size();
  auto& local = FamilyAssembler::local(fam);
  auto& boundary = FamilyAssembler::boundary(fam);
  for (const auto& m : members) {
    const std::size_t k = m.verts.size();
    std::vector<std::uint16_t> dm(k * k, 0);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        const int d = p.distance(ball.word(m.verts[i]), ball.word(m.verts[j]));
        dm[i * k + j] = dm[j * k + i] = static_cast<std::uint16_t>(d);
      }
    }
    local.push_back(std::move(dm));
    boundary.push_back(k == 0 ? 0 : (std::uint64_t{1} | (std::uint64_t{1} << (k - 1))));
  }
  FamilyAssembler::init(fam);

  const auto& g = ball.graph();
  std::vector<int> dist(ball.size());
  std::vector<std::uint64_t> foot(ball.size());
  std::vector<VertexId> queue;
  queue.reserve(ball.size());
  std::vector<std::uint64_t> masks(n);
  std::vector<int> sep(n);
  for (std::size_t y = 0; y < n; ++y) {
    // Multi-source BFS from Y; the feet of a vertex are the union of the feet
    // of its predecessors on geodesics to Y.
    std::fill(dist.begin(), dist.end(), kUnreachable);
    std::fill(foot.begin(), foot.end(), 0);
    queue.clear();
    const auto& yv = members[y].verts;
    for (std::size_t i = 0; i < yv.size(); ++i) {
      dist[yv[i]] = 0;
      foot[yv[i]] = std::uint64_t{1} << i;
      queue.push_back(yv[i]);
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const VertexId u = queue[head];
      for (VertexId w : g.neighbors(u)) {
        if (dist[w] == kUnreachable) {
          dist[w] = dist[u] + 1;
          queue.push_back(w);
        }
        if (dist[w] == dist[u] + 1) foot[w] |= foot[u];
      }
    }
    for (std::size_t x = 0; x < n; ++x) {
      std::uint64_t m = 0;
      int s = std::numeric_limits<int>::max();
      for (VertexId v : members[x].verts) {
        m |= foot[v];
        s = std::min(s, dist[v]);
      }
      masks[x] = m;
      sep[x] = s;
    }
    FamilyAssembler::set_row(fam, y, masks, &sep);
  }
  FamilyAssembler::finish(fam);
  return fam;
}

int threshold(int value, int K) {
  if (K <= 0) throw Error("threshold K must be positive");
  return value >= K ? value : 0;
}

std::vector<std::size_t> shift_window(const ProjectionFamily& fam, int r) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    if (static_cast<int>(fam.member(i).shift.size()) <= r) out.push_back(i);
  }
  return out;
}

AxiomReport verify_axioms(const ProjectionFamily& fam, const std::vector<std::size_t>& window) {
  std::vector<std::size_t> W = window;
  if (W.empty()) {
    W.resize(fam.size());
    std::iota(W.begin(), W.end(), std::size_t{0});
  }
  AxiomReport rep;
  rep.members = W.size();

  for (std::size_t y : W) {
    for (std::size_t x : W) {
      if (x == y) continue;
      if (fam.unsafe(y, x)) {
        ++rep.unsafe_pairs;
        continue;
      }
      ++rep.safe_pairs;
      rep.p0_max = std::max(rep.p0_max, fam.proj_diam(y, x));
    }
  }

  auto safe = [&](std::size_t a, std::size_t b) { return !fam.unsafe(a, b); };

  int worst = 0;
  for (std::size_t y : W) {
    for (std::size_t x : W) {
      if (x == y || !safe(y, x) || !safe(x, y)) continue;
      for (std::size_t z : W) {
        if (z == x || z == y || !safe(y, z) || !safe(x, z)) continue;
        ++rep.triples;
        worst = std::max(worst, std::min(fam.d(y, x, z), fam.d(x, y, z)));
      }
    }
  }
  rep.xi = fam.declared_xi ? *fam.declared_xi : std::max(rep.p0_max, worst);

  std::set<Violation> viol;
  for (std::size_t y : W) {
    for (std::size_t x : W) {
      if (x == y || !safe(y, x) || !safe(x, y)) continue;
      for (std::size_t z : W) {
        if (z == x || z == y || !safe(y, z) || !safe(x, z)) continue;
        const int dy = fam.d(y, x, z);
        if (dy <= rep.xi) continue;
        if (fam.d(x, y, z) > rep.xi) viol.insert({std::min(x, y), std::max(x, y), z});
        if (fam.group(x, y) != fam.group(x, z)) rep.strong_ok = false;
      }
    }
  }
  rep.p1_violations.assign(viol.begin(), viol.end());

  for (std::size_t i = 0; i < W.size(); ++i) {
    for (std::size_t j = i + 1; j < W.size(); ++j) {
      const std::size_t x = W[i], z = W[j];
      if (!safe(x, z) || !safe(z, x)) continue;
      int count = 0;
      for (std::size_t y : W) {
        if (y == x || y == z || !safe(y, x) || !safe(y, z)) continue;
        if (fam.d(y, x, z) > rep.xi) ++count;
      }
      ++rep.p2_profile[count];
      rep.p2_max_count = std::max(rep.p2_max_count, count);
    }
  }
  return rep;
}

std::size_t SyntheticBuilder::add_member(std::size_t length, std::string label) {
  if (length == 0 || length > 64) throw Error("synthetic member length must lie in [1, 64]");
  lengths_.push_back(length);
  if (label.empty()) label = "s" + std::to_string(lengths_.size() - 1);
  labels_.push_back(std::move(label));
  boundary_.push_back(0);
  return lengths_.size() - 1;
}

void SyntheticBuilder::set_projection(std::size_t y, std::size_t x,
                                      std::vector<std::size_t> local) {
  if (y >= lengths_.size() || x >= lengths_.size() || x == y) throw Error("bad member pair");
  if (local.empty()) throw Error("projection must be nonempty");
  std::uint64_t m = 0;
  for (auto i : local) {
    if (i >= lengths_[y]) throw Error("projection vertex outside member");
    m |= std::uint64_t{1} << i;
  }
  proj_[{y, x}] = m;
}

void SyntheticBuilder::set_boundary(std::size_t y, std::vector<std::size_t> local) {
  std::uint64_t m = 0;
  for (auto i : local) {
    if (i >= lengths_.at(y)) throw Error("boundary vertex outside member");
    m |= std::uint64_t{1} << i;
  }
  boundary_.at(y) = m;
}

ProjectionFamily SyntheticBuilder::build(std::optional<int> declared_xi) && {
  ProjectionFamily fam;
  fam.declared_xi = declared_xi;
  auto& members = FamilyAssembler::members(fam);
  auto& local = FamilyAssembler::local(fam);
  const std::size_t n = lengths_.size();
  for (std::size_t i = 0; i < n; ++i) {
    Member m;
    m.orbit = i;
    m.label = labels_[i];
    for (std::size_t j = 0; j < lengths_[i]; ++j) m.names.push_back(std::to_string(j));
    members.push_back(std::move(m));
    std::vector<std::uint16_t> dm(lengths_[i] * lengths_[i]);
    for (std::size_t a = 0; a < lengths_[i]; ++a) {
      for (std::size_t b = 0; b < lengths_[i]; ++b) {
        dm[a * lengths_[i] + b] = static_cast<std::uint16_t>(a > b ? a - b : b - a);
      }
    }
    local.push_back(std::move(dm));
  }
  FamilyAssembler::boundary(fam) = boundary_;
  FamilyAssembler::init(fam);
  std::vector<std::uint64_t> masks(n);
  for (std::size_t y = 0; y < n; ++y) {
    for (std::size_t x = 0; x < n; ++x) {
      if (x == y) continue;
      auto it = proj_.find({y, x});
      if (it == proj_.end()) throw Error("pair not materialized");
      masks[x] = it->second;
    }
    FamilyAssembler::set_row(fam, y, masks, nullptr);
  }
  FamilyAssembler::finish(fam);
  return fam;
}

SyntheticFamily synthetic_family(const SyntheticOptions& opt) {
  if (opt.n < 3) throw Error("synthetic family needs at least 3 members");
  if (opt.spread < 0) throw Error("spread must be non-negative");
  if (3 * opt.planted > opt.n) throw Error("too many planted violations for family size");
  const auto s = static_cast<std::size_t>(opt.spread);
  const int xi = 2 * opt.spread;
  const std::size_t far = 3 * s + 1;  // exceeds xi + spread
  const std::size_t centre = far + s;
  const std::size_t length = 2 * centre + 1;
  if (length > 64) throw Error("spread too large for 64-vertex members");

  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<std::size_t> pos(centre - s, centre + s);
  std::vector<std::vector<std::size_t>> at(opt.n, std::vector<std::size_t>(opt.n, centre));
  for (std::size_t y = 0; y < opt.n; ++y) {
    for (std::size_t x = 0; x < opt.n; ++x) {
      if (x != y) at[y][x] = pos(rng);
    }
  }

  SyntheticFamily out;
  std::vector<std::size_t> perm(opt.n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  for (std::size_t k = 0; k < opt.planted; ++k) {
    const std::size_t x = perm[3 * k], y = perm[3 * k + 1], z = perm[3 * k + 2];
    at[y][x] = centre;
    at[y][z] = centre + far;
    at[x][y] = centre;
    at[x][z] = centre + far;
    out.planted.push_back({std::min(x, y), std::max(x, y), z});
  }
  std::sort(out.planted.begin(), out.planted.end());

  SyntheticBuilder b;
  for (std::size_t i = 0; i < opt.n; ++i) b.add_member(length);
  for (std::size_t y = 0; y < opt.n; ++y) {
    for (std::size_t x = 0; x < opt.n; ++x) {
      if (x != y) b.set_projection(y, x, {at[y][x]});
    }
  }
  out.family = std::move(b).build(xi);
  return out;
}

}  // namespace qt
