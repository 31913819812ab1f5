#include "qt/complex.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <limits>

namespace qt {

namespace {
constexpr std::size_t kAbsent = std::numeric_limits<std::size_t>::max();
constexpr std::size_t kDirectCheck = 16;
}  // namespace

VertexId QuasiTreeComplex::vertex(std::size_t comp, std::size_t local) const {
  if (comp + 1 >= offset_.size()) throw Error("component not in complex");
  const VertexId v = offset_[comp] + static_cast<VertexId>(local);
  if (v >= offset_[comp + 1]) throw Error("vertex not in graph");
  return v;
}

std::optional<std::size_t> QuasiTreeComplex::component_of(std::size_t member) const {
  if (member >= comp_of_member_.size() || comp_of_member_[member] == kAbsent) return std::nullopt;
  return comp_of_member_[member];
}

std::pair<std::size_t, std::size_t> QuasiTreeComplex::locate(VertexId v) const {
  graph_.check(v);
  auto it = std::upper_bound(offset_.begin(), offset_.end(), v);
  const auto comp = static_cast<std::size_t>(it - offset_.begin()) - 1;
  return {comp, static_cast<std::size_t>(v - offset_[comp])};
}

std::vector<std::pair<std::size_t, std::size_t>> unblocked_pairs(
    const ProjectionFamily& fam, const std::vector<std::size_t>& members, int K) {
  const std::size_t m = members.size();
  // Only members with some projection pair at distance >= K can block.
  std::vector<std::size_t> blockers;
  for (std::size_t y : members) {
    if (fam.max_group_diam(y) >= K) blockers.push_back(y);
  }
  // Per blocker, whether a single group is already K-large on its own.
  std::vector<std::size_t> self_off(blockers.size() + 1, 0);
  for (std::size_t b = 0; b < blockers.size(); ++b) {
    self_off[b + 1] = self_off[b] + fam.group_count(blockers[b]);
  }
  std::vector<char> self_big(self_off.back());
  for (std::size_t b = 0; b < blockers.size(); ++b) {
    for (std::size_t g = 0; g < fam.group_count(blockers[b]); ++g) {
      const auto gg = static_cast<std::uint16_t>(g);
      self_big[self_off[b] + g] = fam.group_diam(blockers[b], gg, gg) >= K;
    }
  }

  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::vector<std::size_t> cand, keep;
  std::array<std::vector<std::size_t>, 256> buckets;
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t x = members[i];
    cand.clear();
    for (std::size_t j = i + 1; j < m; ++j) cand.push_back(j);
    if (cand.empty()) continue;

    // Nearby blockers first: they cut the candidate list fastest.
    for (auto& b : buckets) b.clear();
    for (std::size_t b = 0; b < blockers.size(); ++b) {
      if (blockers[b] != x) buckets[static_cast<std::size_t>(fam.separation(x, blockers[b]))].push_back(b);
    }
    order.clear();
    for (const auto& b : buckets) order.insert(order.end(), b.begin(), b.end());

    const std::uint16_t* rx = fam.row_t(x);
    std::size_t pos = 0;
    for (; pos < order.size() && cand.size() > kDirectCheck; ++pos) {
      const std::size_t y = blockers[order[pos]];
      const std::uint16_t gx = rx[y];
      keep.clear();
      for (std::size_t j : cand) {
        const std::size_t z = members[j];
        if (z == y || fam.group_diam(y, gx, fam.group(y, z)) < K) keep.push_back(j);
      }
      cand.swap(keep);
    }
    if (pos < order.size()) {
      std::vector<std::size_t> rest(order.begin() + static_cast<long>(pos), order.end());
      std::sort(rest.begin(), rest.end());
      for (std::size_t j : cand) {
        const std::size_t z = members[j];
        const std::uint16_t* rz = fam.row_t(z);
        bool blocked = false;
        for (std::size_t b : rest) {
          const std::size_t y = blockers[b];
          if (y == z) continue;
          const std::uint16_t gx = rx[y], gz = rz[y];
          if (gx == gz ? self_big[self_off[b] + gx] != 0 : fam.group_diam(y, gx, gz) >= K) {
            blocked = true;
            break;
          }
        }
        if (!blocked) out.emplace_back(i, j);
      }
    } else {
      for (std::size_t j : cand) out.emplace_back(i, j);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

QuasiTreeComplex build_complex(const ProjectionFamily& fam, const std::vector<std::size_t>& members,
                               const ComplexConfig& cfg, std::optional<int> xi) {
  if (cfg.K <= 0) throw Error("threshold K must be positive");
  if (cfg.enforce_policy && xi && cfg.K < 4 * *xi) throw Error("threshold under 4ξ");
  QuasiTreeComplex c;
  c.K_ = cfg.K;
  c.members_ = members;
  c.comp_of_member_.assign(fam.size(), kAbsent);
  MetricGraph::Builder b;
  c.offset_.push_back(0);
  for (std::size_t k = 0; k < members.size(); ++k) {
    const std::size_t y = members[k];
    if (c.comp_of_member_.at(y) != kAbsent) throw Error("member listed twice");
    c.comp_of_member_[y] = k;
    const auto& names = fam.member(y).names;
    for (std::size_t j = 0; j < names.size(); ++j) {
      const VertexId v = b.add_vertex(std::to_string(y) + "/" + names[j]);
      if (j > 0) b.add_edge(v - 1, v);
    }
    c.offset_.push_back(static_cast<VertexId>(b.size()));
  }
  c.cross_ = unblocked_pairs(fam, members, cfg.K);
  for (const auto& [i, j] : c.cross_) {
    const std::size_t x = members[i], z = members[j];
    for (std::uint64_t a = fam.projection(x, z); a; a &= a - 1) {
      for (std::uint64_t w = fam.projection(z, x); w; w &= w - 1) {
        b.add_edge(c.offset_[i] + std::countr_zero(a), c.offset_[j] + std::countr_zero(w));
      }
    }
  }
  c.graph_ = std::move(b).build();
  return c;
}

int complex_distance(const QuasiTreeComplex& c, VertexId x, VertexId z) {
  const int d = c.graph().distances_from(x)[z];
  if (d == kUnreachable) {
    throw Error("complex disconnected between " + c.graph().name(x) + " and " +
                c.graph().name(z) + " (truncation artifact)");
  }
  return d;
}

int distance_formula_sum(const QuasiTreeComplex& c, const ProjectionFamily& fam, VertexId xv,
                         VertexId zv, bool* unsafe) {
  const auto [a, i] = c.locate(xv);
  const auto [b, j] = c.locate(zv);
  const std::size_t X = c.members()[a], Z = c.members()[b];
  const int K = c.K();
  bool bad = false;
  int sigma = 0;
  if (X == Z) {
    sigma += threshold(fam.local_distance(X, i, j), K);
  } else {
    bad = fam.unsafe(X, Z) || fam.unsafe(Z, X);
    sigma += threshold(fam.diameter_of(X, fam.projection(X, Z) | (std::uint64_t{1} << i)), K);
    sigma += threshold(fam.diameter_of(Z, fam.projection(Z, X) | (std::uint64_t{1} << j)), K);
  }
  for (std::size_t y : c.members()) {
    if (y == X || y == Z) continue;
    const int t = threshold(fam.d(y, X, Z), K);
    if (t > 0 && (fam.unsafe(y, X) || fam.unsafe(y, Z))) bad = true;
    sigma += t;
  }
  if (unsafe) *unsafe = bad;
  return sigma;
}

FormulaReport verify_distance_formula(const QuasiTreeComplex& c, const ProjectionFamily& fam,
                                      const std::vector<std::pair<VertexId, VertexId>>& samples) {
  FormulaReport rep;
  const int K = c.K();
  for (const auto& [x, z] : samples) {
    bool bad = false;
    const int sigma = distance_formula_sum(c, fam, x, z, &bad);
    if (bad) {
      ++rep.unsafe;
      continue;
    }
    FormulaRow row{x, z, c.graph().distances_from(x)[z], sigma, true};
    if (row.d == kUnreachable) {
      row.ok = false;
    } else {
      row.ok = 4 * row.d >= sigma && row.d <= 2 * sigma + 3 * K;
      if (row.d > 0) {
        rep.max_sigma_over_d = std::max(rep.max_sigma_over_d, double(sigma) / row.d);
      }
      if (sigma > 0) {
        rep.max_excess_over_sigma =
            std::max(rep.max_excess_over_sigma, double(row.d - 3 * K) / sigma);
      }
    }
    if (!row.ok) ++rep.violations;
    rep.rows.push_back(row);
  }
  return rep;
}

MainEstimateReport verify_main_estimate(const CayleyBall& ball, const AxisCollection& axes,
                                        const ProjectionFamily& fam, const MainEstimateConfig& cfg,
                                        const std::vector<std::pair<Word, Word>>& pairs) {
  const Presentation& p = ball.presentation();
  MainEstimateReport rep;
  std::vector<MainEstimateRow> all;
  std::vector<std::pair<VertexId, VertexId>> verts;
  for (const auto& [x, y] : pairs) {
    const auto vx = ball.locate(x);
    const auto vy = ball.locate(y);
    if (!vx || !vy) throw Error("main estimate pair outside ball");
    MainEstimateRow row;
    row.x = p.reduce(x);
    row.y = p.reduce(y);
    row.d = p.distance(x, y);
    row.witness_R = row.d == 0 ? 0 : witness_axis(x, y, axes, ball).R;
    all.push_back(std::move(row));
    verts.emplace_back(*vx, *vy);
  }
  int witness_max = 0;
  for (const auto& row : all) witness_max = std::max(witness_max, row.witness_R);
  rep.R = cfg.R < 0 ? witness_max : cfg.R;

  auto feet = [](const std::vector<VertexId>& vs, const std::vector<int>& dist) {
    int best = std::numeric_limits<int>::max();
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const int d = dist[vs[i]];
      if (d < best) {
        best = d;
        mask = 0;
      }
      if (d == best) mask |= std::uint64_t{1} << i;
    }
    return mask;
  };
  bool first = true;
  for (std::size_t k = 0; k < all.size(); ++k) {
    auto& row = all[k];
    if (row.witness_R > rep.R) {
      ++rep.skipped;
      continue;
    }
    const auto dx = ball.graph().distances_from(verts[k].first);
    const auto dy = ball.graph().distances_from(verts[k].second);
    for (std::size_t m = 0; m < fam.size(); ++m) {
      const auto& vs = fam.member(m).verts;
      row.sigma += threshold(fam.diameter_of(m, feet(vs, dx) | feet(vs, dy)), cfg.K);
    }
    row.rhs = 2 * row.sigma + cfg.L + 2 * rep.R;
    row.ok = row.d <= row.rhs;
    if (!row.ok) ++rep.violations;
    rep.max_witness_R = std::max(rep.max_witness_R, row.witness_R);
    rep.min_margin = first ? row.rhs - row.d : std::min(rep.min_margin, row.rhs - row.d);
    first = false;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace qt
