#include "qt/embed.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace qt {

bool conflict(const ProjectionFamily& fam, std::size_t a, std::size_t b, int theta) {
  return fam.proj_diam(a, b) > theta || fam.proj_diam(b, a) > theta;
}

namespace {

std::map<std::size_t, std::vector<std::size_t>> by_orbit(const ProjectionFamily& fam) {
  std::map<std::size_t, std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < fam.size(); ++i) out[fam.member(i).orbit].push_back(i);
  return out;
}

bool compatible(const ProjectionFamily& fam, const std::vector<std::size_t>& group,
                const std::vector<std::size_t>& cls, int theta) {
  for (std::size_t a : group) {
    for (std::size_t b : cls) {
      if (conflict(fam, a, b, theta)) return false;
    }
  }
  return true;
}

}  // namespace

int orbit_conflict_bound(const ProjectionFamily& fam) {
  int bound = 0;
  for (const auto& [_, ms] : by_orbit(fam)) {
    for (std::size_t a : ms) {
      for (std::size_t b : ms) {
        if (a != b) bound = std::max(bound, fam.proj_diam(a, b));
      }
    }
  }
  return bound;
}

ColorClasses greedy_color(const ProjectionFamily& fam, int theta) {
  if (theta < 0) throw Error("theta must be non-negative");
  ColorClasses out;
  out.theta = theta;
  out.color_of.assign(fam.size(), -1);
  auto place = [&](const std::vector<std::size_t>& group) {
    std::size_t c = 0;
    while (c < out.classes.size() && !compatible(fam, group, out.classes[c], theta)) ++c;
    if (c == out.classes.size()) out.classes.emplace_back();
    for (std::size_t a : group) {
      out.classes[c].push_back(a);
      out.color_of[a] = static_cast<int>(c);
    }
  };
  for (const auto& [orbit, ms] : by_orbit(fam)) {
    bool internal = false;
    for (std::size_t i = 0; i < ms.size() && !internal; ++i) {
      for (std::size_t j = i + 1; j < ms.size() && !internal; ++j) {
        internal = conflict(fam, ms[i], ms[j], theta);
      }
    }
    if (!internal) {
      place(ms);
      continue;
    }
    out.split_orbits.push_back(orbit);
    for (std::size_t a : ms) place({a});
  }
  for (auto& c : out.classes) std::sort(c.begin(), c.end());
  return out;
}

int product_distance(const ProductSpace& sp, const BasepointTuple& a, const BasepointTuple& b) {
  if (a.size() != sp.factors.size() || b.size() != sp.factors.size()) {
    throw Error("basepoint tuple does not match factor count");
  }
  int total = 0;
  for (std::size_t i = 0; i < sp.factors.size(); ++i) {
    const int d = sp.factors[i].graph().distances_from(a[i])[b[i]];
    if (d == kUnreachable) throw Error("factor " + std::to_string(i) + " is disconnected");
    total += d;
  }
  return total;
}

BasepointTuple identity_basepoint(const ProductSpace& sp, const ProjectionFamily& fam,
                                  const CayleyBall& ball) {
  const auto one = ball.find(Word{});
  BasepointTuple x;
  for (std::size_t i = 0; i < sp.factors.size(); ++i) {
    const auto& f = sp.factors[i];
    std::optional<VertexId> v;
    for (std::size_t k = 0; k < f.members().size() && !v; ++k) {
      const std::size_t m = f.members()[k];
      if (!fam.member(m).shift.empty()) continue;
      if (auto li = fam.local_index(m, *one)) v = f.vertex(k, *li);
    }
    if (!v) throw Error("factor " + std::to_string(i) + " has no member through the identity");
    x.push_back(*v);
  }
  return x;
}

BasepointTuple orbit_map(const Word& h, const BasepointTuple& x, const ProductSpace& sp,
                         const ProjectionFamily& fam, const AxisCollection& axes,
                         const CayleyBall& ball) {
  const Presentation& p = ball.presentation();
  BasepointTuple out;
  for (std::size_t i = 0; i < sp.factors.size(); ++i) {
    const auto& f = sp.factors[i];
    const auto [comp, local] = f.locate(x.at(i));
    const Member& src = fam.member(f.members()[comp]);
    const Word key = coset_key(p, axes.axes.at(src.orbit), h + src.shift);
    const auto target = fam.find(src.orbit, key);
    if (!target) throw Error("enlarge ball: translate " + p.format(key) + " not materialized");
    const auto tcomp = f.component_of(*target);
    if (!tcomp) throw Error("orbit map leaves colour class " + std::to_string(i));
    const auto v = ball.locate(h + ball.word(src.verts[local]));
    if (!v) throw Error("enlarge ball: image vertex outside truncation");
    const auto li = fam.local_index(*target, *v);
    if (!li) throw Error("enlarge ball: image vertex outside member segment");
    out.push_back(f.vertex(*tcomp, *li));
  }
  return out;
}

EmbeddingReport qi_certify(const ProductSpace& sp, const BasepointTuple& x,
                           const ProjectionFamily& fam, const AxisCollection& axes,
                           const CayleyBall& ball, const EmbeddingConfig& cfg) {
  if (cfg.radius > ball.radius()) throw Error("certification radius exceeds ball radius");
  std::vector<std::vector<int>> dist;
  for (std::size_t i = 0; i < sp.factors.size(); ++i) {
    dist.push_back(sp.factors[i].graph().distances_from(x.at(i)));
  }
  auto measure = [&](const Word& h) {
    const auto hx = orbit_map(h, x, sp, fam, axes, ball);
    int total = 0;
    for (std::size_t i = 0; i < hx.size(); ++i) {
      if (dist[i][hx[i]] == kUnreachable) return kUnreachable;
      total += dist[i][hx[i]];
    }
    return total;
  };

  EmbeddingReport rep;
  const Presentation& p = ball.presentation();
  for (Letter l = 0; l < p.alphabet_size(); ++l) {
    Word g;
    g.push_back(l);
    const int d = measure(g);
    if (d == kUnreachable) throw Error("generator image disconnected from basepoint");
    rep.c_up = std::max(rep.c_up, d);
  }

  const VertexId end = cfg.radius + 1 < static_cast<int>(ball.sphere_sizes().size())
                           ? ball.sphere_begin(cfg.radius + 1)
                           : static_cast<VertexId>(ball.size());
  rep.min_ratio = std::numeric_limits<double>::infinity();
  for (VertexId v = 0; v < end; ++v) {
    EmbeddingRow row;
    row.h = ball.word(v);
    row.length = static_cast<int>(row.h.size());
    row.dist = measure(row.h);
    if (row.dist == kUnreachable) {
      row.lower_ok = row.upper_ok = false;
    } else {
      row.lower_ok = 8 * row.dist >= row.length - cfg.L - 2 * cfg.R;
      row.upper_ok = row.dist <= rep.c_up * row.length;
      if (row.length > 0) rep.min_ratio = std::min(rep.min_ratio, double(row.dist) / row.length);
    }
    if (!row.lower_ok) ++rep.lower_violations;
    if (!row.upper_ok) ++rep.upper_violations;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace qt
