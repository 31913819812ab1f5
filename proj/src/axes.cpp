#include "qt/axes.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <ostream>
#include <set>
#include <unordered_map>

namespace qt {

AxisSegment Axis::materialize(const CayleyBall& ball, const Word& h) const {
  auto anchor = ball.locate(h);
  if (!anchor) throw Error("axis anchor outside ball: " + ball.presentation().format(h));
  return materialize_at(ball, *anchor);
}

AxisSegment Axis::materialize_at(const CayleyBall& ball, VertexId anchor) const {
  const long k = static_cast<long>(base_.size());
  auto letter_at = [&](long t) { return base_[static_cast<std::size_t>(((t % k) + k) % k)]; };
  std::vector<VertexId> fwd{anchor}, back;
  // The ball is finite and g has infinite order, so both walks terminate; the
  // bound only protects against a malformed ball.
  const std::size_t limit = ball.size() + 1;
  for (long t = 0;; ++t) {
    const VertexId next = ball.step(fwd.back(), letter_at(t));
    if (next == kUnreachable || fwd.size() > limit) break;
    fwd.push_back(next);
  }
  VertexId cur = anchor;
  for (long t = 0;; --t) {
    const VertexId prev = ball.step(cur, inverse_letter(letter_at(t - 1)));
    if (prev == kUnreachable || back.size() > limit) break;
    back.push_back(prev);
    cur = prev;
  }
  AxisSegment seg;
  seg.t_begin = -static_cast<long>(back.size());
  seg.verts.assign(back.rbegin(), back.rend());
  seg.verts.insert(seg.verts.end(), fwd.begin(), fwd.end());
  return seg;
}

std::vector<Word> Axis::subwords(std::size_t max_len) const {
  std::set<Word> out;
  const std::size_t k = base_.size();
  for (const Word& period : {base_, base_.inverse()}) {
    for (std::size_t start = 0; start < k; ++start) {
      Word w;
      for (std::size_t len = 1; len <= max_len; ++len) {
        w.push_back(period[(start + len - 1) % k]);
        out.insert(w);
      }
    }
  }
  return {out.begin(), out.end()};
}

std::vector<Word> Axis::powers(const Presentation& p, int reach) const {
  std::vector<Word> out;
  const Word inv = g_.inverse();
  for (int n = -reach; n <= reach; ++n) {
    Word w;
    for (int i = 0; i < std::abs(n); ++i) w += (n < 0 ? inv : g_);
    out.push_back(p.reduce(w));
  }
  return out;
}

Axis build_axis(const Presentation& p, const Word& g) {
  if (!p.is_primitive(g)) throw Error("axis requires indivisible element");
  Word fwd = p.reduce(g);
  Word bwd = p.reduce(g.inverse());
  if (bwd < fwd) {
    Word base = bwd;
    return Axis(std::move(bwd), std::move(base));
  }
  Word base = fwd;
  return Axis(std::move(fwd), std::move(base));
}

Axis build_axis(const Presentation& p, const Word& g, const CayleyBall& ball) {
  Axis a = build_axis(p, g);
  if (ball.radius() < 2 * static_cast<int>(a.period())) {
    throw Error("ball radius must be at least twice the axis period");
  }
  return a;
}

AxisCollection candidate_axes(const Presentation& p, int max_len) {
  if (max_len < 1) throw Error("candidate length bound must be positive");
  const CayleyBall ball(p, max_len);
  std::set<Word> reps;
  for (VertexId v = 1; v < static_cast<VertexId>(ball.size()); ++v) {
    const Word& w = ball.word(v);
    if (p.cyclically_reduce(w).size() != w.size()) continue;
    Word rep = p.conjugacy_representative(w);
    if (reps.count(rep) || !p.is_primitive(rep)) continue;
    reps.insert(std::move(rep));
  }
  AxisCollection out;
  out.tag = AxisTag::candidates;
  for (const auto& r : reps) out.axes.push_back(build_axis(p, r));
  return out;
}

AxisCollection select_preferred_axes(const Presentation&, const AxisCollection& candidates,
                                     const AxesConfig& cfg, const CayleyBall&) {
  if (candidates.axes.empty()) throw Error("empty candidate pool");
  if (cfg.L < 1) throw Error("L must be positive");
  const auto L = static_cast<std::size_t>(cfg.L);
  std::vector<std::vector<Word>> subs;
  std::set<Word> all;
  for (const auto& a : candidates.axes) {
    subs.push_back(a.subwords(L));
    all.insert(subs.back().begin(), subs.back().end());
  }
  std::set<Word> covered;
  std::vector<bool> chosen(candidates.axes.size(), false);
  for (const auto& w : all) {
    if (covered.count(w)) continue;
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (chosen[i] || !std::binary_search(subs[i].begin(), subs[i].end(), w)) continue;
      chosen[i] = true;
      covered.insert(subs[i].begin(), subs[i].end());
      break;
    }
  }
  AxisCollection out;
  out.tag = AxisTag::preferred;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    if (chosen[i]) out.axes.push_back(candidates.axes[i]);
  }
  return out;
}

Coverage coverage(const AxisCollection& candidates, const AxisCollection& selected, int L) {
  std::set<Word> all, covered;
  for (const auto& a : candidates.axes) {
    for (auto& w : a.subwords(static_cast<std::size_t>(L))) all.insert(std::move(w));
  }
  for (const auto& a : selected.axes) {
    for (auto& w : a.subwords(static_cast<std::size_t>(L))) covered.insert(std::move(w));
  }
  Coverage c;
  c.words.assign(all.begin(), all.end());
  for (const auto& w : all) {
    if (!covered.count(w)) c.uncovered.push_back(w);
  }
  return c;
}

Word coset_key(const Presentation& p, const Axis& axis, const Word& h) {
  const Word nh = p.reduce(h);
  const int k = static_cast<int>(axis.period());
  const int reach = (2 * static_cast<int>(nh.size()) + 2) / k + 2;
  Word best = nh;
  for (const auto& w : axis.powers(p, reach)) best = std::min(best, p.reduce(nh + w));
  return best;
}

Word double_coset_key(const Axis& axis, const CayleyBall& ball, const Word& h) {
  const Presentation& p = ball.presentation();
  const int k = static_cast<int>(axis.period());
  const int reach = (ball.radius() + 2 * static_cast<int>(h.size())) / k + 2;
  const auto pw = axis.powers(p, reach);
  std::optional<Word> best;
  for (const auto& left : pw) {
    const Word lh = p.reduce(left + h);
    for (const auto& right : pw) {
      Word w = p.reduce(lh + right);
      if (static_cast<int>(w.size()) > ball.radius()) continue;
      if (!best || w < *best) best = std::move(w);
    }
  }
  if (!best) throw Error("double coset has no element in the ball");
  return *best;
}

ScanResult double_coset_scan(const Axis& axis, const CayleyBall& ball, int theta) {
  if (theta < 0) throw Error("theta must be non-negative");
  const Presentation& p = ball.presentation();
  const AxisSegment gamma = axis.materialize(ball);
  const std::size_t n = gamma.verts.size();
  if (n > 64) throw Error("axis segment longer than 64 vertices");
  const long k = static_cast<long>(axis.period());

  std::unordered_map<VertexId, std::size_t> local;
  for (std::size_t i = 0; i < n; ++i) local.emplace(gamma.verts[i], i);
  std::vector<std::vector<int>> dmat(n, std::vector<int>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      dmat[i][j] = dmat[j][i] = p.distance(ball.word(gamma.verts[i]), ball.word(gamma.verts[j]));
    }
  }

  // Nearest-point feet on gamma for every ball vertex.
  const auto& g = ball.graph();
  const auto dist = g.distances_from(gamma.verts);
  std::vector<VertexId> order(ball.size());
  for (std::size_t v = 0; v < order.size(); ++v) order[v] = static_cast<VertexId>(v);
  std::stable_sort(order.begin(), order.end(),
                   [&](VertexId a, VertexId b) { return dist[a] < dist[b]; });
  std::vector<std::uint64_t> foot(ball.size(), 0);
  for (VertexId v : order) {
    if (dist[v] == 0) {
      foot[v] = std::uint64_t{1} << local.at(v);
      continue;
    }
    for (VertexId w : g.neighbors(v)) {
      if (dist[w] == dist[v] - 1) foot[v] |= foot[w];
    }
  }
  const std::uint64_t boundary = (std::uint64_t{1} << (n - 1)) | 1u;

  ScanResult res;
  std::map<Word, ScanEntry> grouped;
  for (VertexId h = 0; h < static_cast<VertexId>(ball.size()); ++h) {
    if (auto it = local.find(h); it != local.end()) {
      const long t = gamma.t_begin + static_cast<long>(it->second);
      if (t % k == 0) continue;  // h in <g>: same axis
    }
    ++res.scanned;
    const AxisSegment seg = axis.materialize_at(ball, h);
    std::uint64_t mask = 0;
    for (VertexId v : seg.verts) mask |= foot[v];
    if (mask & boundary) {
      ++res.truncated;
      continue;
    }
    int diam = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(mask >> i & 1u)) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (mask >> j & 1u) diam = std::max(diam, dmat[i][j]);
      }
    }
    if (diam <= theta) continue;
    Word key = double_coset_key(axis, ball, ball.word(h));
    auto& e = grouped[key];
    e.key = key;
    e.diam = std::max(e.diam, diam);
    ++e.translates;
  }
  for (auto& [_, e] : grouped) res.entries.push_back(std::move(e));
  return res;
}

Witness witness_axis(const Word& x, const Word& y, const AxisCollection& candidates,
                     const CayleyBall& ball) {
  const auto vx = ball.locate(x);
  const auto vy = ball.locate(y);
  if (!vx || !vy) throw Error("witness endpoints outside ball");
  const auto dx = ball.graph().distances_from(*vx);
  const auto dy = ball.graph().distances_from(*vy);
  std::optional<Witness> best;
  for (std::size_t i = 0; i < candidates.axes.size(); ++i) {
    for (VertexId h = 0; h < static_cast<VertexId>(ball.size()); ++h) {
      const AxisSegment seg = candidates.axes[i].materialize_at(ball, h);
      int rx = -1, ry = -1;
      for (VertexId v : seg.verts) {
        if (dx[v] != kUnreachable && (rx < 0 || dx[v] < rx)) rx = dx[v];
        if (dy[v] != kUnreachable && (ry < 0 || dy[v] < ry)) ry = dy[v];
      }
      if (rx < 0 || ry < 0) continue;
      const int r = std::max(rx, ry);
      if (!best || r < best->R) best = Witness{i, ball.word(h), r};
    }
  }
  if (!best) throw Error("witness not found at this truncation");
  return *best;
}

void write_axes(std::ostream& out, const Presentation& p, const AxisCollection& axes) {
  for (const auto& a : axes.axes) {
    out << "g=" << p.format(a.g()) << "; base=" << p.format(a.base()) << '\n';
  }
}

void write_scan_csv(std::ostream& out, const Presentation& p, const ScanResult& scan) {
  out << "coset_key,diam\n";
  for (const auto& e : scan.entries) out << p.format(e.key) << ',' << e.diam << '\n';
}

}  // namespace qt
