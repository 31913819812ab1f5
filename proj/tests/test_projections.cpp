#include <doctest.h>

#include <map>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "qt/projections.hpp"

using namespace qt;

namespace {

int mask_diam(std::uint64_t m) {
  if (!m) return 0;
  return 63 - std::countl_zero(m) - std::countr_zero(m);
}

}  // namespace

TEST_CASE("threshold") {
  CHECK(threshold(3, 4) == 0);
  CHECK(threshold(4, 4) == 4);
  CHECK(threshold(9, 4) == 9);
  CHECK_THROWS_AS(threshold(3, 0), Error);
}

TEST_CASE("hand-built family") {
  SyntheticBuilder b;
  for (int i = 0; i < 3; ++i) b.add_member(5);
  b.set_projection(0, 1, {1});
  b.set_projection(0, 2, {3});
  b.set_projection(1, 0, {2});
  b.set_projection(1, 2, {2});
  b.set_projection(2, 0, {0, 1});
  b.set_projection(2, 1, {4});
  b.set_boundary(2, {0});
  const auto fam = std::move(b).build();
  CHECK(fam.size() == 3);
  CHECK(fam.d(0, 1, 2) == 2);
  CHECK(fam.d(1, 0, 2) == 0);
  CHECK(fam.proj_diam(2, 0) == 1);
  CHECK(fam.d(2, 0, 1) == 4);
  CHECK(fam.unsafe(2, 0));
  CHECK_FALSE(fam.unsafe(2, 1));
  CHECK_FALSE(fam.unsafe(0, 1));
  CHECK(fam.local_distance(0, 1, 4) == 3);
  CHECK(fam.diameter_of(1, 0b10001) == 4);
  CHECK_THROWS_AS(fam.d(0, 0, 1), Error);
  CHECK_THROWS_AS(fam.projection(5, 1), Error);

  std::ostringstream os;
  fam.write_csv(os);
  CHECK(os.str().rfind("alpha,beta,proj_vertices\n0,1,1\n0,2,3\n", 0) == 0);
  CHECK(os.str().find("2,0,0 1\n") != std::string::npos);

  SyntheticBuilder incomplete;
  incomplete.add_member(3);
  incomplete.add_member(3);
  incomplete.set_projection(0, 1, {0});
  CHECK_THROWS_AS(std::move(incomplete).build(), Error);
  SyntheticBuilder bad;
  bad.add_member(3);
  bad.add_member(3);
  CHECK_THROWS_AS(bad.set_projection(0, 1, {3}), Error);
  CHECK_THROWS_AS(bad.set_projection(0, 0, {1}), Error);
  CHECK_THROWS_AS(bad.add_member(65), Error);
}

TEST_CASE("axiom verifier against a direct evaluation") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t n = 4 + trial % 5;
    const std::size_t len = 10;
    std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> proj;
    SyntheticBuilder b;
    for (std::size_t i = 0; i < n; ++i) b.add_member(len);
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t x = 0; x < n; ++x) {
        if (x == y) continue;
        const std::size_t lo = rng() % len, hi = std::min(len - 1, lo + rng() % 3);
        std::vector<std::size_t> pts;
        std::uint64_t m = 0;
        for (std::size_t i = lo; i <= hi; ++i) {
          pts.push_back(i);
          m |= std::uint64_t{1} << i;
        }
        b.set_projection(y, x, pts);
        proj[{y, x}] = m;
      }
    }
    const int declared = 3 + trial % 3;
    const auto fam = std::move(b).build(declared);
    const auto rep = verify_axioms(fam);

    int p0 = 0;
    for (const auto& [_, m] : proj) p0 = std::max(p0, mask_diam(m));
    auto dY = [&](std::size_t y, std::size_t x, std::size_t z) {
      return mask_diam(proj[{y, x}] | proj[{y, z}]);
    };
    std::set<Violation> want;
    std::map<int, std::size_t> profile;
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        for (std::size_t z = 0; z < n; ++z) {
          if (x == y || y == z || x == z) continue;
          if (dY(y, x, z) > declared && dY(x, y, z) > declared)
            want.insert({std::min(x, y), std::max(x, y), z});
        }
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t z = x + 1; z < n; ++z) {
        int c = 0;
        for (std::size_t y = 0; y < n; ++y)
          if (y != x && y != z && dY(y, x, z) > declared) ++c;
        ++profile[c];
      }
    CHECK(rep.xi == declared);
    CHECK(rep.p0_max == p0);
    CHECK(rep.p1_violations == std::vector<Violation>(want.begin(), want.end()));
    CHECK(rep.p2_profile == profile);
    CHECK(rep.triples == n * (n - 1) * (n - 2));
  }
}

TEST_CASE("measured xi without a declaration") {
  SyntheticBuilder b;
  for (int i = 0; i < 3; ++i) b.add_member(9);
  for (std::size_t y = 0; y < 3; ++y)
    for (std::size_t x = 0; x < 3; ++x)
      if (x != y) b.set_projection(y, x, {4});
  b.set_projection(0, 1, {2});
  b.set_projection(0, 2, {7});
  const auto fam = std::move(b).build();
  const auto rep = verify_axioms(fam);
  // the largest min(d_Y, d_X) is 0 here, p0 is 0
  CHECK(rep.xi == 0);
  CHECK(rep.p1_violations.empty());
}

TEST_CASE("planted violations are found exactly") {
  for (std::uint64_t seed : {1u, 2u, 3u, 9u}) {
    for (std::size_t planted : {0u, 1u, 3u}) {
      SyntheticOptions o;
      o.seed = seed;
      o.n = 10;
      o.spread = 2;
      o.planted = planted;
      const auto syn = synthetic_family(o);
      REQUIRE(syn.planted.size() == planted);
      const auto rep = verify_axioms(syn.family);
      CHECK(rep.xi == 4);
      CHECK(rep.p1_violations == syn.planted);
      if (planted == 0) CHECK(rep.p0_max <= 4);
    }
  }
  SyntheticOptions too_many;
  too_many.n = 5;
  too_many.planted = 2;
  CHECK_THROWS_AS(synthetic_family(too_many), Error);
}

TEST_CASE("cayley family projections follow the definition") {
  const auto p = Presentation::free_group(2);
  const CayleyBall ball(p, 4);
  AxisCollection axes;
  axes.axes = {build_axis(p, p.parse_word("a")), build_axis(p, p.parse_word("b"))};
  const auto fam = materialize_family(axes, ball, {1});
  // a-axis: cosets of <a> meeting B(1) are <a>, b<a>, B<a>; same for b
  CHECK(fam.size() == 6);
  const auto d = oracle::all_pairs(ball.graph());
  for (std::size_t y = 0; y < fam.size(); ++y) {
    const auto& yv = fam.member(y).verts;
    for (std::size_t i = 0; i < yv.size(); ++i)
      for (std::size_t j = 0; j < yv.size(); ++j)
        CHECK(fam.local_distance(y, i, j) == d[yv[i]][yv[j]]);
    for (std::size_t x = 0; x < fam.size(); ++x) {
      if (x == y) continue;
      std::uint64_t want = 0;
      for (VertexId s : fam.member(x).verts) {
        int best = oracle::kInf;
        for (VertexId t : yv) best = std::min(best, d[s][t]);
        for (std::size_t i = 0; i < yv.size(); ++i)
          if (d[s][yv[i]] == best) want |= std::uint64_t{1} << i;
      }
      CHECK(fam.projection(y, x) == want);
      // trees: distinct lines project to single points
      CHECK(fam.proj_diam(y, x) == 0);
    }
  }
  const auto id = fam.find(0, Word{});
  REQUIRE(id);
  CHECK(fam.local_index(*id, *ball.find(p.parse_word("aa"))) == std::size_t{6});
  CHECK_FALSE(fam.local_index(*id, *ball.find(p.parse_word("b"))));
  CHECK(fam.find(0, p.parse_word("b")));
  CHECK_FALSE(fam.find(0, p.parse_word("a")));
  CHECK(shift_window(fam, 0).size() == 2);
  CHECK(shift_window(fam, 1).size() == 6);
  CHECK_THROWS_AS(materialize_family(axes, ball, {5}), Error);
}

TEST_CASE("free group family satisfies the axioms with xi = 0") {
  const auto p = Presentation::free_group(2);
  const CayleyBall ball(p, 6);
  AxisCollection axes;
  axes.axes = {build_axis(p, p.parse_word("a")), build_axis(p, p.parse_word("b")),
               build_axis(p, p.parse_word("ab"))};
  const auto fam = materialize_family(axes, ball, {2});
  const auto rep = verify_axioms(fam);
  CHECK(rep.p1_violations.empty());
  CHECK(rep.safe_pairs > 0);
  CHECK(rep.xi <= 1);
}
