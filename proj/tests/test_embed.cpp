#include <doctest.h>

#include <random>

#include "qt/embed.hpp"

using namespace qt;

namespace {

ProjectionFamily two_orbit_family() {
  const auto p = Presentation::free_group(2);
  static const CayleyBall ball(p, 6);
  AxisCollection axes;
  axes.axes = {build_axis(p, p.parse_word("a")), build_axis(p, p.parse_word("b"))};
  return materialize_family(axes, ball, {2});
}

}  // namespace

TEST_CASE("conflict is symmetric in the two diameters") {
  SyntheticBuilder b;
  for (int i = 0; i < 3; ++i) b.add_member(8);
  for (std::size_t y = 0; y < 3; ++y)
    for (std::size_t x = 0; x < 3; ++x)
      if (x != y) b.set_projection(y, x, {3});
  b.set_projection(0, 1, {1, 2, 3, 4});
  const auto fam = std::move(b).build();
  CHECK(conflict(fam, 0, 1, 2));
  CHECK(conflict(fam, 1, 0, 2));
  CHECK_FALSE(conflict(fam, 0, 1, 3));
  CHECK_FALSE(conflict(fam, 1, 2, 0));
}

TEST_CASE("greedy colouring is proper") {
  std::mt19937_64 rng(6);
  SyntheticBuilder b;
  const std::size_t n = 20;
  for (std::size_t i = 0; i < n; ++i) b.add_member(10);
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x) {
      if (x == y) continue;
      const std::size_t lo = rng() % 7;
      b.set_projection(y, x, {lo, lo + rng() % 4});
    }
  const auto fam = std::move(b).build();
  for (int theta : {0, 1, 2, 3}) {
    const auto col = greedy_color(fam, theta);
    std::size_t placed = 0;
    for (std::size_t c = 0; c < col.m(); ++c) {
      placed += col.classes[c].size();
      for (auto a : col.classes[c]) {
        CHECK(col.color_of[a] == static_cast<int>(c));
        for (auto b2 : col.classes[c]) if (a != b2) CHECK_FALSE(conflict(fam, a, b2, theta));
      }
    }
    CHECK(placed == n);
  }
  CHECK(greedy_color(fam, 3).m() == 1);
  CHECK_THROWS_AS(greedy_color(fam, -1), Error);
}

TEST_CASE("orbits stay whole unless they conflict internally") {
  const auto fam = two_orbit_family();
  CHECK(orbit_conflict_bound(fam) == 0);
  const auto col = greedy_color(fam, 0);
  CHECK(col.split_orbits.empty());
  CHECK(col.m() == 1);

  // one orbit whose members conflict with each other
  SyntheticBuilder b;
  for (int i = 0; i < 3; ++i) b.add_member(6);
  for (std::size_t y = 0; y < 3; ++y)
    for (std::size_t x = 0; x < 3; ++x)
      if (x != y) b.set_projection(y, x, {2});
  b.set_projection(1, 2, {0, 5});
  auto f = std::move(b).build();
  // synthetic members are their own orbits
  CHECK(orbit_conflict_bound(f) == 0);
  CHECK(greedy_color(f, 0).m() == 2);
  CHECK(greedy_color(f, 0).split_orbits.empty());
}

TEST_CASE("product distance adds factor distances") {
  SyntheticBuilder b;
  for (int i = 0; i < 2; ++i) b.add_member(4);
  b.set_projection(0, 1, {3});
  b.set_projection(1, 0, {0});
  const auto fam = std::move(b).build();
  ProductSpace sp{{build_complex(fam, {0}, {1, false}), build_complex(fam, {1}, {1, false})}};
  CHECK(product_distance(sp, {0, 0}, {3, 2}) == 5);
  CHECK_THROWS_AS(product_distance(sp, {0}, {1, 1}), Error);
}

TEST_CASE("orbit map on the free group") {
  const auto p = Presentation::free_group(2);
  const CayleyBall ball(p, 6);
  AxisCollection axes;
  axes.axes = {build_axis(p, p.parse_word("a")), build_axis(p, p.parse_word("b"))};
  const auto fam = materialize_family(axes, ball, {3});
  const auto col = greedy_color(fam, 0);
  ProductSpace sp;
  for (const auto& c : col.classes) sp.factors.push_back(build_complex(fam, c, {1, true}, 0));
  const auto x = identity_basepoint(sp, fam, ball);
  CHECK(orbit_map(Word{}, x, sp, fam, axes, ball) == x);
  // a moves the basepoint one step along the a-axis
  const auto ax = orbit_map(p.parse_word("a"), x, sp, fam, axes, ball);
  CHECK(product_distance(sp, x, ax) == 1);
  // composition: (ab)·x equals a·(b·x) where both are defined
  const auto bx = orbit_map(p.parse_word("b"), x, sp, fam, axes, ball);
  const auto abx = orbit_map(p.parse_word("ab"), x, sp, fam, axes, ball);
  CHECK(orbit_map(p.parse_word("a"), bx, sp, fam, axes, ball) == abx);
  CHECK(orbit_map(p.parse_word("aaaa"), x, sp, fam, axes, ball).size() == 1);
  CHECK_THROWS_AS(orbit_map(p.parse_word("bbbb"), x, sp, fam, axes, ball), Error);

  const auto rep = qi_certify(sp, x, fam, axes, ball, {1, 0, 3});
  CHECK(rep.rows.size() == 1 + 4 + 12 + 36);
  CHECK(rep.lower_violations == 0);
  CHECK(rep.upper_violations == 0);
  // <b> blocks the edge between <a> and b<a> at K = 1, so b moves x by 1 + 1 + 1
  CHECK(rep.c_up == 3);
  double ratio = 1e9;
  for (const auto& r : rep.rows) {
    CHECK(r.dist == product_distance(sp, x, orbit_map(r.h, x, sp, fam, axes, ball)));
    CHECK(8 * r.dist >= r.length - 1);
    if (r.length > 0) ratio = std::min(ratio, double(r.dist) / r.length);
  }
  CHECK(rep.min_ratio == doctest::Approx(ratio));
  CHECK_THROWS_AS(qi_certify(sp, x, fam, axes, ball, {1, 0, 7}), Error);
}
