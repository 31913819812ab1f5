#include <doctest.h>

#include <random>

#include "qt/group.hpp"

using namespace qt;

namespace {

// Stack cancellation, written independently of the library.
std::string free_reduce_text(const std::string& w) {
  std::string out;
  for (char c : w) {
    const bool cancels = !out.empty() && out.back() != c &&
                         std::tolower(out.back()) == std::tolower(c);
    if (cancels) out.pop_back();
    else out.push_back(c);
  }
  return out;
}

std::string random_text(std::mt19937& rng, const std::string& alphabet, int len) {
  std::string s;
  for (int i = 0; i < len; ++i) s += alphabet[rng() % alphabet.size()];
  return s;
}

// Cannon's growth series of the genus-2 surface group,
// (1 + 2z + 2z^2 + 2z^3 + z^4) / (1 - 6z - 6z^2 - 6z^3 + z^4).
std::vector<long> genus2_spheres(int n) {
  const long num[5] = {1, 2, 2, 2, 1};
  std::vector<long> a;
  for (int k = 0; k <= n; ++k) {
    long v = k < 5 ? num[k] : 0;
    for (int j = 1; j <= 3; ++j) if (k >= j) v += 6 * a[k - j];
    if (k >= 4) v -= a[k - 4];
    a.push_back(v);
  }
  return a;
}

}  // namespace

TEST_CASE("free reduction agrees with stack cancellation") {
  const auto p = Presentation::free_group(2);
  std::mt19937 rng(3);
  for (int i = 0; i < 500; ++i) {
    const auto text = random_text(rng, "aAbB", 1 + i % 17);
    const auto want = free_reduce_text(text);
    CHECK(p.format(p.reduce(p.parse_word(text))) == (want.empty() ? "1" : want));
  }
}

TEST_CASE("words print and parse") {
  const auto p = Presentation::free_group(2);
  CHECK(p.format(Word{}) == "1");
  CHECK(p.format(p.parse_word("aBba")) == "aBba");
  CHECK(p.parse_word("1").empty());
  CHECK(p.format(p.parse_word("ab").inverse()) == "BA");
  CHECK_THROWS_AS(p.parse_word("ax"), Error);
}

TEST_CASE("shortlex order") {
  const auto p = Presentation::free_group(2);
  CHECK(p.parse_word("b") < p.parse_word("aa"));
  CHECK(p.parse_word("a") < p.parse_word("A"));
  CHECK(p.parse_word("A") < p.parse_word("b"));
}

TEST_CASE("presentation parsing") {
  const auto g = Presentation::parse("gens: a b c d\nrel: a b A B c d C D\nclass: dehn\n");
  CHECK(g.kind() == PresentationClass::dehn);
  CHECK(g.rank() == 4);
  const auto f = Presentation::parse("# comment\ngens: x y\n");
  CHECK(f.kind() == PresentationClass::free);
  CHECK_THROWS_AS(Presentation::parse("rel: ab\n"), Error);
  CHECK_THROWS_AS(Presentation::parse("gens: a b\nclass: dehn\n"), Error);
  CHECK_THROWS_AS(Presentation::parse("gens: a b\nfoo: bar\n"), Error);
  // Z^2 fails C'(1/6): pieces of length 1 in a relator of length 4
  CHECK_THROWS_AS(Presentation::parse("gens: a b\nrel: a b A B\n"), Error);
  CHECK_THROWS_AS(Presentation::load("/nonexistent/file.pres"), Error);
}

TEST_CASE("free group spheres have 4*3^(k-1) elements") {
  const CayleyBall ball(Presentation::free_group(2), 6);
  const auto s = ball.sphere_sizes();
  REQUIRE(s.size() == 7);
  CHECK(s[0] == 1);
  long expect = 4;
  for (int k = 1; k <= 6; ++k, expect *= 3) CHECK(s[k] == static_cast<std::size_t>(expect));
  CHECK(ball.graph().connected());
}

TEST_CASE("genus-2 spheres follow the rational growth series") {
  const CayleyBall ball(Presentation::surface_group(2), 5);
  const auto want = genus2_spheres(5);
  const auto got = ball.sphere_sizes();
  REQUIRE(got.size() == want.size());
  for (std::size_t k = 0; k < want.size(); ++k) CHECK(static_cast<long>(got[k]) == want[k]);
}

TEST_CASE("dehn reduction is a normal form for genus 2") {
  const auto p = Presentation::surface_group(2);
  std::mt19937 rng(17);
  const std::string rel = "abABcdCD";
  for (int i = 0; i < 300; ++i) {
    const auto text = random_text(rng, "aAbBcCdD", 2 + i % 9);
    const Word w = p.parse_word(text);
    const Word nf = p.reduce(w);
    CHECK(p.reduce(nf) == nf);
    CHECK(nf.size() <= w.size());
    // inserting a cyclic conjugate of the relator or its inverse changes nothing
    const std::size_t at = rng() % (text.size() + 1);
    std::string r = rel.substr(i % 8) + rel.substr(0, i % 8);
    if (i % 2) r = p.format(p.parse_word(r).inverse());
    CHECK(p.reduce(p.parse_word(text.substr(0, at) + r + text.substr(at))) == nf);
    CHECK(p.is_identity(w + w.inverse()));
    CHECK(p.distance(w, w) == 0);
  }
  CHECK(p.is_identity(p.parse_word(rel)));
  CHECK_FALSE(p.is_identity(p.parse_word("abAB")));
}

TEST_CASE("normal forms are geodesic in the ball") {
  const auto p = Presentation::surface_group(2);
  const CayleyBall ball(p, 4);
  const auto d = ball.graph().distances_from(*ball.find(Word{}));
  for (VertexId v = 0; v < static_cast<VertexId>(ball.size()); ++v) {
    CHECK(d[v] == ball.length(v));
  }
}

TEST_CASE("conjugacy representatives and primitivity") {
  const auto p = Presentation::free_group(2);
  CHECK(p.format(p.conjugacy_representative(p.parse_word("ba"))) == "ab");
  CHECK(p.format(p.conjugacy_representative(p.parse_word("BA"))) == "ab");
  CHECK(p.format(p.conjugacy_representative(p.parse_word("Abab"))) == "abAb");
  CHECK(p.format(p.conjugacy_representative(p.parse_word("Babb"))) == "ab");
  CHECK(p.format(p.cyclically_reduce(p.parse_word("Abba"))) == "bb");
  CHECK(p.is_primitive(p.parse_word("ab")));
  CHECK_FALSE(p.is_primitive(p.parse_word("aa")));
  CHECK_FALSE(p.is_primitive(p.parse_word("abab")));
  CHECK_THROWS_AS(p.conjugacy_representative(p.parse_word("aA")), Error);
}

TEST_CASE("ball lookup and steps") {
  const auto p = Presentation::free_group(2);
  const CayleyBall ball(p, 3);
  const auto one = *ball.find(Word{});
  CHECK(one == 0);
  CHECK(ball.step(one, 0) == *ball.find(p.parse_word("a")));
  CHECK(ball.walk(one, p.parse_word("abA")) == *ball.find(p.parse_word("abA")));
  CHECK(ball.walk(one, p.parse_word("aaaa")) == kUnreachable);
  CHECK(ball.walk(one, p.parse_word("abBA")) == one);
  CHECK_FALSE(ball.find(p.parse_word("aaaa")));
  CHECK(ball.locate(p.parse_word("aAb")) == ball.find(p.parse_word("b")));
  CHECK_THROWS_AS(CayleyBall(p, 20, 1000), Error);
}
