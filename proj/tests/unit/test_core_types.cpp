#include <algorithm>
#include <set>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "sawsle/errors.hpp"
#include "sawsle/exponents.hpp"
#include "sawsle/grid.hpp"
#include "sawsle/io_util.hpp"
#include "sawsle/lattice_walk.hpp"
#include "sawsle/rational.hpp"

using namespace sawsle;

namespace {

// Independent counter: plain recursion over a std::set of visited sites.
std::size_t count_walks(std::set<std::pair<int, int>>& seen, int x, int y, std::size_t left) {
  if (left == 0) return 1;
  std::size_t total = 0;
  const int dx[] = {1, -1, 0, 0};
  const int dy[] = {0, 0, 1, -1};
  for (int k = 0; k < 4; ++k) {
    const int nx = x + dx[k];
    const int ny = y + dy[k];
    if (ny < 1 || seen.count({nx, ny})) continue;
    seen.insert({nx, ny});
    total += count_walks(seen, nx, ny, left - 1);
    seen.erase({nx, ny});
  }
  return total;
}

LatticeWalk walk_of(std::vector<Site> s) { return LatticeWalk(std::move(s)); }

}  // namespace

TEST_CASE("rational arithmetic normalises") {
  constexpr Rational a{6, -8};
  static_assert(a == Rational{-3, 4});
  CHECK((Rational{1, 3} + Rational{1, 6}) == Rational{1, 2});
  CHECK((Rational{5, 8} - Rational{5, 48}) == Rational{25, 48});
  CHECK((Rational{3, 4} * Rational{4, 3}) == Rational{1, 1});
  CHECK((Rational{1, 2} / Rational{1, 4}) == Rational{2, 1});
  CHECK(Rational{-61, 48}.value() == doctest::Approx(-61.0 / 48.0).epsilon(1e-15));
}

TEST_CASE("conjectured exponents") {
  CHECK(kConjectured.p() == Rational{-61, 48});
  CHECK((kConjectured.b - kConjectured.bbar) == Rational{25, 48});
  CHECK((kConjectured.b + kConjectured.bbar) == kConjectured.p() + Rational{2, 1});
}

TEST_CASE("validate_walk examples") {
  CHECK(validate_walk(walk_of({{0, 0}, {0, 1}, {1, 1}})));
  CHECK_FALSE(validate_walk(walk_of({{0, 0}, {1, 0}})));
  CHECK_FALSE(validate_walk(walk_of({{0, 0}, {0, 1}, {0, 0}})));
  CHECK_FALSE(validate_walk(walk_of({{0, 0}, {0, 2}})));
  CHECK_FALSE(validate_walk(walk_of({{1, 0}, {1, 1}})));
  CHECK_FALSE(validate_walk(walk_of({{0, 0}, {0, 1}, {1, 1}, {1, 2}, {0, 2}, {0, 1}})));
}

TEST_CASE("initial walk is the vertical rod") {
  CHECK(initial_walk(1) == walk_of({{0, 0}, {0, 1}}));
  CHECK(initial_walk(3) == walk_of({{0, 0}, {0, 1}, {0, 2}, {0, 3}}));
  for (std::size_t n : {1u, 7u, 1000u}) CHECK(validate_walk(initial_walk(n)));
}

TEST_CASE("enumeration counts") {
  CHECK(enumerate_half_plane_saws(1).size() == 1);
  CHECK(enumerate_half_plane_saws(2).size() == 3);
  CHECK(enumerate_half_plane_saws(3).size() == 7);
  std::size_t previous = 0;
  for (std::size_t n = 1; n <= 9; ++n) {
    std::set<std::pair<int, int>> seen{{0, 0}};
    const std::size_t expected = count_walks(seen, 0, 0, n);
    const auto walks = enumerate_half_plane_saws(n);
    CHECK(walks.size() == expected);
    CHECK(walks.size() > previous);
    previous = walks.size();
  }
  CHECK(enumerate_half_plane_saws(6).size() == 131);
  CHECK_THROWS_AS(enumerate_half_plane_saws(kMaxEnumerationSteps + 1), std::invalid_argument);
}

TEST_CASE("enumerated walks are valid, distinct and reflection-closed") {
  for (std::size_t n = 1; n <= 7; ++n) {
    const auto walks = enumerate_half_plane_saws(n);
    std::set<std::vector<std::pair<int, int>>> set;
    for (const auto& w : walks) {
      REQUIRE(validate_walk(w));
      std::vector<std::pair<int, int>> v;
      for (const Site s : w.sites()) v.emplace_back(s.x, s.y);
      set.insert(v);
    }
    CHECK(set.size() == walks.size());
    for (const auto& v : set) {
      auto mirrored = v;
      for (auto& p : mirrored) p.first = -p.first;
      CHECK(set.count(mirrored) == 1);
    }
  }
}

TEST_CASE("walk text round trip and malformed input") {
  const LatticeWalk w = enumerate_half_plane_saws(5)[17];
  std::stringstream ss;
  write_walk(ss, w);
  CHECK(read_walk(ss) == w);
  std::istringstream bad1("sawsle-walk v2 N=1\n0 0\n0 1\n");
  CHECK_THROWS_AS(read_walk(bad1), FormatError);
  std::istringstream bad2("sawsle-walk v1 N=2\n0 0\n0 1\n");
  CHECK_THROWS_AS(read_walk(bad2), FormatError);
}

TEST_CASE("threshold grids") {
  CHECK(default_grid(Statistic::kX).count == 501);
  CHECK(default_grid(Statistic::kX).front() == 0.0);
  CHECK(default_grid(Statistic::kX).back() == 5.0);
  for (Statistic s : {Statistic::kY, Statistic::kR, Statistic::kS}) {
    CHECK(default_grid(s).count == 401);
    CHECK(default_grid(s).front() == 1.0);
    CHECK(default_grid(s).back() == 5.0);
  }
  const ThresholdGrid g = default_grid(Statistic::kY);
  CHECK(g.first_at_or_above(0.5) == 0);
  CHECK(g.first_at_or_above(1.0) == 0);
  CHECK(g.first_at_or_above(1.005) == 1);
  CHECK(g.first_at_or_above(1.01) == 1);
  CHECK(g.first_at_or_above(5.0) == 400);
  CHECK(g.first_at_or_above(5.0001) == 401);
  // agrees with a linear scan for values sitting on grid points
  for (std::size_t k = 0; k < 401; ++k) {
    const double v = g.at(k);
    std::size_t scan = 0;
    while (scan < 401 && g.at(scan) < v) ++scan;
    CHECK(g.first_at_or_above(v) == scan);
  }
  CHECK(parse_statistic("S") == Statistic::kS);
  CHECK_FALSE(parse_statistic("Q").has_value());
}

TEST_CASE("format_double renders 17 significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}
