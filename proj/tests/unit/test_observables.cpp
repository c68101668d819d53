#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sawsle/conformal.hpp"
#include "sawsle/errors.hpp"
#include "sawsle/observables.hpp"
#include "sawsle/selftest.hpp"

using namespace sawsle;

namespace {

constexpr double pi = std::numbers::pi;

// Statistics computed on the N^-nu scaled walk with complex arithmetic.
TransformedStats scaled_oracle(const LatticeWalk& walk) {
  const double scale = std::pow(static_cast<double>(walk.steps()), -0.75);
  const Complex e = Complex(walk.endpoint().x, walk.endpoint().y) * scale;
  TransformedStats s;
  s.x_max = s.y_max = s.r_max = s.s_max = -1e300;
  for (const Site p : walk.sites()) {
    const Complex w = endpoint_map(e, Complex(p.x, p.y) * scale);
    s.x_max = std::max(s.x_max, w.real());
    s.y_max = std::max(s.y_max, w.imag());
    s.r_max = std::max(s.r_max, std::abs(w));
    s.s_max = std::max(s.s_max, std::abs(w - Complex(0.0, 1.0)));
  }
  s.r_end = std::abs(e);
  s.theta = std::arg(e);
  return s;
}

}  // namespace

TEST_CASE("vertical rod") {
  for (std::size_t n : {1u, 16u, 1000u}) {
    const TransformedStats s = stats_fast(initial_walk(n));
    CHECK(s.x_max == 0.0);
    CHECK(s.y_max == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.r_max == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.s_max == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.theta == doctest::Approx(pi / 2).epsilon(1e-15));
    CHECK(s.r_end == doctest::Approx(std::pow(double(n), 0.25)).epsilon(1e-14));
    CHECK(s == stats_bruteforce(initial_walk(n)));
  }
}

TEST_CASE("fast path equals brute force on pivot walks") {
  for (std::size_t n : {2u, 5u, 37u, 200u, 2000u}) {
    for (const LatticeWalk& w : sample_walks(n, 25, n, 1234 + n)) {
      const TransformedStats fast = stats_fast(w);
      const TransformedStats brute = stats_bruteforce(w);
      CHECK(fast == brute);
      CHECK(brute.y_max >= 1.0 - 1e-9);
      CHECK(brute.r_max >= 1.0 - 1e-9);
      CHECK(brute.s_max >= 1.0 - 1e-9);
      CHECK(brute.theta > 0.0);
      CHECK(brute.theta < pi);
    }
  }
}

TEST_CASE("every enumerated walk agrees too") {
  for (const LatticeWalk& w : enumerate_half_plane_saws(8)) REQUIRE(stats_fast(w) == stats_bruteforce(w));
}

TEST_CASE("skipped stretches never exceed the running maxima") {
  std::size_t skips = 0;
  std::size_t skipped_sites = 0;
  for (const LatticeWalk& w : sample_walks(3000, 10, 3000, 8)) {
    const Complex e(w.endpoint().x, w.endpoint().y);
    stats_fast(w, kConjectured.nu, [&](const SkipEvent& ev) {
      ++skips;
      REQUIRE(ev.to > ev.from + 1);
      for (std::size_t i = ev.from + 1; i < ev.to; ++i) {
        ++skipped_sites;
        const Complex z = endpoint_map(e, Complex(w[i].x, w[i].y));
        REQUIRE(z.real() <= ev.x_max);
        REQUIRE(z.imag() <= ev.y_max);
        REQUIRE(std::abs(z) <= ev.r_max);
        REQUIRE(std::abs(z - Complex(0.0, 1.0)) <= ev.s_max);
      }
    });
  }
  CHECK(skips > 0);
  CHECK(skipped_sites > 0);
}

TEST_CASE("statistics are scale invariant") {
  for (const LatticeWalk& w : sample_walks(500, 20, 500, 3)) {
    const TransformedStats a = stats_bruteforce(w);
    const TransformedStats b = scaled_oracle(w);
    CHECK(std::abs(a.x_max - b.x_max) <= 1e-9);
    CHECK(std::abs(a.y_max - b.y_max) <= 1e-9);
    CHECK(std::abs(a.r_max - b.r_max) <= 1e-9);
    CHECK(std::abs(a.s_max - b.s_max) <= 1e-9);
    CHECK(std::abs(a.r_end - b.r_end) <= 1e-12);
    CHECK(std::abs(a.theta - b.theta) <= 1e-12);
  }
}

TEST_CASE("reweighting") {
  TransformedStats s;
  s.r_end = 1.0;
  CHECK(weight(s) == 1.0);
  s.r_end = 2.0;
  CHECK(weight(s) == doctest::Approx(std::pow(2.0, -61.0 / 48.0)).epsilon(1e-15));
  double prev = 1e300;
  for (double r = 0.1; r < 10.0; r += 0.1) {
    s.r_end = r;
    REQUIRE(weight(s) < prev);
    prev = weight(s);
  }
  s.r_end = 0.0;
  CHECK_THROWS(weight(s));
}

TEST_CASE("walks off the half plane are rejected") {
  CHECK_THROWS_AS(stats_bruteforce(LatticeWalk({{0, 0}, {1, 0}})), DomainError);
}
