#include "sawsle/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sawsle/errors.hpp"

namespace sawsle {

namespace {

// Endpoint map with the endpoint constants hoisted; both scanners go through
// this so identical sites give bit-identical images.
struct EndpointMap {
  double x;
  double y;
  double q;  // x^2 + y^2

  explicit EndpointMap(Site e)
      : x(static_cast<double>(e.x)), y(static_cast<double>(e.y)), q(x * x + y * y) {
    if (e.y <= 0) throw DomainError("observables: endpoint must satisfy y >= 1");
  }

  // Image of s; also returns |q - x s|^2, which the fast scanner reuses.
  // Written out by hand: std::complex division and abs are much slower.
  Complex image(Site s, double& den_norm2) const {
    const double sx = static_cast<double>(s.x);
    const double sy = static_cast<double>(s.y);
    const double dr = q - x * sx;
    const double di = -x * sy;
    den_norm2 = dr * dr + di * di;
    const double scale = y / den_norm2;
    return {scale * (sx * dr + sy * di), scale * (sy * dr - sx * di)};
  }
};

struct Maxima {
  double x = -std::numeric_limits<double>::infinity();
  double y = -std::numeric_limits<double>::infinity();
  double r = -std::numeric_limits<double>::infinity();
  double s = -std::numeric_limits<double>::infinity();

  // Returns the smallest remaining gap to any maximum after updating.
  double update(Complex w) {
    const double re = w.real();
    const double im = w.imag();
    const double mod = std::sqrt(re * re + im * im);
    const double dist = std::sqrt(re * re + (im - 1.0) * (im - 1.0));
    x = std::max(x, re);
    y = std::max(y, im);
    r = std::max(r, mod);
    s = std::max(s, dist);
    return std::min({x - re, y - im, r - mod, s - dist});
  }
};

TransformedStats finish(const Maxima& m, Site endpoint, std::size_t steps, Rational nu) {
  TransformedStats out;
  out.x_max = m.x;
  out.y_max = m.y;
  out.r_max = m.r;
  out.s_max = m.s;
  const double ex = endpoint.x;
  const double ey = endpoint.y;
  out.r_end = std::pow(static_cast<double>(steps), -nu.value()) * std::hypot(ex, ey);
  out.theta = std::atan2(ey, ex);
  return out;
}

}  // namespace

TransformedStats stats_bruteforce(const LatticeWalk& walk, Rational nu) {
  if (walk.steps() == 0) throw DomainError("observables: walk has no steps");
  const EndpointMap phi(walk.endpoint());
  Maxima m;
  double den_norm2 = 0.0;
  for (const Site s : walk.sites()) m.update(phi.image(s, den_norm2));
  return finish(m, walk.endpoint(), walk.steps(), nu);
}

TransformedStats stats_fast(const LatticeWalk& walk, Rational nu, const SkipObserver& observer) {
  if (walk.steps() == 0) throw DomainError("observables: walk has no steps");
  const EndpointMap phi(walk.endpoint());
  const std::size_t n = walk.steps();
  const double abs_x = std::abs(phi.x);
  const double numer = phi.y * phi.q;  // |phi'(z)| = y q / |q - x z|^2
  Maxima m;
  std::size_t i = 0;
  double den_norm2 = 0.0;
  for (;;) {
    const double slack = m.update(phi.image(walk[i], den_norm2));
    if (i == n) break;
    // Cheap screen for jump >= 2 before any division or square root.
    const bool may_skip = slack * den_norm2 >= 8.0 * numer && den_norm2 >= 16.0 * abs_x * abs_x;
    if (!(slack > 0.0) || !may_skip) {
      ++i;
      continue;
    }
    const double den = std::sqrt(den_norm2);
    const double pole_limit =
        abs_x == 0.0 ? std::numeric_limits<double>::infinity() : den / (2.0 * abs_x);
    const double deriv = numer / den_norm2;
    const double slack_limit = slack / (4.0 * deriv);
    const double jump = std::floor(std::min(pole_limit, slack_limit));
    if (!(jump >= 2.0)) {
      ++i;
      continue;
    }
    const std::size_t remaining = n - i;
    const std::size_t to =
        jump >= static_cast<double>(remaining) ? n : i + static_cast<std::size_t>(jump);
    if (observer) observer(SkipEvent{i, to, m.x, m.y, m.r, m.s});
    i = to;
  }
  return finish(m, walk.endpoint(), n, nu);
}

double weight(const TransformedStats& stats, const Exponents& e) {
  if (!(stats.r_end > 0.0) || !std::isfinite(stats.r_end)) {
    throw DomainError("weight: endpoint radius must be positive and finite");
  }
  return std::pow(stats.r_end, e.p().value());
}

}  // namespace sawsle
