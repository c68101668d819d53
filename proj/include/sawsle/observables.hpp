#pragma once

#include <cstddef>
#include <functional>

#include "sawsle/conformal.hpp"
#include "sawsle/exponents.hpp"
#include "sawsle/lattice_walk.hpp"

namespace sawsle {

/// Excursion statistics of the walk after the endpoint map, plus the polar
/// coordinates of the endpoint.
struct TransformedStats {
  double x_max = 0.0;  // max Re
  double y_max = 0.0;  // max Im
  double r_max = 0.0;  // max |w|
  double s_max = 0.0;  // max |w - i|
  double r_end = 0.0;  // N^-nu |endpoint|
  double theta = 0.0;  // arg(endpoint) in (0, pi)

  double value(Statistic s) const {
    switch (s) {
      case Statistic::kX: return x_max;
      case Statistic::kY: return y_max;
      case Statistic::kR: return r_max;
      case Statistic::kS: return s_max;
    }
    return 0.0;
  }

  friend bool operator==(const TransformedStats&, const TransformedStats&) = default;
};

/// Evaluates the endpoint map at every site. Throws DomainError when the
/// endpoint is not in the open upper half plane.
TransformedStats stats_bruteforce(const LatticeWalk& walk, Rational nu = kConjectured.nu);

/// Emitted by stats_fast whenever it jumps over sites: every site strictly
/// between `from` and `to` was skipped using the running maxima recorded
/// here.
struct SkipEvent {
  std::size_t from = 0;
  std::size_t to = 0;
  double x_max = 0.0;
  double y_max = 0.0;
  double r_max = 0.0;
  double s_max = 0.0;
};
using SkipObserver = std::function<void(const SkipEvent&)>;

/// Same result as stats_bruteforce, but skips stretches of the walk that
/// provably cannot raise any running maximum. Because the walk moves at
/// most one lattice unit per step, l steps stay within distance l of the
/// current site z; inside the disc of radius |x^2+y^2-xz|/(2|x|) around z
/// the map's derivative is at most 4|phi'(z)|, so the image moves at most
/// 4|phi'(z)| l. The skip is
///   l = floor(min(|x^2+y^2-xz|/(2|x|), d/(4|phi'(z)|)))
/// where d is the smallest gap between the current image point and the
/// four running maxima. Single steps are taken when l < 2 or d <= 0.
TransformedStats stats_fast(const LatticeWalk& walk, Rational nu = kConjectured.nu,
                            const SkipObserver& observer = {});

/// Reweighting factor r_end^((rho - gamma)/nu).
double weight(const TransformedStats& stats, const Exponents& e = kConjectured);

}  // namespace sawsle
