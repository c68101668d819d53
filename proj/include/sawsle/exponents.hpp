#pragma once

#include "sawsle/rational.hpp"

namespace sawsle {

/// Conjectured critical exponents of the two-dimensional SAW together with
/// the boundary/interior scaling exponents of the SLE(8/3) partition function.
struct Exponents {
  Rational nu{3, 4};
  Rational gamma{43, 32};
  Rational rho{25, 64};
  Rational b{5, 8};
  Rational bbar{5, 48};

  /// Power applied to the endpoint distance when reweighting a walk.
  constexpr Rational p() const { return (rho - gamma) / nu; }

  friend constexpr bool operator==(const Exponents&, const Exponents&) = default;
};

inline constexpr Exponents kConjectured{};

static_assert(kConjectured.p() == Rational(-61, 48));
static_assert(kConjectured.b + kConjectured.bbar == kConjectured.p() + Rational(2));
static_assert(kConjectured.b + kConjectured.bbar == Rational(35, 48));
static_assert(kConjectured.b - kConjectured.bbar == Rational(25, 48));

}  // namespace sawsle
