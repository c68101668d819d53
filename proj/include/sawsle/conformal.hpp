#pragma once

#include <complex>
#include <vector>

#include "sawsle/exponents.hpp"
#include "sawsle/grid.hpp"

namespace sawsle {

using Complex = std::complex<double>;

/// Moebius automorphism of the upper half plane fixing 0 and sending
/// `endpoint` (im > 0) to i:  phi(z) = y z / (x^2 + y^2 - x z).
/// Throws DomainError if endpoint.imag() <= 0.
Complex endpoint_map(Complex endpoint, Complex z);
Complex endpoint_map_derivative(Complex endpoint, Complex z);

/// |phi'_A(0)| and |phi'_A(i)| for the map removing the region where the
/// statistic exceeds w. The radial SLE(8/3) CDF is d0^b * di^bbar.
struct SleCdfFactors {
  double d0 = 0.0;
  double di = 0.0;

  double cdf(const Exponents& e = kConjectured) const;
};

SleCdfFactors factors_X(double x);  // x > 0
SleCdfFactors factors_Y(double y);  // y > 1
SleCdfFactors factors_R(double r);  // r > 1
SleCdfFactors factors_S(double s);  // s >= 1; s == 1 is the analytic limit (1/2, 2)

/// Dispatches on the statistic. At the lower domain edge of X, Y and R
/// returns the limit (0, +inf), whose CDF is 0.
SleCdfFactors factors(Statistic stat, double w);

/// Smallest admissible threshold: 0 for X, 1 for the others.
constexpr double lower_edge(Statistic stat) { return stat == Statistic::kX ? 0.0 : 1.0; }

/// P(W <= w) for radial SLE(8/3) in the half plane from 0 to i.
double exact_cdf(Statistic stat, double w, const Exponents& e = kConjectured);

/// factors() tabulated over a threshold grid.
struct FactorTable {
  Statistic stat = Statistic::kX;
  std::vector<double> thresholds;
  std::vector<SleCdfFactors> factors;
};
FactorTable factor_table(Statistic stat, const ThresholdGrid& grid);

// Conformal maps from H minus {W >= w} onto H fixing 0 and i. These are
// evaluated directly and serve as an independent check on the closed-form
// factors above.
Complex excursion_map_X(double x, Complex z);
Complex excursion_map_Y(double y, Complex z);
Complex excursion_map_R(double r, Complex z);
Complex excursion_map_S(double s, Complex z);  // s > 1
Complex excursion_map(Statistic stat, double w, Complex z);

/// Normalised density sin(theta)^(b - bbar) on [0, pi]. The normaliser is
/// computed once at construction by tanh-sinh quadrature.
class AngularDensity {
 public:
  explicit AngularDensity(const Exponents& e = kConjectured);

  double operator()(double theta) const;
  double exponent() const { return exponent_; }
  double normalizer() const { return normalizer_; }

 private:
  double exponent_;
  double normalizer_;
};

double angular_density_reference(double theta, const Exponents& e = kConjectured);

}  // namespace sawsle
