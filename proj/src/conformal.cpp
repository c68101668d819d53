#include "sawsle/conformal.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "sawsle/errors.hpp"

namespace sawsle {

namespace {

using std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void domain_fail(const char* what, double w) {
  throw DomainError(std::string(what) + ": argument " + std::to_string(w) + " outside domain");
}

}  // namespace

Complex endpoint_map(Complex endpoint, Complex z) {
  const double x = endpoint.real();
  const double y = endpoint.imag();
  if (!(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
    throw DomainError("endpoint_map: endpoint must lie in the open upper half plane");
  }
  return y * z / (x * x + y * y - x * z);
}

Complex endpoint_map_derivative(Complex endpoint, Complex z) {
  const double x = endpoint.real();
  const double y = endpoint.imag();
  if (!(y > 0.0)) throw DomainError("endpoint_map_derivative: endpoint must have im > 0");
  const Complex den = x * x + y * y - x * z;
  return y * (x * x + y * y) / (den * den);
}

double SleCdfFactors::cdf(const Exponents& e) const {
  if (d0 == 0.0) return 0.0;
  return std::pow(d0, e.b.value()) * std::pow(di, e.bbar.value());
}

SleCdfFactors factors_X(double x) {
  if (!(x > 0.0)) domain_fail("factors_X", x);
  const double four_x2 = 4.0 * x * x;
  return {four_x2 / (four_x2 + 1.0), std::hypot(x, 1.0) / x};
}

SleCdfFactors factors_Y(double y) {
  if (!(y > 1.0)) domain_fail("factors_Y", y);
  // sin(a) / (1 - cos a) = cot(a/2) with a = pi/y.
  const double t = pi / (2.0 * y);
  const double d0 = t / std::tan(t);
  const double c = std::cos(t);
  return {d0, d0 / (c * c)};
}

SleCdfFactors factors_R(double r) {
  if (!(r > 1.0)) domain_fail("factors_R", r);
  const double r2 = r * r;
  const double r2m1 = (r - 1.0) * (r + 1.0);
  return {r2m1 / r2, (r2 + 1.0) / r2m1};
}

SleCdfFactors factors_S(double s) {
  if (!(s >= 1.0) || !std::isfinite(s)) domain_fail("factors_S", s);
  if (s == 1.0) return {0.5, 2.0};
  // l^2 = s^2 - 1; the wedge opening is theta = pi - atan(l) in (pi/2, pi)
  // and f(i) = exp(i alpha) with alpha = 2 atan(1/l). With beta = pi alpha /
  // theta we have pi - beta = pi atan(l) / theta =: 2 eta, which gives
  //   d0 = pi tan(eta) / (l theta),   di = 2 pi l / (theta (l^2+1) sin(2 eta)).
  // For l >= 1 the same quantities are evaluated through the complementary
  // angle pi/2 - eta = pi atan(1/l) / theta to keep full relative accuracy.
  const double l = std::sqrt((s - 1.0) * (s + 1.0));
  const double a = std::atan(l);
  const double c = std::atan2(1.0, l);
  const double theta = 0.5 * pi + c;
  double tan_eta;
  double sin_2eta;
  if (l < 1.0) {
    const double eta = pi * a / (2.0 * theta);
    tan_eta = std::tan(eta);
    sin_2eta = std::sin(2.0 * eta);
  } else {
    const double comp = pi * c / theta;
    tan_eta = 1.0 / std::tan(comp);
    sin_2eta = std::sin(2.0 * comp);
  }
  const double d0 = pi * tan_eta / (l * theta);
  const double di = 2.0 * pi * l / (theta * (l * l + 1.0) * sin_2eta);
  return {d0, di};
}

SleCdfFactors factors(Statistic stat, double w) {
  if (stat != Statistic::kS && w == lower_edge(stat)) return {0.0, kInf};
  switch (stat) {
    case Statistic::kX: return factors_X(w);
    case Statistic::kY: return factors_Y(w);
    case Statistic::kR: return factors_R(w);
    case Statistic::kS: return factors_S(w);
  }
  return {};
}

double exact_cdf(Statistic stat, double w, const Exponents& e) { return factors(stat, w).cdf(e); }

FactorTable factor_table(Statistic stat, const ThresholdGrid& grid) {
  FactorTable t;
  t.stat = stat;
  for (std::size_t k = 0; k < static_cast<std::size_t>(grid.count); ++k) {
    t.thresholds.push_back(grid.at(k));
    t.factors.push_back(factors(stat, grid.at(k)));
  }
  return t;
}

Complex excursion_map_X(double x, Complex z) {
  if (!(x > 0.0)) domain_fail("excursion_map_X", x);
  return 2.0 * x * (2.0 * x * z - z * z) / (z * z - 2.0 * x * z + 4.0 * x * x + 1.0);
}

Complex excursion_map_Y(double y, Complex z) {
  if (!(y > 1.0)) domain_fail("excursion_map_Y", y);
  const double t = pi / (2.0 * y);
  return std::tanh(t * z) / std::tan(t);
}

Complex excursion_map_R(double r, Complex z) {
  if (!(r > 1.0)) domain_fail("excursion_map_R", r);
  return (r * r - 1.0) * z / (z * z + r * r);
}

Complex excursion_map_S(double s, Complex z) {
  if (!(s > 1.0)) domain_fail("excursion_map_S", s);
  const double l = std::sqrt((s - 1.0) * (s + 1.0));
  const double theta = pi - std::atan(l);
  // z -> (l+z)/(l-z) opens the region into the wedge 0 < arg < theta,
  // u -> u^(pi/theta) - 1 straightens the wedge, and the final Moebius map
  // sends the image of i back to i.
  const auto wedge = [l](Complex u) { return (l + u) / (l - u); };
  const auto straighten = [theta](Complex u) { return std::exp((pi / theta) * std::log(u)) - 1.0; };
  const Complex target = straighten(wedge(Complex(0.0, 1.0)));
  const double x = target.real();
  const double y = target.imag();
  const Complex u = straighten(wedge(z));
  return y * u / (x * x + y * y - x * u);
}

Complex excursion_map(Statistic stat, double w, Complex z) {
  switch (stat) {
    case Statistic::kX: return excursion_map_X(w, z);
    case Statistic::kY: return excursion_map_Y(w, z);
    case Statistic::kR: return excursion_map_R(w, z);
    case Statistic::kS: return excursion_map_S(w, z);
  }
  return {};
}

AngularDensity::AngularDensity(const Exponents& e) : exponent_((e.b - e.bbar).value()) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double a = exponent_;
  normalizer_ = integrator.integrate([a](double t) { return std::pow(std::sin(t), a); }, 0.0, pi, 1e-13);
}

double AngularDensity::operator()(double theta) const {
  if (theta <= 0.0 || theta >= pi) return 0.0;
  return std::pow(std::sin(theta), exponent_) / normalizer_;
}

double angular_density_reference(double theta, const Exponents& e) {
  if (e == Exponents{}) {
    static const AngularDensity conjectured{};
    return conjectured(theta);
  }
  return AngularDensity(e)(theta);
}

}  // namespace sawsle
