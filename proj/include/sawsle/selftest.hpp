#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sawsle/conformal.hpp"
#include "sawsle/lattice_walk.hpp"

namespace sawsle {

/// Derivative of an analytic function along the real direction by Ridders'
/// extrapolation of central differences, starting from step h. The
/// extrapolation error estimate is stored in *error when given.
Complex ridders_derivative(const std::function<Complex(Complex)>& f, Complex z, double h,
                           double* error = nullptr);

/// |phi'(0)| and |phi'(i)| of excursion_map(stat, w, .) by finite
/// differences, with the initial step scaled to the distance from the
/// evaluation point to the removed region.
SleCdfFactors numeric_factors(Statistic stat, double w);

struct UniformityResult {
  std::size_t states = 0;        // number of distinct walks of length N
  std::uint64_t samples = 0;
  double total_variation = 0.0;  // 1/2 sum |p_hat - 1/states|
  double chi_square = 0.0;
  std::size_t unvisited = 0;
};

/// Runs one pivot chain at small N and compares the sample frequencies
/// against the uniform distribution over enumerate_half_plane_saws(N).
UniformityResult pivot_uniformity(std::size_t steps, std::uint64_t samples, std::uint64_t interval,
                                  std::uint64_t seed);

/// Walks sampled from a pivot chain: `count` walks of length `steps`,
/// `interval` iterations apart.
std::vector<LatticeWalk> sample_walks(std::size_t steps, std::size_t count, std::uint64_t interval,
                                      std::uint64_t seed);

/// S factors evaluated through the generic formula only, with the principal
/// branch of atan(1/l) and no s = 1 limit. Used for fault injection.
SleCdfFactors factors_S_unguarded(double s);

struct SelftestOptions {
  /// S factor implementation under test.
  std::function<SleCdfFactors(double)> s_factors = factors_S;
  std::uint64_t seed = 0x5a3c2b1d;
  std::uint64_t uniformity_samples = 1'000'000;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Conformal fixed points and finite-difference factors, the s = 1 anchor,
/// CDF monotonicity, fast-vs-brute statistics, pivot acceptance and
/// uniformity at N = 6, and fit self-consistency.
std::vector<CheckResult> run_selftest(const SelftestOptions& options = {});

}  // namespace sawsle
