#include "sawsle/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <unordered_map>

#include "sawsle/errors.hpp"
#include "sawsle/estimators.hpp"
#include "sawsle/fitting.hpp"
#include "sawsle/io_util.hpp"
#include "sawsle/observables.hpp"
#include "sawsle/pivot.hpp"

namespace sawsle {

namespace {

constexpr double pi = std::numbers::pi;
const Complex kI{0.0, 1.0};

// Distances from 0 and from i to the removed region {W >= w}.
std::pair<double, double> hull_distances(Statistic stat, double w) {
  switch (stat) {
    case Statistic::kX: return {w, w};
    case Statistic::kY: return {w, w - 1.0};
    case Statistic::kR: return {w, w - 1.0};
    case Statistic::kS: return {std::sqrt((w - 1.0) * (w + 1.0)), w};
  }
  return {1.0, 1.0};
}

// Encodes a short walk as two bits per step.
std::uint64_t walk_key(const LatticeWalk& walk) {
  std::uint64_t key = 0;
  for (std::size_t i = 1; i <= walk.steps(); ++i) {
    const Site d = walk[i] - walk[i - 1];
    const std::uint64_t code = d.x == 1 ? 0 : d.x == -1 ? 1 : d.y == 1 ? 2 : 3;
    key = (key << 2) | code;
  }
  return key;
}

double max_field_difference(const TransformedStats& a, const TransformedStats& b) {
  return std::max({std::abs(a.x_max - b.x_max), std::abs(a.y_max - b.y_max), std::abs(a.r_max - b.r_max),
                   std::abs(a.s_max - b.s_max), std::abs(a.r_end - b.r_end), std::abs(a.theta - b.theta)});
}

std::string fmt(double v) { return format_double(v); }

CheckResult check_conformal(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_fixed = 0.0;
  double worst_rel = 0.0;
  for (const Statistic stat : kStatistics) {
    for (int trial = 0; trial < 250; ++trial) {
      // log-uniform over [lo, 20] with lo just above the domain edge
      const double lo = lower_edge(stat) + 0.05;
      const double w = lo * std::pow(20.0 / lo, u(gen));
      worst_fixed = std::max({worst_fixed, std::abs(excursion_map(stat, w, 0.0)),
                              std::abs(excursion_map(stat, w, kI) - kI)});
      const SleCdfFactors closed = factors(stat, w);
      const SleCdfFactors fd = numeric_factors(stat, w);
      worst_rel = std::max({worst_rel, std::abs(fd.d0 / closed.d0 - 1.0), std::abs(fd.di / closed.di - 1.0)});
    }
  }
  return {"conformal_fixed_points", worst_fixed <= 1e-12 && worst_rel <= 1e-8,
          "max |phi(0)|,|phi(i)-i| = " + fmt(worst_fixed) + "; max rel factor error = " + fmt(worst_rel)};
}

CheckResult check_s_anchor(const SelftestOptions& options) {
  const double expected = std::pow(2.0, -(kConjectured.b - kConjectured.bbar).value());
  const double at_one = options.s_factors(1.0).cdf();
  const double near_one = options.s_factors(1.0 + 1e-9).cdf();
  const bool ok = std::abs(at_one - expected) <= 1e-12 && std::abs(near_one - at_one) <= 1e-3;
  return {"s_equals_one", ok,
          "cdf_S(1) = " + fmt(at_one) + " (expected " + fmt(expected) + "), cdf_S(1+1e-9) = " + fmt(near_one)};
}

CheckResult check_monotone(const SelftestOptions& options) {
  bool ok = true;
  std::string detail;
  for (const Statistic stat : kStatistics) {
    const ThresholdGrid grid = default_grid(stat);
    double prev = -1.0;
    for (std::size_t k = 0; k < static_cast<std::size_t>(grid.count); ++k) {
      const double w = grid.at(k);
      const double c = stat == Statistic::kS ? options.s_factors(w).cdf() : exact_cdf(stat, w);
      if (!(c >= prev) || !(c <= 1.0)) {
        ok = false;
        detail += std::string(name(stat)) + " not monotone at w=" + fmt(w) + "; ";
        break;
      }
      prev = c;
    }
    const double far = stat == Statistic::kS ? options.s_factors(1e6).cdf() : exact_cdf(stat, 1e6);
    if (!(std::abs(far - 1.0) <= 1e-6)) {
      ok = false;
      detail += std::string(name(stat)) + " cdf(1e6) = " + fmt(far) + "; ";
    }
  }
  return {"cdf_monotone", ok, ok ? "all four CDFs monotone, cdf(1e6) within 1e-6 of 1" : detail};
}

CheckResult check_fast_vs_brute(std::uint64_t seed) {
  double worst = 0.0;
  std::size_t walks = 0;
  for (const std::size_t n : {10u, 100u, 1000u}) {
    for (const LatticeWalk& w : sample_walks(n, 40, 50, seed + n)) {
      worst = std::max(worst, max_field_difference(stats_fast(w), stats_bruteforce(w)));
      ++walks;
    }
  }
  return {"fast_vs_brute", worst <= 1e-9,
          std::to_string(walks) + " walks, max field difference " + fmt(worst)};
}

CheckResult check_acceptance(std::uint64_t seed) {
  ChainConfig config;
  config.steps = 100;
  config.total_samples = 1'000'000;
  config.sample_interval = 1;
  config.seed = seed;
  const RunReport report = run_chain(config, [](const LatticeWalk&) {});
  const double f = report.acceptance_fraction;
  return {"acceptance_fraction", f > 0.0 && f < 1.0, "N=100: " + fmt(f)};
}

CheckResult check_uniformity(const SelftestOptions& options) {
  const UniformityResult r = pivot_uniformity(6, options.uniformity_samples, 20, options.seed);
  const double dof = static_cast<double>(r.states - 1);
  const bool ok = r.unvisited == 0 && r.chi_square < dof + 5.0 * std::sqrt(2.0 * dof);
  return {"pivot_uniformity", ok,
          "N=6, " + std::to_string(r.states) + " walks, " + std::to_string(r.samples) +
              " samples: chi2 = " + fmt(r.chi_square) + " (dof " + fmt(dof) + "), TV = " + fmt(r.total_variation)};
}

CheckResult check_fits() {
  std::vector<CdfEstimate> cdfs;
  std::vector<FactorTable> tables;
  for (const Statistic stat : kStatistics) {
    FactorTable t = factor_table(stat, default_grid(stat));
    CdfEstimate c;
    c.stat = stat;
    c.thresholds = t.thresholds;
    for (const SleCdfFactors& f : t.factors) {
      c.ecdf.push_back(f.cdf());
      c.std_error.push_back(1e-3);
    }
    cdfs.push_back(std::move(c));
    tables.push_back(std::move(t));
  }
  const FitResult fit = fit_b_bbar(cdfs, tables, 1e9);
  const double db = std::abs(fit.coefficients(0) - kConjectured.b.value());
  const double dbbar = std::abs(fit.coefficients(1) - kConjectured.bbar.value());

  const double slope = (kConjectured.b - kConjectured.bbar).value();
  AngularEstimate a;
  const double width = pi / static_cast<double>(kAngularBins);
  for (std::size_t k = 0; k < kAngularBins; ++k) {
    const double mid = (static_cast<double>(k) + 0.5) * width;
    a.lo.push_back(static_cast<double>(k) * width);
    a.mid.push_back(mid);
    a.hi.push_back(static_cast<double>(k + 1) * width);
    a.expectation.push_back(std::pow(std::sin(mid), slope));
    a.std_error.push_back(1e-3);
  }
  const FitResult ang = fit_angular_slope(a, 1e9);
  const double dslope = std::abs(ang.coefficients(1) - slope);
  return {"fit_self_consistency", db <= 1e-9 && dbbar <= 1e-9 && dslope <= 1e-10,
          "|db| = " + fmt(db) + ", |dbbar| = " + fmt(dbbar) + ", |dslope| = " + fmt(dslope)};
}

template <typename F>
CheckResult guarded(const std::string& name, F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {name, false, std::string("threw: ") + e.what()};
  }
}

}  // namespace

Complex ridders_derivative(const std::function<Complex(Complex)>& f, Complex z, double h, double* error) {
  constexpr int kTableSize = 10;
  constexpr double kShrink = 1.4;
  constexpr double kShrink2 = kShrink * kShrink;
  Complex table[kTableSize][kTableSize];
  table[0][0] = (f(z + h) - f(z - h)) / (2.0 * h);
  Complex best = table[0][0];
  double err = std::numeric_limits<double>::infinity();
  for (int i = 1; i < kTableSize; ++i) {
    h /= kShrink;
    table[0][i] = (f(z + h) - f(z - h)) / (2.0 * h);
    double fac = kShrink2;
    for (int j = 1; j <= i; ++j) {
      table[j][i] = (table[j - 1][i] * fac - table[j - 1][i - 1]) / (fac - 1.0);
      fac *= kShrink2;
      const double e = std::max(std::abs(table[j][i] - table[j - 1][i]), std::abs(table[j][i] - table[j - 1][i - 1]));
      if (e <= err) {
        err = e;
        best = table[j][i];
      }
    }
    if (std::abs(table[i][i] - table[i - 1][i - 1]) >= 2.0 * err) break;
  }
  if (error) *error = err;
  return best;
}

SleCdfFactors numeric_factors(Statistic stat, double w) {
  const auto [dist0, disti] = hull_distances(stat, w);
  const auto map = [stat, w](Complex z) { return excursion_map(stat, w, z); };
  // Ridders can settle on a spurious plateau; keep the start step with the smallest error.
  const auto best = [&map](Complex z, double dist) {
    Complex out;
    double out_err = std::numeric_limits<double>::infinity();
    for (const double c : {0.4, 0.2, 0.1, 0.05}) {
      double err = 0.0;
      const Complex d = ridders_derivative(map, z, c * std::min(dist, 1.0), &err);
      if (err < out_err) {
        out_err = err;
        out = d;
      }
    }
    return std::abs(out);
  };
  return {best(0.0, dist0), best(kI, disti)};
}

UniformityResult pivot_uniformity(std::size_t steps, std::uint64_t samples, std::uint64_t interval,
                                  std::uint64_t seed) {
  const std::vector<LatticeWalk> all = enumerate_half_plane_saws(steps);
  std::unordered_map<std::uint64_t, std::size_t> slot;
  for (std::size_t k = 0; k < all.size(); ++k) slot.emplace(walk_key(all[k]), k);
  std::vector<std::uint64_t> counts(all.size(), 0);

  ChainConfig config;
  config.steps = steps;
  config.total_samples = samples;
  config.sample_interval = interval;
  config.seed = seed;
  run_chain(config, [&](const LatticeWalk& w) {
    const auto it = slot.find(walk_key(w));
    if (it == slot.end()) throw std::logic_error("pivot_uniformity: chain produced an invalid walk");
    ++counts[it->second];
  });

  UniformityResult r;
  r.states = all.size();
  r.samples = samples;
  const double n = static_cast<double>(samples);
  const double p = 1.0 / static_cast<double>(all.size());
  for (const std::uint64_t c : counts) {
    const double obs = static_cast<double>(c);
    r.total_variation += 0.5 * std::abs(obs / n - p);
    r.chi_square += (obs - n * p) * (obs - n * p) / (n * p);
    if (c == 0) ++r.unvisited;
  }
  return r;
}

std::vector<LatticeWalk> sample_walks(std::size_t steps, std::size_t count, std::uint64_t interval,
                                      std::uint64_t seed) {
  std::vector<LatticeWalk> out;
  out.reserve(count);
  ChainConfig config;
  config.steps = steps;
  config.total_samples = count;
  config.sample_interval = interval;
  config.seed = seed;
  run_chain(config, [&](const LatticeWalk& w) { out.push_back(w); });
  return out;
}

SleCdfFactors factors_S_unguarded(double s) {
  const double l = std::sqrt((s - 1.0) * (s + 1.0));
  const double theta = 0.5 * pi + std::atan(1.0 / l);
  const double eta = pi * std::atan(l) / (2.0 * theta);
  return {pi * std::tan(eta) / (l * theta), 2.0 * pi * l / (theta * (l * l + 1.0) * std::sin(2.0 * eta))};
}

std::vector<CheckResult> run_selftest(const SelftestOptions& options) {
  std::mt19937_64 gen(options.seed);
  std::vector<CheckResult> out;
  out.push_back(guarded("conformal_fixed_points", [&] { return check_conformal(gen); }));
  out.push_back(guarded("s_equals_one", [&] { return check_s_anchor(options); }));
  out.push_back(guarded("cdf_monotone", [&] { return check_monotone(options); }));
  out.push_back(guarded("fast_vs_brute", [&] { return check_fast_vs_brute(options.seed); }));
  out.push_back(guarded("acceptance_fraction", [&] { return check_acceptance(options.seed); }));
  out.push_back(guarded("pivot_uniformity", [&] { return check_uniformity(options); }));
  out.push_back(guarded("fit_self_consistency", [] { return check_fits(); }));
  return out;
}

}  // namespace sawsle
