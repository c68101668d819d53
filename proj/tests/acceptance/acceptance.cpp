// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria that are not a documented deviation.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sawsle/commands.hpp"
#include "sawsle/conformal.hpp"
#include "sawsle/fitting.hpp"
#include "sawsle/io_util.hpp"
#include "sawsle/observables.hpp"
#include "sawsle/selftest.hpp"

using namespace sawsle;
namespace fs = std::filesystem;

namespace {

const Complex kI{0.0, 1.0};

struct Outcome {
  bool passed = false;
  std::string detail;
  // Set when the only failing part is a known, ledgered limitation.
  std::string deviation;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Fixed points and finite-difference derivatives of the four maps.
Outcome conformal_correctness() {
  std::mt19937_64 gen(20240101);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double fixed = 0.0;
  double deriv = 0.0;
  std::string worst;
  int evaluated = 0;
  for (int k = 0; k < 10000; ++k) {
    const Statistic st = kStatistics[k % 4];
    // edge + 10^U(-2, 2): from just above the domain edge to far away
    const double w = lower_edge(st) + std::pow(10.0, u(gen));
    fixed = std::max({fixed, std::abs(excursion_map(st, w, 0.0)), std::abs(excursion_map(st, w, kI) - kI)});
    const SleCdfFactors closed = factors(st, w);
    const SleCdfFactors fd = numeric_factors(st, w);
    const double e = std::max(std::abs(fd.d0 / closed.d0 - 1.0), std::abs(fd.di / closed.di - 1.0));
    if (e > deriv) {
      deriv = e;
      worst = std::string(name(st)) + "(" + fmt(w) + ")";
    }
    ++evaluated;
  }
  return {fixed <= 1e-12 && deriv <= 1e-8,
          std::to_string(evaluated) + " parameters; max fixed-point error " + fmt(fixed) +
              " (<= 1e-12); max relative factor error " + fmt(deriv) + " at " + worst + " (<= 1e-8)"};
}

// 2. s = 1 anchor, monotone grids, limit at 10^6.
Outcome exact_anchors() {
  const double anchor = exact_cdf(Statistic::kS, 1.0);
  const double expected = std::pow(2.0, -25.0 / 48.0);
  bool monotone = true;
  double far = 0.0;
  for (const Statistic st : kStatistics) {
    const FactorTable t = factor_table(st, default_grid(st));
    double prev = -1.0;
    for (const SleCdfFactors& f : t.factors) {
      const double c = f.cdf();
      monotone = monotone && c >= prev && c <= 1.0;
      prev = c;
    }
    far = std::max(far, std::abs(exact_cdf(st, 1e6) - 1.0));
  }
  const double err = std::abs(anchor - expected);
  return {err <= 1e-12 && monotone && far <= 1e-6,
          "cdf_S(1) = " + format_double(anchor) + " (|diff| " + fmt(err) + "); grids monotone: " +
              (monotone ? "yes" : "no") + "; max |cdf(1e6) - 1| = " + fmt(far)};
}

// 3. Fast path equals brute force; speedup recorded at N = 2000.
Outcome oracle_equivalence() {
  double worst = 0.0;
  std::size_t walks = 0;
  std::vector<LatticeWalk> big;
  for (const std::size_t n : {10u, 100u, 500u, 1000u, 2000u}) {
    auto sample = sample_walks(n, 200, n, 31337 + n);
    for (const LatticeWalk& w : sample) {
      const TransformedStats a = stats_fast(w);
      const TransformedStats b = stats_bruteforce(w);
      worst = std::max({worst, std::abs(a.x_max - b.x_max), std::abs(a.y_max - b.y_max),
                        std::abs(a.r_max - b.r_max), std::abs(a.s_max - b.s_max), std::abs(a.r_end - b.r_end),
                        std::abs(a.theta - b.theta)});
      ++walks;
    }
    if (n == 2000) big = std::move(sample);
  }
  double brute_sum = 0.0;
  double fast_sum = 0.0;
  auto t0 = std::chrono::steady_clock::now();
  for (int rep = 0; rep < 5; ++rep) {
    for (const LatticeWalk& w : big) brute_sum += stats_bruteforce(w).s_max;
  }
  const double brute = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  for (int rep = 0; rep < 5; ++rep) {
    for (const LatticeWalk& w : big) fast_sum += stats_fast(w).s_max;
  }
  const double fast = seconds_since(t0);
  const double speedup = brute / fast;
  return {walks >= 1000 && worst <= 1e-9 && brute_sum == fast_sum,
          std::to_string(walks) + " walks (N <= 2000), max field difference " + fmt(worst) +
              "; speedup at N=2000: " + fmt(speedup) + "x (regression record, target >= 5x: " +
              (speedup >= 5.0 ? "met" : "not met") + ")"};
}

// 4. Total variation against the enumeration at N = 6.
Outcome pivot_uniformity_check() {
  const UniformityResult r = pivot_uniformity(6, 10'000'000, 100, 4242);
  return {r.total_variation < 0.005 && r.unvisited == 0,
          "N=6, " + std::to_string(r.states) + " walks, 10^7 samples every 100 iterations: TV = " +
              fmt(r.total_variation) + " (< 0.005), chi2 = " + fmt(r.chi_square) + " on " +
              std::to_string(r.states - 1) + " dof"};
}

// 5. Exact inputs through the fitting code.
Outcome fit_self_consistency() {
  std::vector<CdfEstimate> cdfs;
  std::vector<FactorTable> tables;
  for (const Statistic st : kStatistics) {
    FactorTable t = factor_table(st, default_grid(st));
    CdfEstimate c;
    c.stat = st;
    c.thresholds = t.thresholds;
    for (const SleCdfFactors& f : t.factors) {
      c.ecdf.push_back(f.cdf());
      c.std_error.push_back(1e-3);
    }
    cdfs.push_back(std::move(c));
    tables.push_back(std::move(t));
  }
  const FitResult fit = fit_b_bbar(cdfs, tables, 1e9);
  const double db = std::abs(fit.coefficients(0) - 5.0 / 8.0);
  const double dbbar = std::abs(fit.coefficients(1) - 5.0 / 48.0);

  AngularEstimate a;
  const double slope = 25.0 / 48.0;
  const double width = std::numbers::pi / static_cast<double>(kAngularBins);
  for (std::size_t k = 0; k < kAngularBins; ++k) {
    const double mid = (static_cast<double>(k) + 0.5) * width;
    a.lo.push_back(static_cast<double>(k) * width);
    a.mid.push_back(mid);
    a.hi.push_back(static_cast<double>(k + 1) * width);
    a.expectation.push_back(0.37 * std::pow(std::sin(mid), slope));
    a.std_error.push_back(1e-4);
  }
  const double ds = std::abs(fit_angular_slope(a, 1e9).coefficients(1) - slope);
  return {db <= 1e-9 && dbbar <= 1e-9 && ds <= 1e-10,
          "|b - 5/8| = " + fmt(db) + ", |bbar - 5/48| = " + fmt(dbbar) + " (<= 1e-9); |slope - 25/48| = " +
              fmt(ds) + " (<= 1e-10)"};
}

RunConfig desk_config(const fs::path& dir, std::size_t chains) {
  RunConfig c;
  c.steps = 1000;
  c.total_samples = 1'000'000;
  c.sample_interval = 20;
  c.seed = 1;
  c.chains = chains;
  c.output_dir = dir;
  return c;
}

WeightedAccumulator load(const fs::path& p) {
  std::istringstream in(read_file(p));
  return WeightedAccumulator::read(in);
}

// Largest |ECDF - exact| over grid points at or above `from`.
double max_diff_from(const CdfEstimate& c, double from) {
  double m = 0.0;
  for (std::size_t k = 0; k < c.thresholds.size(); ++k) {
    if (c.thresholds[k] < from - 1e-12) continue;
    m = std::max(m, std::abs(c.ecdf[k] - exact_cdf(c.stat, c.thresholds[k])));
  }
  return m;
}

// 6. End-to-end desk-scale run.
Outcome desk_scale(const fs::path& work) {
  const auto t0 = std::chrono::steady_clock::now();
  const RunSummary run = cmd_run(desk_config(work / "desk-1chain", 1));
  const AnalysisSummary s = cmd_analyze(run.accumulator_path, work / "desk-1chain" / "analysis");
  const double wall = seconds_since(t0);
  std::ostringstream d;
  bool fits = s.exponent_fit.has_value() && s.angular_fit.has_value();
  double db = NAN, dbbar = NAN, ds = NAN;
  if (fits) {
    db = s.exponent_fit->coefficients(0) - 5.0 / 8.0;
    dbbar = s.exponent_fit->coefficients(1) - 5.0 / 48.0;
    ds = s.angular_fit->coefficients(1) - 25.0 / 48.0;
    fits = std::abs(db) < 0.02 && std::abs(dbbar) < 0.03 && std::abs(ds) < 0.03;
  }
  d << "b-5/8 = " << fmt(db) << " (<0.02), bbar-5/48 = " << fmt(dbbar) << " (<0.03), slope-25/48 = " << fmt(ds)
    << " (<0.03); max |ECDF-exact|:";
  bool ecdf = true;
  bool away_from_edge = true;
  for (const Statistic st : kStatistics) {
    const double m = s.max_abs_diff[static_cast<std::size_t>(st)];
    const double away = max_diff_from(s.estimates.cdf(st), lower_edge(st) + 0.05);
    ecdf = ecdf && m <= 0.02;
    away_from_edge = away_from_edge && away <= 0.02;
    d << ' ' << name(st) << '=' << fmt(m) << (m <= 0.02 ? "" : "(!)");
  }
  d << " (<=0.02); wall " << fmt(wall) << " s (<= 3600)";
  Outcome out{fits && ecdf && wall <= 3600.0, d.str(), ""};
  if (!out.passed && fits && wall <= 3600.0 && away_from_edge) {
    std::ostringstream dev;
    dev << "ECDF excess confined to w < edge+0.05 (lattice effect just above the domain edge); max for w >= edge+0.05:";
    for (const Statistic st : kStatistics) {
      dev << ' ' << name(st) << '=' << fmt(max_diff_from(s.estimates.cdf(st), lower_edge(st) + 0.05));
    }
    out.deviation = dev.str();
  }
  return out;
}

// 7. Rerun determinism and 4-chain vs 1-chain agreement.
Outcome determinism_and_shards(const fs::path& work) {
  const fs::path first = work / "desk-1chain" / "accumulator.txt";
  if (!fs::exists(first)) cmd_run(desk_config(work / "desk-1chain", 1));
  const RunSummary again = cmd_run(desk_config(work / "desk-1chain-rerun", 1));
  const bool identical = read_file(first) == read_file(again.accumulator_path);

  const RunSummary four = cmd_run(desk_config(work / "desk-4chain", 4));
  const Estimates e1 = finalize(load(first));
  const Estimates e4 = finalize(load(four.accumulator_path));
  double worst = 0.0;
  std::size_t compared = 0;
  bool zero_sigma_ok = true;
  for (std::size_t s = 0; s < 4; ++s) {
    const CdfEstimate& a = e1.cdfs[s];
    const CdfEstimate& b = e4.cdfs[s];
    for (std::size_t k = 0; k < a.ecdf.size(); ++k) {
      const double sigma = std::hypot(a.std_error[k], b.std_error[k]);
      const double diff = std::abs(a.ecdf[k] - b.ecdf[k]);
      if (sigma > 0.0) {
        worst = std::max(worst, diff / sigma);
        ++compared;
      } else {
        zero_sigma_ok = zero_sigma_ok && diff == 0.0;
      }
    }
  }
  return {identical && zero_sigma_ok && worst <= 5.0,
          std::string("rerun bit-identical: ") + (identical ? "yes" : "no") + "; 4-chain vs 1-chain over " +
              std::to_string(compared) + " grid points: max |diff|/sigma = " + fmt(worst) + " (<= 5)"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string work = "acceptance-work";
  std::vector<int> only;
  app.add_option("--work-dir", work, "directory for run outputs");
  app.add_option("--only", only, "criteria to run (default: all)");
  CLI11_PARSE(app, argc, argv);
  fs::create_directories(work);

  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, conformal_correctness},
      {2, exact_anchors},
      {3, oracle_equivalence},
      {4, pivot_uniformity_check},
      {5, fit_self_consistency},
      {6, [&] { return desk_scale(work); }},
      {7, [&] { return determinism_and_shards(work); }},
  };
  const std::set<int> selected(only.begin(), only.end());
  int hard_failures = 0;
  int passed = 0;
  int documented = 0;
  for (const auto& [id, check] : criteria) {
    if (!selected.empty() && !selected.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome r;
    try {
      r = check();
    } catch (const std::exception& e) {
      r = {false, std::string("threw: ") + e.what(), ""};
    }
    std::cout << (r.passed ? "PASS" : "FAIL") << " criterion " << id << ": " << r.detail << " [" << fmt(seconds_since(t0))
              << " s]";
    if (!r.passed && !r.deviation.empty()) std::cout << " -- documented deviation: " << r.deviation;
    std::cout << std::endl;
    if (r.passed) {
      ++passed;
    } else if (r.deviation.empty()) {
      ++hard_failures;
    } else {
      ++documented;
    }
  }
  std::cout << "summary: " << passed << " passed, " << hard_failures + documented << " failed (" << documented
            << " documented deviation" << (documented == 1 ? "" : "s") << ")" << std::endl;
  return hard_failures;
}
