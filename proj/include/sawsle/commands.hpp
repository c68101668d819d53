#pragma once

#include <array>
#include <atomic>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sawsle/config.hpp"
#include "sawsle/estimators.hpp"
#include "sawsle/fitting.hpp"
#include "sawsle/pivot.hpp"

namespace sawsle {

struct RunOptions {
  /// Continue from the checkpoints in the output directory.
  bool resume = false;
  /// Stop every chain once it reaches this iteration (checkpoint, no merge).
  std::optional<std::uint64_t> halt_at_iteration;
  const std::atomic<bool>* stop = nullptr;
  /// Progress messages; null for silence.
  std::ostream* log = nullptr;
};

struct RunSummary {
  std::vector<RunReport> chains;
  bool completed = false;
  /// Written only when every chain completed.
  std::filesystem::path accumulator_path;
};

/// Runs the configured chains (concurrently when there are several),
/// reweights and accumulates every sample, and writes into
/// config.output_dir:
///   manifest.txt          config, chain seeds, RNG algorithm, code version
///   chain-<k>.ckpt        walk + RNG state + counters of chain k
///   chain-<k>.acc         accumulator of chain k at that checkpoint
///   accumulator.txt       merged accumulator (complete runs only)
///   run_report.txt        acceptance fractions and wall times
/// Throws std::invalid_argument for bad configs, std::runtime_error for I/O
/// failures or a resume that does not match the manifest.
RunSummary cmd_run(const RunConfig& config, const RunOptions& options = {});

/// Accumulates `walk` into `acc` (stats_fast + reweighting).
void accumulate_walk(WeightedAccumulator& acc, const LatticeWalk& walk, const Exponents& e = kConjectured);

struct AnalysisSummary {
  Estimates estimates;
  std::optional<FitResult> exponent_fit;
  std::optional<FitResult> angular_fit;
  std::array<double, 4> max_abs_diff{};  // max |ECDF - exact| per statistic
  std::vector<std::string> warnings;
};

/// Analysis of an accumulator without touching the filesystem.
AnalysisSummary analyze(const WeightedAccumulator& acc);

/// Reads an accumulator file and writes cdf_{X,Y,R,S}.csv, angular.csv,
/// fit_exponents.csv, fit_angular.csv and least_sq.plt into out_dir. Fit
/// files are skipped (with a warning) when a fit has too little data. No
/// file is written if the accumulator is unreadable or empty.
AnalysisSummary cmd_analyze(const std::filesystem::path& accumulator, const std::filesystem::path& out_dir);

/// CSV "stat,w,d0,di,cdf" over the default grids.
void cmd_exact(std::ostream& os);

/// Writes "# N=<n> count=<c>" followed (unless count_only) by one walk per
/// line as space-separated "x,y" pairs. Returns the count.
std::size_t cmd_enumerate(std::size_t steps, std::ostream& os, bool count_only = false);

}  // namespace sawsle
