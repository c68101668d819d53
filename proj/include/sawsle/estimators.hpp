#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "sawsle/grid.hpp"
#include "sawsle/observables.hpp"

namespace sawsle {

/// Neumaier-compensated running sum.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  void add(const CompensatedSum& other) {
    add(other.sum);
    add(other.comp);
  }
  double value() const { return sum + comp; }

  friend bool operator==(const CompensatedSum&, const CompensatedSum&) = default;
};

/// Weighted tallies of one block of consecutive samples.
struct Block {
  std::uint64_t samples = 0;
  bool complete = false;
  CompensatedSum weight;
  CompensatedSum weight_sq;
  /// cells[stat][k]: weight of samples whose statistic is <= threshold k.
  std::array<std::vector<CompensatedSum>, 4> cells;
  /// angular[k]: weight of samples with theta in bin k of [0, pi].
  std::vector<CompensatedSum> angular;

  friend bool operator==(const Block&, const Block&) = default;
};

/// Mergeable tally of reweighted empirical CDFs on the threshold grids and
/// of the angular histogram, split into blocks for error estimation. Global
/// sums are always derived from the blocks, so the two agree exactly.
class WeightedAccumulator {
 public:
  explicit WeightedAccumulator(std::uint64_t block_size = 1);

  /// Adds one sample. Throws std::invalid_argument for non-finite input or
  /// theta outside the open interval (0, pi).
  void accumulate(const TransformedStats& stats, double weight);

  /// Blockwise sum: block k of the result is block k of *this plus block k
  /// of other. Throws std::invalid_argument if block sizes or grids differ.
  void merge(const WeightedAccumulator& other);

  std::uint64_t block_size() const { return block_size_; }
  const std::array<ThresholdGrid, 4>& grids() const { return grids_; }
  const ThresholdGrid& grid(Statistic s) const { return grids_[static_cast<std::size_t>(s)]; }
  const std::vector<Block>& blocks() const { return blocks_; }

  std::uint64_t samples() const;
  std::size_t completed_blocks() const;
  double total_weight() const;
  double total_weight_sq() const;
  double cell(Statistic s, std::size_t k) const;
  double angular_bin(std::size_t k) const;

  friend bool operator==(const WeightedAccumulator&, const WeightedAccumulator&) = default;

  // Text serialisation (see accumulator file format in the README). `stamp`
  // is an opaque counter, e.g. the chain iteration a checkpoint belongs to.
  void write(std::ostream& os, std::uint64_t stamp = 0) const;
  /// Throws FormatError on malformed or version-mismatched input.
  static WeightedAccumulator read(std::istream& is, std::uint64_t* stamp = nullptr);

 private:
  Block make_block() const;

  std::uint64_t block_size_;
  std::array<ThresholdGrid, 4> grids_;
  std::vector<Block> blocks_;
};

WeightedAccumulator merge(WeightedAccumulator a, const WeightedAccumulator& b);

struct CdfEstimate {
  Statistic stat = Statistic::kX;
  std::vector<double> thresholds;
  std::vector<double> ecdf;
  std::vector<double> std_error;  // NaN when fewer than two complete blocks
};

struct AngularEstimate {
  std::vector<double> lo;
  std::vector<double> mid;
  std::vector<double> hi;
  std::vector<double> expectation;
  std::vector<double> std_error;
};

struct Estimates {
  std::array<CdfEstimate, 4> cdfs;
  AngularEstimate angular;
  std::uint64_t samples = 0;
  double total_weight = 0.0;
  /// Kish effective sample size (sum w)^2 / sum w^2.
  double effective_samples = 0.0;
  std::size_t error_blocks = 0;

  const CdfEstimate& cdf(Statistic s) const { return cdfs[static_cast<std::size_t>(s)]; }
};

/// Normalises every tally by the total weight. Error bars come from the
/// spread of per-block ratios over completed blocks: sqrt(var / B).
/// Throws EmptyAccumulatorError when the total weight is zero.
Estimates finalize(const WeightedAccumulator& acc);

}  // namespace sawsle
