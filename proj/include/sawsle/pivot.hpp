#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sawsle/lattice_walk.hpp"
#include "sawsle/occupancy_index.hpp"
#include "sawsle/rng.hpp"

namespace sawsle {

/// Non-identity elements of the symmetry group of the square, acting on a
/// displacement from the pivot site.
enum class SymmetryOp : std::uint8_t {
  kRotate90,
  kRotate180,
  kRotate270,
  kReflectX,         // (x, y) -> (x, -y)
  kReflectY,         // (x, y) -> (-x, y)
  kReflectDiagonal,  // (x, y) -> (y, x)
  kReflectAntiDiagonal,  // (x, y) -> (-y, -x)
};

inline constexpr std::array<SymmetryOp, 7> kSymmetryOps = {
    SymmetryOp::kRotate90,  SymmetryOp::kRotate180,       SymmetryOp::kRotate270,
    SymmetryOp::kReflectX,  SymmetryOp::kReflectY,        SymmetryOp::kReflectDiagonal,
    SymmetryOp::kReflectAntiDiagonal};

constexpr Site apply(SymmetryOp op, Site d) {
  switch (op) {
    case SymmetryOp::kRotate90: return {-d.y, d.x};
    case SymmetryOp::kRotate180: return {-d.x, -d.y};
    case SymmetryOp::kRotate270: return {d.y, -d.x};
    case SymmetryOp::kReflectX: return {d.x, -d.y};
    case SymmetryOp::kReflectY: return {-d.x, d.y};
    case SymmetryOp::kReflectDiagonal: return {d.y, d.x};
    case SymmetryOp::kReflectAntiDiagonal: return {-d.y, -d.x};
  }
  return d;
}

constexpr SymmetryOp inverse(SymmetryOp op) {
  if (op == SymmetryOp::kRotate90) return SymmetryOp::kRotate270;
  if (op == SymmetryOp::kRotate270) return SymmetryOp::kRotate90;
  return op;
}

struct ChainConfig {
  std::size_t steps = 0;
  std::uint64_t sample_interval = 100;
  /// Iterations discarded before the first sample; unset means
  /// max(10 * steps, 10^4).
  std::optional<std::uint64_t> warmup_iterations;
  std::uint64_t seed = 0;
  std::uint64_t total_samples = 1;
  /// Checkpoint hook cadence in iterations (0 disables periodic checkpoints).
  std::uint64_t checkpoint_interval = 1'000'000;

  std::uint64_t warmup() const;
  /// Iteration count at which the last sample is taken.
  std::uint64_t final_iteration() const { return warmup() + total_samples * sample_interval; }
  /// Throws std::invalid_argument.
  void validate() const;
};

/// Everything needed to continue a chain bit-for-bit.
struct ChainState {
  LatticeWalk walk;
  OccupancyIndex index;
  Xoshiro256 rng{0};
  std::uint64_t iteration = 0;
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;

  // Reused proposal buffer; not part of the logical state.
  std::vector<Site> scratch;

  /// Rod initial condition with the RNG seeded from `seed`.
  static ChainState fresh(std::size_t steps, std::uint64_t seed);
};

struct PivotOutcome {
  std::size_t pivot = 0;
  SymmetryOp op = SymmetryOp::kRotate90;
  bool accepted = false;
};

/// Applies `op` about site `pivot` to sites pivot+1..N if the result is a
/// valid half-plane SAW. Does not touch the counters. Requires
/// 1 <= pivot < N.
bool try_pivot(ChainState& state, std::size_t pivot, SymmetryOp op);

/// One Metropolis iteration: uniform pivot in 1..N-1, uniform op among the
/// seven, accept iff valid. Always advances the iteration counter.
PivotOutcome pivot_step(ChainState& state);

struct RunReport {
  std::uint64_t iterations = 0;
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
  std::uint64_t samples = 0;
  double acceptance_fraction = 0.0;
  double wall_seconds = 0.0;
  std::string rng_algorithm{Xoshiro256::kAlgorithm};
  /// False when the run was halted before delivering every sample.
  bool completed = false;
};

using SampleSink = std::function<void(const LatticeWalk&)>;
using CheckpointHook = std::function<void(const ChainState&)>;

struct RunControls {
  /// Called every checkpoint_interval iterations and once on exit.
  CheckpointHook on_checkpoint;
  /// Stop cleanly once the iteration counter reaches this value.
  std::optional<std::uint64_t> halt_at_iteration;
  /// Polled every iteration; a set flag stops the chain cleanly.
  const std::atomic<bool>* stop = nullptr;
};

/// Drives `state` from its current iteration to config.final_iteration(),
/// handing every sample_interval-th post-warm-up walk to `sink`. Throws
/// std::runtime_error if no proposal has been accepted by the end of
/// warm-up; exceptions from the hooks propagate.
RunReport run_chain(const ChainConfig& config, ChainState& state, const SampleSink& sink,
                    const RunControls& controls = {});
RunReport run_chain(const ChainConfig& config, const SampleSink& sink);

// Checkpoint text format: the walk format followed by
//   rng=xoshiro256ss:<64 hex digits>
//   iter=<n>
//   proposals=<n>
//   accepted=<n>
void write_checkpoint(std::ostream& os, const ChainState& state);
/// Throws FormatError; the occupancy index is rebuilt from the walk.
ChainState read_checkpoint(std::istream& is);

}  // namespace sawsle
