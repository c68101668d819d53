#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "sawsle/pivot.hpp"

namespace sawsle {

/// Settings for a multi-chain run. Defaults are the desk-scale profile.
struct RunConfig {
  std::size_t steps = 1000;
  std::uint64_t total_samples = 1'000'000;
  std::uint64_t sample_interval = 20;
  std::optional<std::uint64_t> warmup;  // unset: max(10 N, 10^4)
  std::uint64_t seed = 1;
  std::size_t chains = 1;
  std::uint64_t blocks = 100;
  std::uint64_t checkpoint_every = 1'000'000;
  std::filesystem::path output_dir = "sawsle-run";

  /// Throws std::invalid_argument. total_samples must split evenly over
  /// the chains so every chain shares one block layout.
  void validate() const;
  std::uint64_t samples_per_chain() const { return total_samples / chains; }
  /// ceil(samples_per_chain / blocks)
  std::uint64_t block_size() const;
  std::uint64_t chain_seed(std::size_t chain) const;
  ChainConfig chain_config(std::size_t chain) const;
};

/// Applies one key=value setting (N, samples, interval, warmup, seed,
/// chains, blocks, checkpoint_every, out). Manifest-only keys (version,
/// rng, chain_seed.<k>) are accepted and checked or ignored. Throws
/// std::invalid_argument for unknown keys or bad values.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Reads a key=value file; '#' starts a comment, blank lines are ignored.
RunConfig parse_config(std::istream& is, RunConfig base = {});

/// Everything needed to regenerate the run's outputs; parse_config()
/// accepts it back. The output directory is deliberately not recorded.
std::string render_manifest(const RunConfig& config);

std::string_view code_version();

}  // namespace sawsle
