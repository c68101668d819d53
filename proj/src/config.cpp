#include "sawsle/config.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>

#ifndef SAWSLE_VERSION
#define SAWSLE_VERSION "unknown"
#endif

namespace sawsle {

std::string_view code_version() { return SAWSLE_VERSION; }

void RunConfig::validate() const {
  if (steps < 2) throw std::invalid_argument("config: N must be at least 2");
  if (total_samples == 0) throw std::invalid_argument("config: samples must be positive");
  if (sample_interval == 0) throw std::invalid_argument("config: interval must be positive");
  if (chains == 0) throw std::invalid_argument("config: chains must be positive");
  if (blocks == 0) throw std::invalid_argument("config: blocks must be positive");
  if (total_samples % chains != 0) {
    throw std::invalid_argument("config: samples must be divisible by chains");
  }
}

std::uint64_t RunConfig::block_size() const {
  const std::uint64_t per_chain = samples_per_chain();
  return std::max<std::uint64_t>(1, (per_chain + blocks - 1) / blocks);
}

std::uint64_t RunConfig::chain_seed(std::size_t chain) const { return derive_chain_seed(seed, chain); }

ChainConfig RunConfig::chain_config(std::size_t chain) const {
  ChainConfig c;
  c.steps = steps;
  c.sample_interval = sample_interval;
  c.warmup_iterations = warmup;
  c.seed = chain_seed(chain);
  c.total_samples = samples_per_chain();
  c.checkpoint_interval = checkpoint_every;
  return c;
}

namespace {

std::uint64_t to_u64(std::string_view key, std::string_view text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("config: bad value for " + std::string(key) + ": '" + std::string(text) + "'");
  }
  return v;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

void apply_setting(RunConfig& config, std::string_view key, std::string_view value) {
  if (key == "N") {
    config.steps = to_u64(key, value);
  } else if (key == "samples") {
    config.total_samples = to_u64(key, value);
  } else if (key == "interval") {
    config.sample_interval = to_u64(key, value);
  } else if (key == "warmup") {
    if (value == "auto") {
      config.warmup.reset();
    } else {
      config.warmup = to_u64(key, value);
    }
  } else if (key == "seed") {
    config.seed = to_u64(key, value);
  } else if (key == "chains") {
    config.chains = to_u64(key, value);
  } else if (key == "blocks") {
    config.blocks = to_u64(key, value);
  } else if (key == "checkpoint_every") {
    config.checkpoint_every = to_u64(key, value);
  } else if (key == "out") {
    config.output_dir = std::string(value);
  } else if (key == "rng") {
    if (value != Xoshiro256::kAlgorithm) {
      throw std::invalid_argument("config: unsupported rng '" + std::string(value) + "'");
    }
  } else if (key == "version" || key.rfind("chain_seed.", 0) == 0 || key == "block_size") {
    // Informational manifest entries.
  } else {
    throw std::invalid_argument("config: unknown key '" + std::string(key) + "'");
  }
}

RunConfig parse_config(std::istream& is, RunConfig base) {
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
    }
    apply_setting(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

std::string render_manifest(const RunConfig& config) {
  std::ostringstream os;
  os << "# sawsle run manifest\n"
     << "version=" << code_version() << '\n'
     << "rng=" << Xoshiro256::kAlgorithm << '\n'
     << "N=" << config.steps << '\n'
     << "samples=" << config.total_samples << '\n'
     << "interval=" << config.sample_interval << '\n'
     << "warmup=" << (config.warmup ? std::to_string(*config.warmup) : std::string("auto")) << '\n'
     << "seed=" << config.seed << '\n'
     << "chains=" << config.chains << '\n'
     << "blocks=" << config.blocks << '\n'
     << "block_size=" << config.block_size() << '\n'
     << "checkpoint_every=" << config.checkpoint_every << '\n';
  for (std::size_t k = 0; k < config.chains; ++k) {
    os << "chain_seed." << k << '=' << config.chain_seed(k) << '\n';
  }
  return os.str();
}

}  // namespace sawsle
