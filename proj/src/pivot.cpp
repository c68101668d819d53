#include "sawsle/pivot.hpp"

#include <algorithm>
#include <chrono>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "sawsle/errors.hpp"

namespace sawsle {

std::uint64_t ChainConfig::warmup() const {
  if (warmup_iterations) return *warmup_iterations;
  return std::max<std::uint64_t>(10 * static_cast<std::uint64_t>(steps), 10'000);
}

void ChainConfig::validate() const {
  if (steps < 2) throw std::invalid_argument("chain: N must be at least 2");
  if (sample_interval < 1) throw std::invalid_argument("chain: sample_interval must be >= 1");
  if (total_samples < 1) throw std::invalid_argument("chain: total_samples must be >= 1");
}

ChainState ChainState::fresh(std::size_t steps, std::uint64_t seed) {
  ChainState state;
  state.walk = initial_walk(steps);
  state.index.rebuild(state.walk);
  state.rng.reseed(seed);
  return state;
}

bool try_pivot(ChainState& state, std::size_t pivot, SymmetryOp op) {
  LatticeWalk& walk = state.walk;
  const std::size_t n = walk.steps();
  const Site origin = walk[pivot];
  std::vector<Site>& moved = state.scratch;
  moved.resize(n - pivot);

  // Tail sites nearest the pivot are the likeliest to collide, so check
  // outward from the pivot.
  for (std::size_t j = pivot + 1; j <= n; ++j) {
    const Site q = origin + apply(op, walk[j] - origin);
    if (!in_open_half_plane(q)) return false;
    if (const auto hit = state.index.find(q); hit && *hit <= pivot) return false;
    moved[j - pivot - 1] = q;
  }
  for (std::size_t j = pivot + 1; j <= n; ++j) state.index.erase(walk[j]);
  for (std::size_t j = pivot + 1; j <= n; ++j) {
    walk[j] = moved[j - pivot - 1];
    state.index.insert(walk[j], static_cast<std::uint32_t>(j));
  }
  return true;
}

PivotOutcome pivot_step(ChainState& state) {
  const std::size_t n = state.walk.steps();
  PivotOutcome out;
  out.pivot = 1 + static_cast<std::size_t>(state.rng.below(n - 1));
  out.op = kSymmetryOps[state.rng.below(kSymmetryOps.size())];
  out.accepted = try_pivot(state, out.pivot, out.op);
  ++state.proposals;
  if (out.accepted) ++state.accepted;
  ++state.iteration;
  return out;
}

RunReport run_chain(const ChainConfig& config, ChainState& state, const SampleSink& sink,
                    const RunControls& controls) {
  config.validate();
  if (state.walk.steps() != config.steps) {
    throw std::invalid_argument("run_chain: state walk length does not match config");
  }
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t warmup = config.warmup();
  const std::uint64_t interval = config.sample_interval;
  const std::uint64_t last = config.final_iteration();
  const std::uint64_t acceptance_check = warmup > 0 ? warmup : interval;
  const std::uint64_t halt = controls.halt_at_iteration.value_or(last);

  bool completed = true;
  while (state.iteration < last) {
    if (state.iteration >= halt ||
        (controls.stop && controls.stop->load(std::memory_order_relaxed))) {
      completed = false;
      break;
    }
    pivot_step(state);
    const std::uint64_t it = state.iteration;
    if (it == acceptance_check && state.accepted == 0) {
      throw std::runtime_error("run_chain: no pivot accepted after warm-up (" +
                               std::to_string(it) + " iterations)");
    }
    if (it > warmup && (it - warmup) % interval == 0) sink(state.walk);
    if (controls.on_checkpoint && config.checkpoint_interval > 0 &&
        it % config.checkpoint_interval == 0 && it < last) {
      controls.on_checkpoint(state);
    }
  }
  if (controls.on_checkpoint) controls.on_checkpoint(state);

  RunReport report;
  report.iterations = state.iteration;
  report.proposals = state.proposals;
  report.accepted = state.accepted;
  report.samples = state.iteration > warmup ? (state.iteration - warmup) / interval : 0;
  report.acceptance_fraction =
      state.proposals ? static_cast<double>(state.accepted) / static_cast<double>(state.proposals) : 0.0;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.completed = completed;
  return report;
}

RunReport run_chain(const ChainConfig& config, const SampleSink& sink) {
  config.validate();
  ChainState state = ChainState::fresh(config.steps, config.seed);
  return run_chain(config, state, sink);
}

void write_checkpoint(std::ostream& os, const ChainState& state) {
  write_walk(os, state.walk);
  os << "rng=" << Xoshiro256::kAlgorithm << ':' << state.rng.state_hex() << '\n'
     << "iter=" << state.iteration << '\n'
     << "proposals=" << state.proposals << '\n'
     << "accepted=" << state.accepted << '\n';
}

namespace {

std::string expect_field(std::istream& is, const std::string& key) {
  std::string line;
  if (!std::getline(is, line)) throw FormatError("checkpoint: missing '" + key + "=' line");
  if (line.rfind(key + "=", 0) != 0) {
    throw FormatError("checkpoint: expected '" + key + "=', got '" + line + "'");
  }
  return line.substr(key.size() + 1);
}

std::uint64_t parse_count(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw FormatError("checkpoint: bad value for " + key + ": '" + text + "'");
  }
}

}  // namespace

ChainState read_checkpoint(std::istream& is) {
  ChainState state;
  state.walk = read_walk(is);
  if (!validate_walk(state.walk) || state.walk.steps() < 2) {
    throw FormatError("checkpoint: stored walk is not a valid half-plane SAW");
  }
  const std::string rng = expect_field(is, "rng");
  const std::string prefix = std::string(Xoshiro256::kAlgorithm) + ":";
  if (rng.rfind(prefix, 0) != 0) throw FormatError("checkpoint: unsupported rng '" + rng + "'");
  state.rng.set_state_hex(rng.substr(prefix.size()));
  state.iteration = parse_count(expect_field(is, "iter"), "iter");
  state.proposals = parse_count(expect_field(is, "proposals"), "proposals");
  state.accepted = parse_count(expect_field(is, "accepted"), "accepted");
  state.index.rebuild(state.walk);
  return state;
}

}  // namespace sawsle
