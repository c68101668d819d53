#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "sawsle/commands.hpp"
#include "sawsle/config.hpp"
#include "sawsle/errors.hpp"
#include "sawsle/io_util.hpp"
#include "sawsle/selftest.hpp"

namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop.store(true); }

int do_run(const std::string& config_path, const std::vector<std::pair<std::string, std::string>>& overrides,
           bool resume, std::int64_t halt_at, bool quiet) {
  sawsle::RunConfig config;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open config " + config_path);
    config = sawsle::parse_config(in);
  }
  for (const auto& [key, value] : overrides) sawsle::apply_setting(config, key, value);

  sawsle::RunOptions options;
  options.resume = resume;
  if (halt_at >= 0) options.halt_at_iteration = static_cast<std::uint64_t>(halt_at);
  options.stop = &g_stop;
  options.log = quiet ? nullptr : &std::cerr;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);

  const sawsle::RunSummary summary = sawsle::cmd_run(config, options);
  if (!summary.completed) {
    std::cerr << "run halted; resume with --resume\n";
    return 3;
  }
  std::cout << summary.accumulator_path.string() << '\n';
  return 0;
}

int do_analyze(const std::string& accumulator, const std::string& out_dir) {
  const sawsle::AnalysisSummary s = sawsle::cmd_analyze(accumulator, out_dir);
  std::cout << "samples=" << s.estimates.samples << " effective=" << sawsle::format_double(s.estimates.effective_samples)
            << " error_blocks=" << s.estimates.error_blocks << '\n';
  for (const sawsle::Statistic stat : sawsle::kStatistics) {
    std::cout << "max_abs_diff_" << sawsle::name(stat) << '='
              << sawsle::format_double(s.max_abs_diff[static_cast<std::size_t>(stat)]) << '\n';
  }
  if (s.exponent_fit) {
    std::cout << "b=" << sawsle::format_double(s.exponent_fit->coefficients(0))
              << " bbar=" << sawsle::format_double(s.exponent_fit->coefficients(1)) << '\n';
  }
  if (s.angular_fit) std::cout << "angular_slope=" << sawsle::format_double(s.angular_fit->coefficients(1)) << '\n';
  for (const std::string& w : s.warnings) std::cerr << "warning: " << w << '\n';
  return 0;
}

int do_exact(const std::string& out) {
  std::ostringstream os;
  sawsle::cmd_exact(os);
  if (out.empty()) {
    std::cout << os.str();
  } else {
    sawsle::write_file_atomic(out, os.str());
  }
  return 0;
}

int do_selftest(bool inject, std::uint64_t uniformity_samples) {
  sawsle::SelftestOptions options;
  options.uniformity_samples = uniformity_samples;
  if (inject) options.s_factors = sawsle::factors_S_unguarded;
  bool all = true;
  for (const sawsle::CheckResult& c : sawsle::run_selftest(options)) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    all = all && c.passed;
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Half-plane SAW Monte Carlo tests of radial SLE(8/3)"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run pivot chains and accumulate reweighted statistics");
  std::string config_path;
  bool resume = false;
  bool quiet = false;
  std::int64_t halt_at = -1;
  run->add_option("-c,--config", config_path, "key=value config file");
  std::vector<std::pair<std::string, std::string>> overrides;
  const std::vector<std::pair<std::string, std::string>> flags = {
      {"--N", "N"},           {"--samples", "samples"}, {"--interval", "interval"},
      {"--warmup", "warmup"}, {"--seed", "seed"},       {"--chains", "chains"},
      {"--blocks", "blocks"}, {"--checkpoint-every", "checkpoint_every"}, {"--out", "out"}};
  std::vector<std::string> values(flags.size());
  for (std::size_t k = 0; k < flags.size(); ++k) {
    run->add_option(flags[k].first, values[k], "override config key '" + flags[k].second + "'");
  }
  run->add_flag("--resume", resume, "continue from the checkpoints in the output directory");
  run->add_option("--halt-at", halt_at, "stop every chain at this iteration (checkpoint only)");
  run->add_flag("-q,--quiet", quiet, "no progress messages");

  auto* analyze = app.add_subcommand("analyze", "Write CDF tables and fits from an accumulator");
  std::string accumulator;
  std::string analyze_out = ".";
  analyze->add_option("accumulator", accumulator, "accumulator file")->required();
  analyze->add_option("-o,--out", analyze_out, "output directory");

  auto* exact = app.add_subcommand("exact", "Exact radial SLE(8/3) CDFs on the default grids");
  std::string exact_out;
  exact->add_option("-o,--out", exact_out, "output file (default stdout)");

  auto* enumerate = app.add_subcommand("enumerate", "List every half-plane SAW of length N");
  std::size_t enum_steps = 0;
  bool count_only = false;
  enumerate->add_option("N", enum_steps, "number of steps")->required();
  enumerate->add_flag("--count-only", count_only, "print only the count line");

  auto* selftest = app.add_subcommand("selftest", "Run the built-in invariant checks");
  bool inject = false;
  std::uint64_t uniformity_samples = 1'000'000;
  selftest->add_flag("--inject-bad-s-branch", inject, "use an S factor routine without the s=1 limit");
  selftest->add_option("--uniformity-samples", uniformity_samples, "samples for the N=6 uniformity check");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      for (std::size_t k = 0; k < flags.size(); ++k) {
        if (run->count(flags[k].first) > 0) overrides.emplace_back(flags[k].second, values[k]);
      }
      return do_run(config_path, overrides, resume, halt_at, quiet);
    }
    if (analyze->parsed()) return do_analyze(accumulator, analyze_out);
    if (exact->parsed()) return do_exact(exact_out);
    if (enumerate->parsed()) {
      sawsle::cmd_enumerate(enum_steps, std::cout, count_only);
      return 0;
    }
    if (selftest->parsed()) return do_selftest(inject, uniformity_samples);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
