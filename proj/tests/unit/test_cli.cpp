#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "sawsle/commands.hpp"
#include "sawsle/config.hpp"
#include "sawsle/errors.hpp"
#include "sawsle/io_util.hpp"

using namespace sawsle;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("sawsle-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

RunConfig small_config(const fs::path& out, std::size_t chains = 1) {
  RunConfig c;
  c.steps = 60;
  c.total_samples = 4000;
  c.sample_interval = 5;
  c.warmup = 500;
  c.seed = 31;
  c.chains = chains;
  c.blocks = 20;
  c.checkpoint_every = 2000;
  c.output_dir = out;
  return c;
}

int run_cli(const std::string& args, const fs::path& out) {
  const std::string cmd = std::string(SAWSLE_CLI) + " " + args + " > " + out.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("config parsing and manifest round trip") {
  std::istringstream in("# comment\nN = 200\nsamples=1000\ninterval=10\nwarmup=auto\nseed=9\nchains=2\n\nblocks=10\n");
  const RunConfig c = parse_config(in);
  CHECK(c.steps == 200);
  CHECK(c.total_samples == 1000);
  CHECK(c.sample_interval == 10);
  CHECK_FALSE(c.warmup.has_value());
  CHECK(c.seed == 9);
  CHECK(c.chains == 2);
  CHECK(c.block_size() == 50);
  const std::string manifest = render_manifest(c);
  std::istringstream back(manifest);
  const RunConfig d = parse_config(back);
  CHECK(render_manifest(d) == manifest);
  CHECK(manifest.find("rng=xoshiro256ss") != std::string::npos);
  CHECK(manifest.find("chain_seed.1=") != std::string::npos);
  CHECK(manifest.find("version=") != std::string::npos);

  RunConfig e;
  CHECK_THROWS_AS(apply_setting(e, "bogus", "1"), std::invalid_argument);
  CHECK_THROWS_AS(apply_setting(e, "N", "abc"), std::invalid_argument);
  CHECK_THROWS_AS(apply_setting(e, "rng", "mt19937"), std::invalid_argument);
  e.total_samples = 10;
  e.chains = 3;
  CHECK_THROWS_AS(e.validate(), std::invalid_argument);
  e.chains = 2;
  e.total_samples = 0;
  CHECK_THROWS_AS(e.validate(), std::invalid_argument);
  // chain 0 seed is independent of the chain count
  RunConfig one, four;
  four.chains = 4;
  four.total_samples = 4;
  CHECK(one.chain_seed(0) == four.chain_seed(0));
}

TEST_CASE("identical manifests give bit-identical accumulators") {
  const fs::path a = scratch("det-a"), b = scratch("det-b");
  const RunSummary ra = cmd_run(small_config(a));
  const RunSummary rb = cmd_run(small_config(b));
  REQUIRE(ra.completed);
  CHECK(read_file(ra.accumulator_path) == read_file(rb.accumulator_path));
  CHECK(read_file(a / "manifest.txt") == read_file(b / "manifest.txt"));
  RunConfig other = small_config(b);
  other.seed = 32;
  cmd_run(other);
  CHECK(read_file(ra.accumulator_path) != read_file(b / "accumulator.txt"));
}

TEST_CASE("multi-chain runs are deterministic too") {
  const fs::path a = scratch("mc-a"), b = scratch("mc-b");
  cmd_run(small_config(a, 4));
  cmd_run(small_config(b, 4));
  CHECK(read_file(a / "accumulator.txt") == read_file(b / "accumulator.txt"));
  std::istringstream in(read_file(a / "accumulator.txt"));
  CHECK(WeightedAccumulator::read(in).samples() == 4000);
}

TEST_CASE("resume after a halt reproduces the uninterrupted run") {
  const fs::path full = scratch("resume-full"), part = scratch("resume-part");
  cmd_run(small_config(full, 2));

  RunOptions halt;
  halt.halt_at_iteration = 7777;
  const RunSummary halted = cmd_run(small_config(part, 2), halt);
  CHECK_FALSE(halted.completed);
  CHECK_FALSE(fs::exists(part / "accumulator.txt"));
  CHECK(fs::exists(part / "chain-0.ckpt"));
  CHECK(fs::exists(part / "chain-1.acc"));

  RunOptions resume;
  resume.resume = true;
  const RunSummary done = cmd_run(small_config(part, 2), resume);
  CHECK(done.completed);
  CHECK(read_file(full / "accumulator.txt") == read_file(part / "accumulator.txt"));

  // resuming against a different configuration is refused
  RunConfig changed = small_config(part, 2);
  changed.seed = 99;
  CHECK_THROWS_AS(cmd_run(changed, resume), std::runtime_error);
}

TEST_CASE("analysis writes every table with headers") {
  const fs::path dir = scratch("analyze");
  RunConfig c = small_config(dir);
  c.total_samples = 20000;
  c.blocks = 50;
  const RunSummary r = cmd_run(c);
  const fs::path out = dir / "analysis";
  const AnalysisSummary s = cmd_analyze(r.accumulator_path, out);
  CHECK(s.estimates.samples == 20000);
  for (const char* f : {"cdf_X.csv", "cdf_Y.csv", "cdf_R.csv", "cdf_S.csv", "angular.csv"}) {
    REQUIRE(fs::exists(out / f));
  }
  std::ifstream x(out / "cdf_X.csv");
  std::string header, first;
  std::getline(x, header);
  std::getline(x, first);
  CHECK(header == "w,ecdf,stderr,exact_cdf,diff");
  CHECK(first.rfind("0,", 0) == 0);
  std::ifstream a(out / "angular.csv");
  std::getline(a, header);
  CHECK(header == "bin_lo,bin_mid,bin_hi,expectation,stderr");
  if (s.exponent_fit) {
    std::ifstream f(out / "fit_exponents.csv");
    std::getline(f, header);
    CHECK(header.rfind("b,bbar,", 0) == 0);
  }
  for (double d : s.max_abs_diff) CHECK(d < 1.0);
}

TEST_CASE("empty or malformed accumulators write nothing") {
  const fs::path dir = scratch("empty");
  {
    std::ostringstream os;
    WeightedAccumulator(10).write(os);
    write_file_atomic(dir / "empty.acc", os.str());
  }
  CHECK_THROWS_AS(cmd_analyze(dir / "empty.acc", dir / "out"), EmptyAccumulatorError);
  CHECK_FALSE(fs::exists(dir / "out"));
  write_file_atomic(dir / "bad.acc", "sawsle-accumulator v9\n");
  CHECK_THROWS_AS(cmd_analyze(dir / "bad.acc", dir / "out"), FormatError);
  CHECK_FALSE(fs::exists(dir / "out"));
  CHECK_THROWS(cmd_analyze(dir / "missing.acc", dir / "out"));
}

TEST_CASE("exact and enumerate commands") {
  std::ostringstream os;
  cmd_exact(os);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "stat,w,d0,di,cdf");
  std::size_t rows = 0;
  bool s_anchor = false;
  while (std::getline(in, line)) {
    ++rows;
    if (line.rfind("S,1,", 0) == 0) {
      s_anchor = true;
      CHECK(std::stod(line.substr(line.rfind(',') + 1)) == doctest::Approx(std::pow(2.0, -25.0 / 48.0)).epsilon(1e-15));
    }
  }
  CHECK(rows == 1704);
  CHECK(s_anchor);

  std::ostringstream e;
  CHECK(cmd_enumerate(3, e) == 7);
  CHECK(e.str().rfind("# N=3 count=7\n", 0) == 0);
  std::ostringstream count_only;
  CHECK(cmd_enumerate(6, count_only, true) == 131);
  CHECK(count_only.str() == "# N=6 count=131\n");
  CHECK_THROWS_AS(cmd_enumerate(13, count_only), std::invalid_argument);
}

TEST_CASE("command line front end") {
  const fs::path dir = scratch("cli");
  CHECK(run_cli("enumerate 2", dir / "enum.txt") == 0);
  CHECK(read_file(dir / "enum.txt").rfind("# N=2 count=3\n", 0) == 0);
  CHECK(run_cli("enumerate 20", dir / "cap.txt") != 0);
  CHECK(run_cli("exact -o " + (dir / "exact.csv").string(), dir / "exact.txt") == 0);
  CHECK(fs::exists(dir / "exact.csv"));
  const std::string run_args = "run -q --N 30 --samples 2000 --interval 3 --warmup 100 --blocks 10 --out " +
                               (dir / "run").string();
  CHECK(run_cli(run_args, dir / "run.txt") == 0);
  CHECK(fs::exists(dir / "run" / "accumulator.txt"));
  CHECK(fs::exists(dir / "run" / "run_report.txt"));
  CHECK(run_cli("analyze " + (dir / "run" / "accumulator.txt").string() + " -o " + (dir / "an").string(),
                dir / "an.txt") == 0);
  CHECK(fs::exists(dir / "an" / "cdf_S.csv"));
  {
    std::ofstream cfg(dir / "cfg.txt");
    cfg << "N=20\nsamples=100\ninterval=2\nwarmup=10\nblocks=5\n";
  }
  CHECK(run_cli("run -q -c " + (dir / "cfg.txt").string() + " --seed 4 --out " + (dir / "run2").string(),
                dir / "run2.txt") == 0);
  CHECK(read_file(dir / "run2" / "manifest.txt").find("seed=4\n") != std::string::npos);
  CHECK(read_file(dir / "run2" / "manifest.txt").find("N=20\n") != std::string::npos);
  CHECK(run_cli("run -q --N 0 --out " + (dir / "bad").string(), dir / "bad.txt") != 0);
}
