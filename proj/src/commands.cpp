#include "sawsle/commands.hpp"

#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "sawsle/errors.hpp"
#include "sawsle/io_util.hpp"

namespace fs = std::filesystem;

namespace sawsle {

void accumulate_walk(WeightedAccumulator& acc, const LatticeWalk& walk, const Exponents& e) {
  const TransformedStats stats = stats_fast(walk, e.nu);
  acc.accumulate(stats, weight(stats, e));
}

namespace {

fs::path checkpoint_path(const fs::path& dir, std::size_t chain) {
  return dir / ("chain-" + std::to_string(chain) + ".ckpt");
}
fs::path chain_accumulator_path(const fs::path& dir, std::size_t chain) {
  return dir / ("chain-" + std::to_string(chain) + ".acc");
}

struct ChainJob {
  ChainConfig config;
  ChainState state;
  WeightedAccumulator acc;
  RunReport report;
  std::exception_ptr error;
};

void save_chain(const fs::path& dir, std::size_t k, const ChainState& state, const WeightedAccumulator& acc) {
  std::ostringstream acc_text;
  acc.write(acc_text, state.iteration);
  write_file_atomic(chain_accumulator_path(dir, k), acc_text.str());
  std::ostringstream ckpt;
  write_checkpoint(ckpt, state);
  write_file_atomic(checkpoint_path(dir, k), ckpt.str());
}

void restore_chain(const fs::path& dir, std::size_t k, ChainJob& job) {
  std::istringstream ckpt(read_file(checkpoint_path(dir, k)));
  job.state = read_checkpoint(ckpt);
  if (job.state.walk.steps() != job.config.steps) {
    throw std::runtime_error("resume: checkpoint of chain " + std::to_string(k) + " has the wrong N");
  }
  std::istringstream acc_text(read_file(chain_accumulator_path(dir, k)));
  std::uint64_t stamp = 0;
  job.acc = WeightedAccumulator::read(acc_text, &stamp);
  if (stamp != job.state.iteration) {
    throw std::runtime_error("resume: accumulator of chain " + std::to_string(k) +
                             " does not belong to its checkpoint");
  }
}

}  // namespace

RunSummary cmd_run(const RunConfig& config, const RunOptions& options) {
  config.validate();
  const fs::path dir = config.output_dir;
  fs::create_directories(dir);
  const std::string manifest = render_manifest(config);
  const fs::path manifest_path = dir / "manifest.txt";
  if (options.resume) {
    if (!fs::exists(manifest_path)) throw std::runtime_error("resume: no manifest in " + dir.string());
    if (read_file(manifest_path) != manifest) {
      throw std::runtime_error("resume: configuration differs from " + manifest_path.string());
    }
  } else {
    write_file_atomic(manifest_path, manifest);
    std::error_code ec;
    fs::remove(dir / "accumulator.txt", ec);
  }

  std::vector<ChainJob> jobs;
  jobs.reserve(config.chains);
  for (std::size_t k = 0; k < config.chains; ++k) {
    ChainJob job{config.chain_config(k), ChainState{}, WeightedAccumulator(config.block_size()), RunReport{}, nullptr};
    if (options.resume && fs::exists(checkpoint_path(dir, k))) {
      restore_chain(dir, k, job);
    } else {
      job.state = ChainState::fresh(job.config.steps, job.config.seed);
    }
    jobs.push_back(std::move(job));
  }

  std::mutex log_mutex;
  const auto log = [&](const std::string& msg) {
    if (!options.log) return;
    const std::lock_guard lock(log_mutex);
    *options.log << msg << '\n' << std::flush;
  };

  const auto work = [&](std::size_t k) {
    ChainJob& job = jobs[k];
    try {
      RunControls controls;
      controls.halt_at_iteration = options.halt_at_iteration;
      controls.stop = options.stop;
      controls.on_checkpoint = [&](const ChainState& s) { save_chain(dir, k, s, job.acc); };
      log("chain " + std::to_string(k) + ": starting at iteration " + std::to_string(job.state.iteration));
      job.report = run_chain(
          job.config, job.state, [&](const LatticeWalk& w) { accumulate_walk(job.acc, w); }, controls);
      log("chain " + std::to_string(k) + ": " + (job.report.completed ? "done" : "halted") + " at iteration " +
          std::to_string(job.report.iterations) + ", acceptance " + format_double(job.report.acceptance_fraction));
    } catch (...) {
      job.error = std::current_exception();
    }
  };

  if (jobs.size() == 1) {
    work(0);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(jobs.size());
    for (std::size_t k = 0; k < jobs.size(); ++k) threads.emplace_back(work, k);
  }
  for (const ChainJob& job : jobs) {
    if (job.error) std::rethrow_exception(job.error);
  }

  RunSummary summary;
  summary.completed = true;
  std::ostringstream report;
  report << "rng=" << Xoshiro256::kAlgorithm << '\n';
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const RunReport& r = jobs[k].report;
    summary.chains.push_back(r);
    summary.completed = summary.completed && r.completed;
    report << "chain=" << k << " seed=" << jobs[k].config.seed << " iterations=" << r.iterations
           << " samples=" << r.samples << " accepted=" << r.accepted << " proposals=" << r.proposals
           << " acceptance=" << format_double(r.acceptance_fraction) << " wall_seconds=" << format_double(r.wall_seconds)
           << " completed=" << (r.completed ? 1 : 0) << '\n';
  }
  write_file_atomic(dir / "run_report.txt", report.str());

  if (summary.completed) {
    WeightedAccumulator merged(config.block_size());
    for (const ChainJob& job : jobs) merged.merge(job.acc);
    std::ostringstream text;
    merged.write(text);
    summary.accumulator_path = dir / "accumulator.txt";
    write_file_atomic(summary.accumulator_path, text.str());
  }
  return summary;
}

AnalysisSummary analyze(const WeightedAccumulator& acc) {
  AnalysisSummary out;
  out.estimates = finalize(acc);
  const Estimates& est = out.estimates;

  std::vector<FactorTable> tables;
  for (const Statistic s : kStatistics) {
    tables.push_back(factor_table(s, acc.grid(s)));
    const CdfEstimate& cdf = est.cdf(s);
    double worst = 0.0;
    for (std::size_t k = 0; k < cdf.thresholds.size(); ++k) {
      worst = std::max(worst, std::abs(cdf.ecdf[k] - tables.back().factors[k].cdf()));
    }
    out.max_abs_diff[static_cast<std::size_t>(s)] = worst;
  }
  try {
    out.exponent_fit = fit_b_bbar(est.cdfs, tables, est.effective_samples);
  } catch (const std::exception& e) {
    out.warnings.push_back(std::string("exponent fit skipped: ") + e.what());
  }
  try {
    out.angular_fit = fit_angular_slope(est.angular, est.effective_samples);
  } catch (const std::exception& e) {
    out.warnings.push_back(std::string("angular fit skipped: ") + e.what());
  }
  return out;
}

AnalysisSummary cmd_analyze(const fs::path& accumulator, const fs::path& out_dir) {
  std::ifstream in(accumulator);
  if (!in) throw std::runtime_error("cannot open " + accumulator.string());
  const WeightedAccumulator acc = WeightedAccumulator::read(in);
  AnalysisSummary summary = analyze(acc);
  const Estimates& est = summary.estimates;

  std::vector<std::pair<fs::path, std::string>> files;
  for (const Statistic s : kStatistics) {
    const CdfEstimate& cdf = est.cdf(s);
    std::ostringstream os;
    os << "w,ecdf,stderr,exact_cdf,diff\n";
    for (std::size_t k = 0; k < cdf.thresholds.size(); ++k) {
      const double exact = exact_cdf(s, cdf.thresholds[k]);
      os << format_double(cdf.thresholds[k]) << ',' << format_double(cdf.ecdf[k]) << ','
         << format_double(cdf.std_error[k]) << ',' << format_double(exact) << ','
         << format_double(cdf.ecdf[k] - exact) << '\n';
    }
    files.emplace_back(out_dir / ("cdf_" + std::string(name(s)) + ".csv"), os.str());
  }
  {
    const AngularEstimate& a = est.angular;
    std::ostringstream os;
    os << "bin_lo,bin_mid,bin_hi,expectation,stderr\n";
    for (std::size_t k = 0; k < a.expectation.size(); ++k) {
      os << format_double(a.lo[k]) << ',' << format_double(a.mid[k]) << ',' << format_double(a.hi[k]) << ','
         << format_double(a.expectation[k]) << ',' << format_double(a.std_error[k]) << '\n';
    }
    files.emplace_back(out_dir / "angular.csv", os.str());
  }
  if (summary.exponent_fit) {
    const FitResult& f = *summary.exponent_fit;
    std::ostringstream os;
    os << "b,bbar,b_minus_5_8,bbar_minus_5_48,var_b,cov_b_bbar,var_bbar,rss,points_used,points_excluded\n"
       << format_double(f.coefficients(0)) << ',' << format_double(f.coefficients(1)) << ','
       << format_double(f.coefficients(0) - kConjectured.b.value()) << ','
       << format_double(f.coefficients(1) - kConjectured.bbar.value()) << ',' << format_double(f.covariance(0, 0))
       << ',' << format_double(f.covariance(0, 1)) << ',' << format_double(f.covariance(1, 1)) << ','
       << format_double(f.rss) << ',' << f.used << ',' << f.excluded << '\n';
    files.emplace_back(out_dir / "fit_exponents.csv", os.str());
  }
  if (summary.angular_fit) {
    const FitResult& f = *summary.angular_fit;
    const double target = (kConjectured.b - kConjectured.bbar).value();
    std::ostringstream os;
    os << "slope,intercept,slope_minus_25_48,var_slope,cov_slope_intercept,var_intercept,rss,bins_used,bins_excluded\n"
       << format_double(f.coefficients(1)) << ',' << format_double(f.coefficients(0)) << ','
       << format_double(f.coefficients(1) - target) << ',' << format_double(f.covariance(1, 1)) << ','
       << format_double(f.covariance(0, 1)) << ',' << format_double(f.covariance(0, 0)) << ','
       << format_double(f.rss) << ',' << f.used << ',' << f.excluded << '\n';
    files.emplace_back(out_dir / "fit_angular.csv", os.str());

    std::ostringstream plt;
    plt << "# log(sin(theta_mid)) log(expectation)\n";
    for (const auto& [x, y] : angular_fit_points(est.angular, est.effective_samples)) {
      plt << format_double(x) << ' ' << format_double(y) << '\n';
    }
    files.emplace_back(out_dir / "least_sq.plt", plt.str());
  }

  fs::create_directories(out_dir);
  for (const auto& [path, text] : files) write_file_atomic(path, text);
  return summary;
}

void cmd_exact(std::ostream& os) {
  os << "stat,w,d0,di,cdf\n";
  for (const Statistic s : kStatistics) {
    const FactorTable table = factor_table(s, default_grid(s));
    for (std::size_t k = 0; k < table.thresholds.size(); ++k) {
      const SleCdfFactors& f = table.factors[k];
      os << name(s) << ',' << format_double(table.thresholds[k]) << ',' << format_double(f.d0) << ','
         << format_double(f.di) << ',' << format_double(f.cdf()) << '\n';
    }
  }
}

std::size_t cmd_enumerate(std::size_t steps, std::ostream& os, bool count_only) {
  const std::vector<LatticeWalk> walks = enumerate_half_plane_saws(steps);
  os << "# N=" << steps << " count=" << walks.size() << '\n';
  if (!count_only) {
    for (const LatticeWalk& w : walks) {
      bool first = true;
      for (const Site s : w.sites()) {
        os << (first ? "" : " ") << s.x << ',' << s.y;
        first = false;
      }
      os << '\n';
    }
  }
  return walks.size();
}

}  // namespace sawsle
