#include "sawsle/estimators.hpp"

#include <charconv>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "sawsle/errors.hpp"

namespace sawsle {

namespace {

constexpr double kBinWidth = std::numbers::pi / static_cast<double>(kAngularBins);

std::array<ThresholdGrid, 4> default_grids() {
  return {default_grid(Statistic::kX), default_grid(Statistic::kY), default_grid(Statistic::kR),
          default_grid(Statistic::kS)};
}

}  // namespace

WeightedAccumulator::WeightedAccumulator(std::uint64_t block_size)
    : block_size_(block_size), grids_(default_grids()) {
  if (block_size_ == 0) throw std::invalid_argument("accumulator: block size must be positive");
}

Block WeightedAccumulator::make_block() const {
  Block b;
  for (std::size_t s = 0; s < 4; ++s) b.cells[s].assign(static_cast<std::size_t>(grids_[s].count), {});
  b.angular.assign(kAngularBins, {});
  return b;
}

void WeightedAccumulator::accumulate(const TransformedStats& stats, double weight) {
  if (!std::isfinite(weight) || !std::isfinite(stats.x_max) || !std::isfinite(stats.y_max) ||
      !std::isfinite(stats.r_max) || !std::isfinite(stats.s_max) || !std::isfinite(stats.theta)) {
    throw std::invalid_argument("accumulate: non-finite statistic or weight");
  }
  if (weight < 0.0) throw std::invalid_argument("accumulate: negative weight");
  if (!(stats.theta > 0.0 && stats.theta < std::numbers::pi)) {
    throw std::invalid_argument("accumulate: endpoint angle outside (0, pi)");
  }
  if (blocks_.empty() || blocks_.back().complete) blocks_.push_back(make_block());
  Block& b = blocks_.back();

  b.weight.add(weight);
  b.weight_sq.add(weight * weight);
  for (const Statistic s : kStatistics) {
    const auto idx = static_cast<std::size_t>(s);
    auto& cells = b.cells[idx];
    for (std::size_t k = grids_[idx].first_at_or_above(stats.value(s)); k < cells.size(); ++k) {
      cells[k].add(weight);
    }
  }
  const auto bin = std::min(static_cast<std::size_t>(stats.theta / kBinWidth), kAngularBins - 1);
  b.angular[bin].add(weight);

  if (++b.samples >= block_size_) b.complete = true;
}

void WeightedAccumulator::merge(const WeightedAccumulator& other) {
  if (&other == this) {
    const WeightedAccumulator copy = other;
    merge(copy);
    return;
  }
  if (other.block_size_ != block_size_) {
    throw std::invalid_argument("merge: block sizes differ");
  }
  if (other.grids_ != grids_) throw std::invalid_argument("merge: threshold grids differ");
  for (std::size_t k = 0; k < other.blocks_.size(); ++k) {
    if (k >= blocks_.size()) {
      blocks_.push_back(other.blocks_[k]);
      continue;
    }
    Block& dst = blocks_[k];
    const Block& src = other.blocks_[k];
    dst.samples += src.samples;
    dst.complete = dst.complete && src.complete;
    dst.weight.add(src.weight);
    dst.weight_sq.add(src.weight_sq);
    for (std::size_t s = 0; s < 4; ++s) {
      for (std::size_t i = 0; i < dst.cells[s].size(); ++i) dst.cells[s][i].add(src.cells[s][i]);
    }
    for (std::size_t i = 0; i < kAngularBins; ++i) dst.angular[i].add(src.angular[i]);
  }
}

WeightedAccumulator merge(WeightedAccumulator a, const WeightedAccumulator& b) {
  a.merge(b);
  return a;
}

std::uint64_t WeightedAccumulator::samples() const {
  std::uint64_t n = 0;
  for (const Block& b : blocks_) n += b.samples;
  return n;
}

std::size_t WeightedAccumulator::completed_blocks() const {
  std::size_t n = 0;
  for (const Block& b : blocks_) n += b.complete && b.samples > 0 ? 1 : 0;
  return n;
}

double WeightedAccumulator::total_weight() const {
  CompensatedSum t;
  for (const Block& b : blocks_) t.add(b.weight);
  return t.value();
}

double WeightedAccumulator::total_weight_sq() const {
  CompensatedSum t;
  for (const Block& b : blocks_) t.add(b.weight_sq);
  return t.value();
}

double WeightedAccumulator::cell(Statistic s, std::size_t k) const {
  CompensatedSum t;
  for (const Block& b : blocks_) t.add(b.cells[static_cast<std::size_t>(s)][k]);
  return t.value();
}

double WeightedAccumulator::angular_bin(std::size_t k) const {
  CompensatedSum t;
  for (const Block& b : blocks_) t.add(b.angular[k]);
  return t.value();
}

namespace {

// Per-block ratio numerator/denominator over completed blocks -> standard
// error of the mean of those ratios.
class BlockRatioError {
 public:
  explicit BlockRatioError(const std::vector<const Block*>& blocks) {
    for (const Block* b : blocks) denominators_.push_back(b->weight.value());
  }

  template <typename Numerator>
  double operator()(Numerator&& numerator) const {
    const std::size_t n = denominators_.size();
    if (n < 2) return std::numeric_limits<double>::quiet_NaN();
    double mean = 0.0;
    ratios_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      ratios_[i] = denominators_[i] > 0.0 ? numerator(i) / denominators_[i] : 0.0;
      mean += ratios_[i];
    }
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (const double r : ratios_) ss += (r - mean) * (r - mean);
    const double var = ss / static_cast<double>(n - 1);
    return std::sqrt(var / static_cast<double>(n));
  }

 private:
  std::vector<double> denominators_;
  mutable std::vector<double> ratios_;
};

}  // namespace

Estimates finalize(const WeightedAccumulator& acc) {
  Estimates out;
  out.samples = acc.samples();
  out.total_weight = acc.total_weight();
  if (!(out.total_weight > 0.0)) throw EmptyAccumulatorError("finalize: accumulator holds no weight");
  const double wsq = acc.total_weight_sq();
  out.effective_samples = out.total_weight * out.total_weight / wsq;

  std::vector<const Block*> complete;
  for (const Block& b : acc.blocks()) {
    if (b.complete && b.samples > 0 && b.weight.value() > 0.0) complete.push_back(&b);
  }
  out.error_blocks = complete.size();
  const BlockRatioError block_error(complete);

  for (const Statistic s : kStatistics) {
    const auto idx = static_cast<std::size_t>(s);
    const ThresholdGrid& grid = acc.grid(s);
    CdfEstimate& e = out.cdfs[idx];
    e.stat = s;
    const auto n = static_cast<std::size_t>(grid.count);
    e.thresholds.resize(n);
    e.ecdf.resize(n);
    e.std_error.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      e.thresholds[k] = grid.at(k);
      e.ecdf[k] = acc.cell(s, k) / out.total_weight;
      e.std_error[k] = block_error([&](std::size_t i) { return complete[i]->cells[idx][k].value(); });
    }
  }

  AngularEstimate& a = out.angular;
  a.lo.resize(kAngularBins);
  a.mid.resize(kAngularBins);
  a.hi.resize(kAngularBins);
  a.expectation.resize(kAngularBins);
  a.std_error.resize(kAngularBins);
  for (std::size_t k = 0; k < kAngularBins; ++k) {
    a.lo[k] = static_cast<double>(k) * kBinWidth;
    a.hi[k] = static_cast<double>(k + 1) * kBinWidth;
    a.mid[k] = (static_cast<double>(k) + 0.5) * kBinWidth;
    a.expectation[k] = acc.angular_bin(k) / out.total_weight;
    a.std_error[k] = block_error([&](std::size_t i) { return complete[i]->angular[k].value(); });
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialisation

namespace {

constexpr std::string_view kMagic = "sawsle-accumulator v1";

void put_double(std::ostream& os, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  os.write(buf, res.ptr - buf);
}

void put_sum(std::ostream& os, const CompensatedSum& s) {
  os << ' ';
  put_double(os, s.sum);
  os << ' ';
  put_double(os, s.comp);
}

void put_row(std::ostream& os, std::string_view label, const std::vector<CompensatedSum>& sums) {
  os << label;
  for (const auto& s : sums) put_sum(os, s);
  os << '\n';
}

std::string next_line(std::istream& is, std::string_view what) {
  std::string line;
  if (!std::getline(is, line)) throw FormatError("accumulator: unexpected end of file before " + std::string(what));
  return line;
}

std::string field(std::istream& is, std::string_view key) {
  const std::string line = next_line(is, key);
  const std::string prefix = std::string(key) + "=";
  if (line.rfind(prefix, 0) != 0) {
    throw FormatError("accumulator: expected '" + prefix + "', got '" + line.substr(0, 40) + "'");
  }
  return line.substr(prefix.size());
}

std::uint64_t to_u64(std::string_view text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw FormatError("accumulator: bad integer '" + std::string(text) + "'");
  }
  return v;
}

class Tokens {
 public:
  explicit Tokens(std::string line) : line_(std::move(line)) {}

  std::string_view word() {
    while (pos_ < line_.size() && line_[pos_] == ' ') ++pos_;
    const std::size_t start = pos_;
    while (pos_ < line_.size() && line_[pos_] != ' ') ++pos_;
    if (start == pos_) throw FormatError("accumulator: row too short");
    return std::string_view(line_).substr(start, pos_ - start);
  }

  double number() {
    const std::string_view w = word();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc{} || ptr != w.data() + w.size()) {
      throw FormatError("accumulator: bad number '" + std::string(w) + "'");
    }
    return v;
  }

  CompensatedSum sum() {
    CompensatedSum s;
    s.sum = number();
    s.comp = number();
    return s;
  }

  void expect_end() {
    while (pos_ < line_.size() && line_[pos_] == ' ') ++pos_;
    if (pos_ != line_.size()) throw FormatError("accumulator: row too long");
  }

 private:
  std::string line_;
  std::size_t pos_ = 0;
};

void read_row(std::istream& is, std::string_view label, std::vector<CompensatedSum>& sums) {
  Tokens t(next_line(is, label));
  if (t.word() != label) throw FormatError("accumulator: expected row '" + std::string(label) + "'");
  for (auto& s : sums) s = t.sum();
  t.expect_end();
}

std::string grids_text(const std::array<ThresholdGrid, 4>& grids) {
  std::ostringstream os;
  for (std::size_t s = 0; s < 4; ++s) {
    if (s) os << ',';
    os << name(kStatistics[s]) << ':' << grids[s].first_cent << ':' << grids[s].count;
  }
  return os.str();
}

}  // namespace

void WeightedAccumulator::write(std::ostream& os, std::uint64_t stamp) const {
  os << kMagic << '\n'
     << "block_size=" << block_size_ << '\n'
     << "grids=" << grids_text(grids_) << '\n'
     << "angular_bins=" << kAngularBins << '\n'
     << "stamp=" << stamp << '\n'
     << "blocks=" << blocks_.size() << '\n';
  for (const Block& b : blocks_) {
    os << "block samples=" << b.samples << " complete=" << (b.complete ? 1 : 0) << '\n';
    os << "weight";
    put_sum(os, b.weight);
    os << '\n' << "weight_sq";
    put_sum(os, b.weight_sq);
    os << '\n';
    for (std::size_t s = 0; s < 4; ++s) put_row(os, name(kStatistics[s]), b.cells[s]);
    put_row(os, "A", b.angular);
  }
  os << "end\n";
}

WeightedAccumulator WeightedAccumulator::read(std::istream& is, std::uint64_t* stamp) {
  const std::string magic = next_line(is, "header");
  if (magic.rfind("sawsle-accumulator ", 0) != 0) throw FormatError("accumulator: not an accumulator file");
  if (magic != kMagic) throw FormatError("accumulator: unsupported version '" + magic + "'");

  WeightedAccumulator acc(to_u64(field(is, "block_size")));
  if (field(is, "grids") != grids_text(acc.grids_)) throw FormatError("accumulator: grid mismatch");
  if (to_u64(field(is, "angular_bins")) != kAngularBins) {
    throw FormatError("accumulator: angular bin count mismatch");
  }
  const std::uint64_t st = to_u64(field(is, "stamp"));
  if (stamp) *stamp = st;
  const std::uint64_t nblocks = to_u64(field(is, "blocks"));
  for (std::uint64_t k = 0; k < nblocks; ++k) {
    Block b = acc.make_block();
    Tokens head(next_line(is, "block"));
    if (head.word() != "block") throw FormatError("accumulator: expected block header");
    const std::string_view samples = head.word();
    const std::string_view complete = head.word();
    head.expect_end();
    if (samples.rfind("samples=", 0) != 0 || complete.rfind("complete=", 0) != 0) {
      throw FormatError("accumulator: malformed block header");
    }
    b.samples = to_u64(samples.substr(8));
    const std::uint64_t flag = to_u64(complete.substr(9));
    if (flag > 1) throw FormatError("accumulator: complete flag must be 0 or 1");
    b.complete = flag == 1;
    for (const std::string_view key : {"weight", "weight_sq"}) {
      Tokens t(next_line(is, key));
      if (t.word() != key) throw FormatError("accumulator: expected '" + std::string(key) + "' row");
      (key == "weight" ? b.weight : b.weight_sq) = t.sum();
      t.expect_end();
    }
    for (std::size_t s = 0; s < 4; ++s) read_row(is, name(kStatistics[s]), b.cells[s]);
    read_row(is, "A", b.angular);
    acc.blocks_.push_back(std::move(b));
  }
  if (next_line(is, "end") != "end") throw FormatError("accumulator: missing end marker");
  return acc;
}

}  // namespace sawsle
