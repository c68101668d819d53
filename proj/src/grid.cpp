#include "sawsle/grid.hpp"

#include <algorithm>
#include <cmath>

namespace sawsle {

std::optional<Statistic> parse_statistic(std::string_view text) {
  for (const Statistic s : kStatistics) {
    if (text == name(s)) return s;
  }
  return std::nullopt;
}

std::size_t ThresholdGrid::first_at_or_above(double value) const {
  const auto n = static_cast<std::size_t>(count);
  if (!(value > front())) return 0;  // also maps NaN to 0
  if (value > back()) return n;
  // Estimate from the cent index, then correct against the exact thresholds.
  const double guess = std::ceil(value * 100.0) - first_cent;
  auto k = static_cast<std::size_t>(std::clamp(guess, 0.0, static_cast<double>(n - 1)));
  while (k > 0 && at(k - 1) >= value) --k;
  while (k < n && at(k) < value) ++k;
  return k;
}

}  // namespace sawsle
