#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace sawsle {

/// Excursion statistics of a curve from 0 to i.
enum class Statistic { kX, kY, kR, kS };

inline constexpr std::array<Statistic, 4> kStatistics = {Statistic::kX, Statistic::kY, Statistic::kR,
                                                          Statistic::kS};

constexpr std::string_view name(Statistic s) {
  switch (s) {
    case Statistic::kX: return "X";
    case Statistic::kY: return "Y";
    case Statistic::kR: return "R";
    case Statistic::kS: return "S";
  }
  return "?";
}

std::optional<Statistic> parse_statistic(std::string_view text);

/// Thresholds w_k = (first_cent + k) / 100 for k in [0, count).
struct ThresholdGrid {
  int first_cent = 0;
  int count = 0;

  constexpr double at(std::size_t k) const {
    return static_cast<double>(first_cent + static_cast<int>(k)) / 100.0;
  }
  constexpr double front() const { return at(0); }
  constexpr double back() const { return at(static_cast<std::size_t>(count - 1)); }

  /// Smallest k with value <= at(k), or count if value exceeds every
  /// threshold.
  std::size_t first_at_or_above(double value) const;

  friend constexpr bool operator==(const ThresholdGrid&, const ThresholdGrid&) = default;
};

/// X on 0.00..5.00, the others on 1.00..5.00, all in steps of 0.01.
constexpr ThresholdGrid default_grid(Statistic s) {
  return s == Statistic::kX ? ThresholdGrid{0, 501} : ThresholdGrid{100, 401};
}

inline constexpr std::size_t kAngularBins = 1800;

}  // namespace sawsle
