#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sawsle {

struct Site {
  std::int32_t x = 0;
  std::int32_t y = 0;

  friend constexpr bool operator==(Site, Site) = default;
  friend constexpr Site operator+(Site a, Site b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Site operator-(Site a, Site b) { return {a.x - b.x, a.y - b.y}; }
};

/// Packs a site into one 64-bit key (used for hashing and ordering).
constexpr std::uint64_t pack(Site s) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(s.x)) << 32) |
         static_cast<std::uint32_t>(s.y);
}

/// An N-step nearest-neighbour path given by its N+1 sites. The type itself
/// does not enforce the walk invariants; use validate_walk().
class LatticeWalk {
 public:
  LatticeWalk() = default;
  explicit LatticeWalk(std::vector<Site> sites) : sites_(std::move(sites)) {}

  std::size_t steps() const { return sites_.empty() ? 0 : sites_.size() - 1; }
  std::span<const Site> sites() const { return sites_; }
  std::span<Site> mutable_sites() { return sites_; }
  const Site& operator[](std::size_t i) const { return sites_[i]; }
  Site& operator[](std::size_t i) { return sites_[i]; }
  const Site& endpoint() const { return sites_.back(); }

  friend bool operator==(const LatticeWalk&, const LatticeWalk&) = default;

 private:
  std::vector<Site> sites_;
};

/// True iff the walk starts at the origin, takes unit steps, never revisits
/// a site, and has y >= 1 at every site after the origin.
bool validate_walk(const LatticeWalk& walk);
bool validate_walk(std::span<const Site> sites);

/// The half-plane condition applied to one non-origin site. Kept separate so
/// the boundary convention lives in exactly one place.
constexpr bool in_open_half_plane(Site s) { return s.y >= 1; }

inline constexpr std::size_t kMaxEnumerationSteps = 12;

/// Every N-step walk accepted by validate_walk, each exactly once, in
/// depth-first order (up, right, left, down at each step).
/// Throws std::invalid_argument when N > kMaxEnumerationSteps.
std::vector<LatticeWalk> enumerate_half_plane_saws(std::size_t steps);

/// Straight vertical rod (0,0),(0,1),...,(0,N).
LatticeWalk initial_walk(std::size_t steps);

// Walk checkpoint text format:
//   sawsle-walk v1 N=<n>
//   <x> <y>        (N+1 lines)
void write_walk(std::ostream& os, const LatticeWalk& walk);
/// Reads the header and the N+1 coordinate lines; leaves the stream right
/// after the last coordinate line. Throws FormatError.
LatticeWalk read_walk(std::istream& is);

}  // namespace sawsle

template <>
struct std::hash<sawsle::Site> {
  std::size_t operator()(sawsle::Site s) const noexcept {
    return std::hash<std::uint64_t>{}(sawsle::pack(s));
  }
};
