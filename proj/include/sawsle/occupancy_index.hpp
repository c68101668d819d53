#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sawsle/lattice_walk.hpp"

namespace sawsle {

/// Map from lattice site to its index along a walk. Open addressing with
/// linear probing and backward-shift deletion; capacity is fixed at
/// construction (a power of two, at least four times the number of sites).
class OccupancyIndex {
 public:
  OccupancyIndex() = default;
  explicit OccupancyIndex(const LatticeWalk& walk);

  /// Clears the table and indexes every site of `walk`.
  void rebuild(const LatticeWalk& walk);

  std::optional<std::uint32_t> find(Site s) const {
    const std::uint64_t key = pack(s);
    for (std::size_t slot = home(key);; slot = (slot + 1) & mask_) {
      const Slot& e = slots_[slot];
      if (e.index == kEmpty) return std::nullopt;
      if (e.key == key) return e.index;
    }
  }

  bool contains(Site s) const { return find(s).has_value(); }

  /// Inserts or overwrites the entry for `s`.
  void insert(Site s, std::uint32_t index);
  /// Removes the entry for `s`; no-op if absent.
  void erase(Site s);

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return slots_.size(); }

 private:
  static constexpr std::uint32_t kEmpty = 0xffffffffu;
  struct Slot {
    std::uint64_t key = 0;
    std::uint32_t index = kEmpty;
  };

  std::size_t home(std::uint64_t key) const {
    // Fibonacci hashing; the high bits are the well-mixed ones.
    return static_cast<std::size_t>((key * 0x9E3779B97F4A7C15ull) >> shift_);
  }

  std::vector<Slot> slots_;
  std::size_t mask_ = 0;
  unsigned shift_ = 64;
  std::size_t size_ = 0;
};

}  // namespace sawsle
