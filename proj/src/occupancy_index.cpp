#include "sawsle/occupancy_index.hpp"

#include <bit>
#include <stdexcept>

namespace sawsle {

OccupancyIndex::OccupancyIndex(const LatticeWalk& walk) { rebuild(walk); }

void OccupancyIndex::rebuild(const LatticeWalk& walk) {
  const std::size_t n = walk.sites().size();
  const std::size_t cap = std::bit_ceil(std::max<std::size_t>(16, 4 * n));
  if (slots_.size() != cap) {
    slots_.assign(cap, Slot{});
  } else {
    std::fill(slots_.begin(), slots_.end(), Slot{});
  }
  mask_ = cap - 1;
  shift_ = 64u - static_cast<unsigned>(std::countr_zero(cap));
  size_ = 0;
  for (std::size_t i = 0; i < n; ++i) insert(walk[i], static_cast<std::uint32_t>(i));
}

void OccupancyIndex::insert(Site s, std::uint32_t index) {
  const std::uint64_t key = pack(s);
  for (std::size_t slot = home(key);; slot = (slot + 1) & mask_) {
    Slot& e = slots_[slot];
    if (e.index == kEmpty) {
      if (2 * (size_ + 1) > slots_.size()) throw std::length_error("OccupancyIndex: table full");
      e.key = key;
      e.index = index;
      ++size_;
      return;
    }
    if (e.key == key) {
      e.index = index;
      return;
    }
  }
}

void OccupancyIndex::erase(Site s) {
  const std::uint64_t key = pack(s);
  std::size_t hole = home(key);
  for (;; hole = (hole + 1) & mask_) {
    if (slots_[hole].index == kEmpty) return;
    if (slots_[hole].key == key) break;
  }
  // Backward-shift: pull later entries of the probe run into the hole when
  // their home slot does not lie cyclically in (hole, slot].
  std::size_t slot = hole;
  for (;;) {
    slot = (slot + 1) & mask_;
    Slot& e = slots_[slot];
    if (e.index == kEmpty) break;
    const std::size_t h = home(e.key);
    const bool stays = hole <= slot ? (hole < h && h <= slot) : (hole < h || h <= slot);
    if (stays) continue;
    slots_[hole] = e;
    hole = slot;
  }
  slots_[hole] = Slot{};
  --size_;
}

}  // namespace sawsle
