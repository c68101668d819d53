#include "sawsle/rng.hpp"

#include <charconv>
#include <cstdio>

#include "sawsle/errors.hpp"

namespace sawsle {

void Xoshiro256::jump() {
  static constexpr std::uint64_t kJump[] = {0x180ec6d33cfd0abaull, 0xd5a61266f0c9392cull,
                                            0xa9582618e03fc9aaull, 0x39abdc4529b1661cull};
  std::array<std::uint64_t, 4> acc{};
  for (const std::uint64_t word : kJump) {
    for (int bit = 0; bit < 64; ++bit) {
      if (word & (std::uint64_t{1} << bit)) {
        for (int i = 0; i < 4; ++i) acc[i] ^= s_[i];
      }
      (*this)();
    }
  }
  s_ = acc;
}

std::string Xoshiro256::state_hex() const {
  std::string out;
  out.reserve(64);
  char buf[17];
  for (const std::uint64_t w : s_) {
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(w));
    out += buf;
  }
  return out;
}

void Xoshiro256::set_state_hex(std::string_view hex) {
  if (hex.size() != 64) throw FormatError("rng state: expected 64 hex digits");
  std::array<std::uint64_t, 4> next{};
  for (std::size_t i = 0; i < 4; ++i) {
    const char* first = hex.data() + 16 * i;
    const auto [ptr, ec] = std::from_chars(first, first + 16, next[i], 16);
    if (ec != std::errc{} || ptr != first + 16) throw FormatError("rng state: bad hex digits");
  }
  if (next == std::array<std::uint64_t, 4>{}) throw FormatError("rng state: all-zero state");
  s_ = next;
}

std::uint64_t derive_chain_seed(std::uint64_t master_seed, std::size_t index) {
  std::uint64_t sm = master_seed;
  std::uint64_t seed = 0;
  for (std::size_t i = 0; i <= index; ++i) seed = splitmix64(sm);
  return seed;
}

}  // namespace sawsle
