#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace ontocrawl {

// 64-bit FNV-1a. Stable across platforms and runs, unlike std::hash.
class Fnv1a64 {
 public:
  Fnv1a64& update(std::string_view bytes) noexcept {
    for (unsigned char c : bytes) {
      state_ ^= c;
      state_ *= kPrime;
    }
    return *this;
  }

  // Feeds a field separator so ("ab","c") and ("a","bc") hash differently.
  Fnv1a64& field(std::string_view bytes) noexcept {
    update(bytes);
    const char sep = '\x1f';
    return update(std::string_view(&sep, 1));
  }

  std::uint64_t digest() const noexcept { return state_; }

  std::string hex() const;

 private:
  static constexpr std::uint64_t kOffset = 0xcbf29ce484222325ULL;
  static constexpr std::uint64_t kPrime = 0x100000001b3ULL;
  std::uint64_t state_ = kOffset;
};

inline std::string Fnv1a64::hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  std::uint64_t v = state_;
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[v & 0xF];
    v >>= 4;
  }
  return out;
}

}  // namespace ontocrawl
