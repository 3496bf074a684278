#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace diachron {

// 64-bit FNV-1a, used for corpus and output fingerprints. Not cryptographic.
class Fnv1a {
 public:
  void update(std::string_view bytes) {
    for (unsigned char c : bytes) {
      state_ ^= c;
      state_ *= 0x100000001b3ULL;
    }
  }
  void update(std::uint64_t value) {
    for (int i = 0; i < 8; ++i) {
      state_ ^= (value >> (8 * i)) & 0xffU;
      state_ *= 0x100000001b3ULL;
    }
  }
  // Length-prefixed so that ("ab","c") and ("a","bc") hash differently.
  void field(std::string_view bytes) {
    update(static_cast<std::uint64_t>(bytes.size()));
    update(bytes);
  }
  std::uint64_t digest() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::string hex64(std::uint64_t value);

// First 8 hex digits of the digest.
inline std::string short_fingerprint(std::uint64_t value) { return hex64(value).substr(0, 8); }

}  // namespace diachron
