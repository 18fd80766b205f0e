#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace dlite {

// FNV-1a, stable across platforms; used for cache keys and artifact ids.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex_digest(std::uint64_t h) {
  static const char* d = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = d[h & 0xf];
    h >>= 4;
  }
  return out;
}

inline std::string hex_digest(std::string_view s) { return hex_digest(fnv1a(s)); }

}  // namespace dlite
