#pragma once

#include <cstdint>

namespace gsfde::detail {

inline constexpr std::uint64_t kJumpStream = 0x6a09e667f3bcc909ULL;
inline constexpr std::uint64_t kControlStream = 0xbb67ae8584caa73bULL;

// splitmix64 finalizer
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Independent engine seed for a secondary stream of the same path.
inline constexpr std::uint64_t stream_seed(std::uint64_t path_seed, std::uint64_t stream) {
  return mix64(path_seed ^ stream);
}

}  // namespace gsfde::detail
