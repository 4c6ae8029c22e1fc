#pragma once

#include <cstdint>
#include <cstring>
#include <string_view>

// FNV-1a: tiny deterministic non-cryptographic hash used for scenario and
// trace fingerprints (reproducibility checks, CSV manifest comments).

namespace sawhe {

inline constexpr std::uint64_t fnv1a_seed = 14695981039346656037ull;

inline std::uint64_t fnv1a_append(std::uint64_t h, const void* data,
                                  std::size_t len) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t fnv1a(std::string_view s) {
    return fnv1a_append(fnv1a_seed, s.data(), s.size());
}

inline std::uint64_t fnv1a_append(std::uint64_t h, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    return fnv1a_append(h, &bits, sizeof bits);
}

}  // namespace sawhe
