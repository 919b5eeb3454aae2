#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace romforge::util {

/// FNV-1a 64-bit hash of a byte string. Used to stamp run manifests into
/// output files so results can be traced to the exact configuration.
constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const char c : s) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hash_hex(std::string_view s);

} // namespace romforge::util
