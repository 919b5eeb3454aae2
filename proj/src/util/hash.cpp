#include "romforge/util/hash.hpp"

#include <array>
#include <cstdio>

namespace romforge::util {

std::string hash_hex(std::string_view s) {
    std::array<char, 17> buf{};
    std::snprintf(buf.data(), buf.size(), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(s)));
    return std::string(buf.data());
}

} // namespace romforge::util
