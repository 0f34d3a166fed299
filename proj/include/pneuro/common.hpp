#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>

namespace pneuro {

using Word32 = std::uint32_t;

// All randomness in a run flows from one 64-bit master seed. Substreams are
// derived as mix(master, label, index) so that adding or reordering parallel
// work never shifts another stream.
constexpr std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                                    std::uint64_t index = 0) {
    std::uint64_t x = master ^ fnv1a64(label) ^ (index * 0xD1B54A32D192ED03ULL);
    return splitmix64(x);
}

// Nonzero 32-bit substream seed (LFSR states must not be zero).
constexpr Word32 derive_seed32(std::uint64_t master, std::string_view label,
                               std::uint64_t index = 0) {
    std::uint64_t s = derive_seed(master, label, index);
    Word32 w = static_cast<Word32>(s ^ (s >> 32));
    return w == 0 ? 0x1u : w;
}

}  // namespace pneuro
