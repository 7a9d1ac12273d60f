#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace zeroone {

// Seeded substreams: every consumer of randomness derives its own generator
// from (master seed, purpose tag), so adding a consumer never shifts the
// draws of existing ones. Votes differ only by master seed.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t tag_hash(std::string_view tag) {
    std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::mt19937_64 substream(std::uint64_t master_seed, std::string_view tag) {
    return std::mt19937_64{mix64(master_seed ^ mix64(tag_hash(tag)))};
}

inline std::mt19937_64 substream(std::uint64_t master_seed, std::string_view tag,
                                 std::uint64_t index) {
    return std::mt19937_64{mix64(mix64(master_seed ^ mix64(tag_hash(tag))) + index)};
}

// Child master seed for a nested component that derives its own substreams.
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view tag,
                                 std::uint64_t index) {
    return mix64(mix64(master_seed ^ mix64(tag_hash(tag))) + index);
}

}  // namespace zeroone
