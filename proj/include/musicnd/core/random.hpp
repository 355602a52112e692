// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace musicnd {

using Rng = std::mt19937_64;

/// splitmix64 finaliser; used to derive independent per-trial seeds.
inline std::uint64_t mix_seed(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for a trial identified by (master, path...). Independent of evaluation order.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path)
{
    std::uint64_t h = mix_seed(master);
    for (auto p : path) h = mix_seed(h ^ mix_seed(p + 0x632be59bd9b4e019ULL));
    return h;
}

/// Stable 64-bit hash of a label (FNV-1a), for folding scenario names into seeds.
inline std::uint64_t label_hash(std::string_view s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace musicnd
