#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace argrank {

// Deterministic, platform-independent randomness. std::shuffle and the
// std <random> distributions are implementation-defined, so everything
// that must replay byte-identically goes through these primitives.

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view bytes);

// Counter-based generator: the state is a pure function of (seed, key),
// successive values come from incrementing an internal counter. Replayable
// from any point, safe to use from parallel workers.
class KeyedRng {
public:
    KeyedRng(std::uint64_t seed, std::string_view key);

    std::uint64_t next_u64();
    // Uniform in [0, 1), 53-bit resolution.
    double next_unit();
    // Uniform in [0, bound) without modulo bias.
    std::uint64_t next_below(std::uint64_t bound);
    // Standard normal via Box-Muller.
    double next_normal();

private:
    std::uint64_t state_;
    std::uint64_t counter_ = 0;
    bool have_spare_normal_ = false;
    double spare_normal_ = 0.0;
};

// Fisher-Yates with KeyedRng; deterministic across platforms.
template <typename T>
void deterministic_shuffle(std::vector<T>& items, std::uint64_t seed,
                           std::string_view key) {
    KeyedRng rng(seed, key);
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
        using std::swap;
        swap(items[i - 1], items[j]);
    }
}

}  // namespace argrank
