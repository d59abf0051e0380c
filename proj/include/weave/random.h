#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace weave
{
// splitmix64 finalizer; bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x);

// Seed for an item addressed by (root, a, b). Independent of the order in
// which items are generated.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b);

/// Portable seeded generator.
///
/// std::mt19937_64 output is fixed by the standard, but the standard
/// distributions are not, so uniforms and Gaussians are derived here:
///  - uniform01: top 53 bits of one engine draw, in [0, 1);
///  - gaussian: Marsaglia polar method, the second variate of each accepted
///    pair is cached and returned by the next call;
///  - uniform_index: rejection sampling on the largest multiple of n.
class Rng
{
        std::mt19937_64 engine_;
        double spare_ = 0;
        bool has_spare_ = false;

public:
        explicit Rng(std::uint64_t seed);

        std::uint64_t next_u64();
        double uniform01();
        double uniform(double low, double high);
        double gaussian();
        std::size_t uniform_index(std::size_t n);
};

// Fisher-Yates, walking from the back.
template <typename T>
void shuffle(std::span<T> items, Rng& rng)
{
        for (std::size_t i = items.size(); i > 1; --i)
        {
                const std::size_t j = rng.uniform_index(i);
                std::swap(items[i - 1], items[j]);
        }
}
}
