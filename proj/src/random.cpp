#include <weave/error.h>
#include <weave/random.h>

#include <cmath>
#include <limits>

namespace weave
{
std::uint64_t mix64(std::uint64_t x)
{
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
}

std::uint64_t derive_seed(const std::uint64_t root, const std::uint64_t a, const std::uint64_t b)
{
        return mix64(mix64(mix64(root) ^ a) ^ b);
}

Rng::Rng(const std::uint64_t seed)
        : engine_(seed)
{
}

std::uint64_t Rng::next_u64()
{
        return engine_();
}

double Rng::uniform01()
{
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(const double low, const double high)
{
        return low + (high - low) * uniform01();
}

double Rng::gaussian()
{
        if (has_spare_)
        {
                has_spare_ = false;
                return spare_;
        }
        double u = 0;
        double v = 0;
        double s = 0;
        do
        {
                u = 2 * uniform01() - 1;
                v = 2 * uniform01() - 1;
                s = u * u + v * v;
        } while (s >= 1 || s == 0);
        const double factor = std::sqrt(-2 * std::log(s) / s);
        spare_ = v * factor;
        has_spare_ = true;
        return u * factor;
}

std::size_t Rng::uniform_index(const std::size_t n)
{
        require(n > 0, ErrorKind::parameter, "uniform_index needs n > 0");
        const std::uint64_t range = n;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max()
                                    - std::numeric_limits<std::uint64_t>::max() % range;
        std::uint64_t x = 0;
        do
        {
                x = engine_();
        } while (x >= limit);
        return static_cast<std::size_t>(x % range);
}
}
