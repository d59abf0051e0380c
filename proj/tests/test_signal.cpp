#include "oracles.h"

#include <weave/error.h>
#include <weave/random.h>
#include <weave/signal.h>

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <vector>

using namespace weave;

namespace
{
SignalParams sine(double hz, double sigma, std::uint64_t seed = 0)
{
        SignalParams p;
        p.frequency = 2 * std::numbers::pi * hz;
        p.noise_std = sigma;
        p.seed = seed;
        return p;
}

FrequencySet omega1()
{
        return {"omega1", {5, 5.5, 6}, FrequencyUnit::hertz};
}
}

TEST_SUITE("signalgen")
{
TEST_CASE("rng is reproducible and seed sensitive")
{
        Rng a(7);
        Rng b(7);
        Rng c(8);
        bool differs = false;
        for (int i = 0; i < 100; ++i)
        {
                const auto x = a.next_u64();
                CHECK(x == b.next_u64());
                differs = differs || x != c.next_u64();
        }
        CHECK(differs);
}

TEST_CASE("uniform draws stay in range")
{
        Rng rng(3);
        for (int i = 0; i < 10000; ++i)
        {
                const double u = rng.uniform01();
                CHECK(u >= 0.0);
                CHECK(u < 1.0);
                CHECK(rng.uniform_index(7) < 7u);
        }
}

TEST_CASE("derive_seed separates coordinates")
{
        std::set<std::uint64_t> seen;
        for (std::uint64_t a = 0; a < 20; ++a)
        {
                for (std::uint64_t b = 0; b < 20; ++b)
                {
                        seen.insert(derive_seed(1, a, b));
                }
        }
        CHECK(seen.size() == 400);
        CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
}

TEST_CASE("shuffle permutes")
{
        std::vector<int> v(50);
        for (int i = 0; i < 50; ++i)
        {
                v[i] = i;
        }
        Rng rng(11);
        shuffle(std::span<int>(v), rng);
        std::vector<int> sorted = v;
        std::sort(sorted.begin(), sorted.end());
        for (int i = 0; i < 50; ++i)
        {
                CHECK(sorted[i] == i);
        }
}

TEST_CASE("sample count includes both endpoints")
{
        CHECK(sample_count(1.0, 0.01) == 101);
        CHECK(sample_count(0.75, 0.01) == 76);
        CHECK(sample_count(0.25, 0.01) == 26);
        CHECK(sample_count(0.015, 0.01) == 2);
        CHECK(sample_count(0.01, 0.01) == 2);
}

TEST_CASE("noiseless sine hits its quarter period")
{
        const Signal s = generate_signal(sine(5, 0));
        REQUIRE(s.samples.size() == 101);
        CHECK(s.samples[0] == 0.0);
        CHECK(s.samples[5] == doctest::Approx(1.0).epsilon(1e-15));
        for (std::size_t k = 0; k < s.samples.size(); ++k)
        {
                CHECK(s.samples[k] == doctest::Approx(std::sin(0.1 * std::numbers::pi * static_cast<double>(k))).epsilon(1e-12));
        }
}

TEST_CASE("amplitude and phase enter the clean signal")
{
        SignalParams p = sine(5, 0);
        p.amplitude = 2.5;
        p.phase = 0.3;
        const Signal s = generate_signal(p);
        CHECK(s.samples[3] == doctest::Approx(2.5 * std::sin(p.frequency * 0.03 + 0.3)));
}

TEST_CASE("identical params give bit-identical samples")
{
        const Signal a = generate_signal(sine(5, 0.3, 99));
        const Signal b = generate_signal(sine(5, 0.3, 99));
        const Signal c = generate_signal(sine(5, 0.3, 100));
        CHECK(a.samples == b.samples);
        CHECK(a.samples != c.samples);
}

TEST_CASE("frozen noisy fixture")
{
        // A = 1, f = 5 Hz, sigma = 0.3, seed 42; mt19937_64 with polar Gaussians.
        const std::vector<double> expected{
                0.388146126981881,
                0.52051347430120531,
                0.70717847114760968,
                0.636788552358869,
                1.286623032032397,
                0.42799439655086036,
                0.50338241517842652,
                0.591780114802265,
        };
        const Signal s = generate_signal(sine(5, 0.3, 42));
        for (std::size_t k = 0; k < expected.size(); ++k)
        {
                CHECK(s.samples[k] == expected[k]);
        }
}

TEST_CASE("noise statistics")
{
        for (const double sigma : {0.1, 0.3})
        {
                double sum = 0;
                double sum_sq = 0;
                std::size_t n = 0;
                for (std::uint64_t seed = 0; seed < 1000; ++seed)
                {
                        const SignalParams p = sine(5, sigma, seed);
                        const Signal s = generate_signal(p);
                        for (std::size_t k = 0; k < s.samples.size(); ++k)
                        {
                                const double v = s.samples[k] - std::sin(p.frequency * static_cast<double>(k) * p.dt);
                                sum += v;
                                sum_sq += v * v;
                                ++n;
                        }
                }
                REQUIRE(n >= 100000);
                const double mean = sum / static_cast<double>(n);
                const double var = sum_sq / static_cast<double>(n) - mean * mean;
                CHECK(std::abs(mean) <= 4 * sigma / std::sqrt(static_cast<double>(n)));
                CHECK(std::abs(var - sigma * sigma) <= 0.05 * sigma * sigma);
        }
}

TEST_CASE("invalid signal params are rejected")
{
        auto kind_of = [](SignalParams p)
        {
                try
                {
                        generate_signal(p);
                }
                catch (const Error& e)
                {
                        return e.kind();
                }
                return ErrorKind::config;
        };
        SignalParams p = sine(5, 0);
        p.duration = 0;
        CHECK(kind_of(p) == ErrorKind::parameter);
        p = sine(5, 0);
        p.dt = -0.01;
        CHECK(kind_of(p) == ErrorKind::parameter);
        p = sine(5, 0);
        p.dt = 2;
        CHECK(kind_of(p) == ErrorKind::parameter);
        p = sine(5, -0.1);
        CHECK(kind_of(p) == ErrorKind::parameter);
        p = sine(5, 0);
        p.frequency = 0;
        CHECK(kind_of(p) == ErrorKind::parameter);
}

TEST_CASE("frequency units")
{
        const FrequencySet hz = omega1();
        CHECK(hz.angular(0) == 31.41592653589793);
        FrequencySet rad = hz;
        rad.unit = FrequencyUnit::radians_per_second;
        CHECK(rad.angular(1) == 5.5);
        CHECK(parse_frequency_unit("hz") == FrequencyUnit::hertz);
        CHECK(parse_frequency_unit(to_string(FrequencyUnit::radians_per_second)) == FrequencyUnit::radians_per_second);
        CHECK_THROWS_AS(parse_frequency_unit("rpm"), Error);
}

TEST_CASE("frequency sets must be increasing and plural")
{
        CHECK_THROWS_AS(validate(FrequencySet{"x", {5}, FrequencyUnit::hertz}), Error);
        CHECK_THROWS_AS(validate(FrequencySet{"x", {5, 5}, FrequencyUnit::hertz}), Error);
        CHECK_THROWS_AS(validate(FrequencySet{"x", {-1, 5}, FrequencyUnit::hertz}), Error);
        CHECK_NOTHROW(validate(omega1()));
}

TEST_CASE("dataset layout")
{
        const LabeledDataset ds = generate_dataset(omega1(), 3000, sine(1, 0.3), 5);
        CHECK(ds.size() == 9000);
        CHECK(ds.input_length() == 101);
        CHECK(ds.labels[0] == 0);
        CHECK(ds.labels[8999] == 2);
        CHECK(ds.signals[3000].params.frequency == doctest::Approx(2 * std::numbers::pi * 5.5));
        CHECK(ds.signals[3000].params.phase == 0.0);
        CHECK(ds.signals[3000].params.seed == derive_seed(5, 1, 0));

        const LabeledDataset tiny = generate_dataset({"pair", {1, 2}, FrequencyUnit::hertz}, 1, sine(1, 0), 0);
        CHECK(tiny.labels == std::vector<std::size_t>{0, 1});
}

TEST_CASE("dataset generation is deterministic")
{
        const LabeledDataset a = generate_dataset(omega1(), 20, sine(1, 0.3), 5);
        const LabeledDataset b = generate_dataset(omega1(), 20, sine(1, 0.3), 5);
        for (std::size_t i = 0; i < a.size(); ++i)
        {
                CHECK(a.signals[i].samples == b.signals[i].samples);
        }
}

TEST_CASE("dataset generation rejects zero per class")
{
        CHECK_THROWS_AS(generate_dataset(omega1(), 0, sine(1, 0.3), 5), Error);
}

TEST_CASE("noiseless labels are recoverable by a DFT peak")
{
        SignalParams base = sine(1, 0);
        base.duration = 20;
        const FrequencySet set = omega1();
        const LabeledDataset ds = generate_dataset(set, 2, base, 0);
        const double n = static_cast<double>(ds.input_length());
        for (std::size_t i = 0; i < ds.size(); ++i)
        {
                const double peak_hz = static_cast<double>(oracle::dft_peak(ds.signals[i].samples)) / (n * base.dt);
                std::size_t nearest = 0;
                for (std::size_t c = 1; c < set.size(); ++c)
                {
                        if (std::abs(set.frequencies[c] - peak_hz) < std::abs(set.frequencies[nearest] - peak_hz))
                        {
                                nearest = c;
                        }
                }
                CHECK(nearest == ds.labels[i]);
        }
}

TEST_CASE("stratified split")
{
        const LabeledDataset ds = generate_dataset(omega1(), 3000, sine(1, 0.1), 1);
        const DatasetSplit split = split_dataset(ds, 8000, 2);
        CHECK(split.train.size() == 8000);
        CHECK(split.test.size() == 1000);
        std::array<std::size_t, 3> counts{};
        for (const auto label : split.train.labels)
        {
                ++counts[label];
        }
        for (const auto c : counts)
        {
                CHECK(c >= 2666);
                CHECK(c <= 2667);
        }

        // Disjoint and exhaustive, identified by per-signal seeds.
        std::multiset<std::uint64_t> all;
        for (const auto* part : {&split.train, &split.test})
        {
                for (const auto& s : part->signals)
                {
                        all.insert(s.params.seed);
                }
        }
        CHECK(all.size() == 9000);
        CHECK(std::set<std::uint64_t>(all.begin(), all.end()).size() == 9000);

        // Shuffled: the training part does not keep class order.
        CHECK(!std::is_sorted(split.train.labels.begin(), split.train.labels.end()));

        const DatasetSplit again = split_dataset(ds, 8000, 2);
        CHECK(again.train.labels == split.train.labels);
        CHECK(again.test.signals[0].samples == split.test.signals[0].samples);
}

TEST_CASE("minimal split and range errors")
{
        const LabeledDataset ds = generate_dataset({"pair", {1, 2}, FrequencyUnit::hertz}, 1, sine(1, 0), 0);
        const DatasetSplit split = split_dataset(ds, 1, 0);
        CHECK(split.train.size() == 1);
        CHECK(split.test.size() == 1);
        CHECK(split.train.labels[0] != split.test.labels[0]);
        CHECK_THROWS_AS(split_dataset(ds, 0, 0), Error);
        CHECK_THROWS_AS(split_dataset(ds, 2, 0), Error);
}

TEST_CASE("dataset csv round trips exactly")
{
        const LabeledDataset ds = generate_dataset(omega1(), 4, sine(1, 0.3), 9);
        std::stringstream buffer;
        write_dataset_csv(ds, buffer);
        const std::string text = buffer.str();
        CHECK(text.find("label,freq_hz,sigma,dt,s0,s1,") != std::string::npos);

        const LabeledDataset back = read_dataset_csv(buffer);
        REQUIRE(back.size() == ds.size());
        CHECK(back.set.frequencies == ds.set.frequencies);
        CHECK(back.set.unit == ds.set.unit);
        for (std::size_t i = 0; i < ds.size(); ++i)
        {
                CHECK(back.labels[i] == ds.labels[i]);
                CHECK(back.signals[i].samples == ds.signals[i].samples);
                CHECK(back.signals[i].params.frequency == ds.signals[i].params.frequency);
        }
}

TEST_CASE("malformed dataset csv is a data error")
{
        std::stringstream bad("label,freq_hz,sigma,dt,s0\n0,5,0.1,0.01,abc\n");
        try
        {
                read_dataset_csv(bad);
                FAIL("expected an error");
        }
        catch (const Error& e)
        {
                CHECK(e.kind() == ErrorKind::data);
        }
        CHECK_THROWS_AS(load_dataset("/nonexistent/path.csv"), Error);
}
}
