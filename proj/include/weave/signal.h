#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace weave
{
/// Parameters of one noisy sine measurement sequence
/// z_k = amplitude * sin(frequency * k * dt + phase) + v_k, v_k ~ N(0, noise_std^2).
struct SignalParams
{
        double amplitude = 1;  // m
        double frequency = 1;  // rad/s
        double phase = 0;      // rad
        double noise_std = 0;  // m
        double duration = 1;   // s
        double dt = 0.01;      // s
        std::uint64_t seed = 0;
};

void validate(const SignalParams& params);

// Samples at t = 0, dt, ..., including t = duration, so 1 s at 0.01 s gives
// 101 samples. Durations that are a whole number of periods up to rounding
// error (0.75 / 0.01 = 74.999...) are snapped to the nearest integer.
std::size_t sample_count(double duration, double dt);

struct Signal
{
        std::vector<double> samples;
        SignalParams params;
};

/// Deterministic in params: the noise sequence is drawn from Rng(params.seed)
/// with the polar Gaussian method, one variate per sample in time order.
Signal generate_signal(const SignalParams& params);

enum class FrequencyUnit
{
        hertz,
        radians_per_second,
};

const char* to_string(FrequencyUnit unit);
FrequencyUnit parse_frequency_unit(const std::string& text);

struct FrequencySet
{
        std::string name;
        std::vector<double> frequencies;
        FrequencyUnit unit = FrequencyUnit::hertz;

        [[nodiscard]] std::size_t size() const
        {
                return frequencies.size();
        }

        // Angular frequency of class i in rad/s.
        [[nodiscard]] double angular(std::size_t i) const;
};

void validate(const FrequencySet& set);

struct LabeledDataset
{
        std::vector<Signal> signals;
        std::vector<std::size_t> labels;
        FrequencySet set;

        [[nodiscard]] std::size_t size() const
        {
                return signals.size();
        }

        [[nodiscard]] std::size_t input_length() const;
};

void validate(const LabeledDataset& dataset);

/// per_class signals for every frequency of the set, grouped by class.
/// Signal j of class c uses seed derive_seed(seed, c, j), frequency
/// set.angular(c) and zero phase; the remaining fields come from base.
LabeledDataset generate_dataset(
        const FrequencySet& set,
        std::size_t per_class,
        const SignalParams& base,
        std::uint64_t seed);

struct DatasetSplit
{
        LabeledDataset train;
        LabeledDataset test;
};

/// Stratified shuffled split. Train quotas per class follow the class
/// proportions, rounded by largest remainder (ties to the lower class).
DatasetSplit split_dataset(const LabeledDataset& dataset, std::size_t train_count, std::uint64_t seed);

// CSV: "# key=value" preamble (set, unit, frequencies, amplitude) followed by
// label,freq_hz,sigma,dt,s0,...,sN
void write_dataset_csv(const LabeledDataset& dataset, std::ostream& out);
LabeledDataset read_dataset_csv(std::istream& in);

void save_dataset(const LabeledDataset& dataset, const std::string& path);
LabeledDataset load_dataset(const std::string& path);
}
