#pragma once

#include <weave/mmae.h>
#include <weave/signal.h>
#include <weave/trainer.h>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace weave
{
// Omega1 = {5, 5.5, 6}, Omega2 = {5, 5.2, 5.4}, Omega3 = {10, 10.2, 10.4},
// named omega1..omega3, in Hz.
std::vector<FrequencySet> builtin_frequency_sets();

// One builtin set by name, with its values reinterpreted in the given unit.
FrequencySet builtin_frequency_set(const std::string& name, FrequencyUnit unit = FrequencyUnit::hertz);

/// Everything that determines a sweep point besides the swept value.
struct Protocol
{
        std::size_t per_class = 3000;
        // 8000 of 9000 signals train, the rest test.
        double train_fraction = 8.0 / 9.0;
        double amplitude = 1;
        double dt = 0.01;
        double duration = 1;
        double sigma = 0.3;

        MmaeConfig mmae;

        std::size_t epochs = 30;
        std::size_t batch_size = 32;
        // Adagrad for the fully connected networks, Adam for the convolutional ones.
        double dense_learning_rate = 0.01;
        double conv_learning_rate = 0.001;
        std::size_t pool_window = 0;

        std::uint64_t seed = 1;
        std::size_t jobs = 1;
};

void validate(const Protocol& protocol);

// MMAE plus the architecture names.
const std::vector<std::string>& estimator_names();
void validate_estimators(const std::vector<std::string>& estimators);

// Training settings the protocol assigns to an architecture.
TrainConfig training_config(const Protocol& protocol, const std::string& architecture, std::uint64_t point_seed);

struct SweepRow
{
        double condition = 0;
        std::string estimator;
        double accuracy = 0;
        std::size_t n_test = 0;
        std::string fingerprint;
};

struct SweepResult
{
        // "sigma" or "duration"
        std::string condition;
        // "accuracy" or "accuracy_loss"
        std::string quantity = "accuracy";
        std::vector<SweepRow> rows;
        // Run metadata written as "# key=value" lines, in order.
        std::vector<std::pair<std::string, std::string>> metadata;

        [[nodiscard]] std::string fingerprint() const;
        [[nodiscard]] std::vector<double> conditions() const;
        [[nodiscard]] std::vector<std::string> estimators() const;
        // Throws if the (condition, estimator) row is missing.
        [[nodiscard]] const SweepRow& row(double condition, const std::string& estimator) const;
        [[nodiscard]] double accuracy(double condition, const std::string& estimator) const;
};

void validate(const SweepResult& result);

// 64-bit FNV-1a of the text, as 16 hex digits.
std::string fingerprint_hash(const std::string& text);

// Seed of the noise-sweep point at sigma (duration fixed by the protocol).
std::uint64_t noise_point_seed(const Protocol& protocol, double sigma);
// Seed of the length-sweep point at the given duration.
std::uint64_t length_point_seed(const Protocol& protocol, double duration);

// Dataset of one sweep point: per_class signals per class with
// derive_seed(point_seed, 1, 0), split train_fraction / rest with
// derive_seed(point_seed, 2, 0).
DatasetSplit point_split(const FrequencySet& set, const SignalParams& base, const Protocol& protocol, std::uint64_t point_seed);

/// One sweep point: generate per_class signals per class, stratified split,
/// train each network on the training part, score every estimator on the
/// test part. MMAE never sees the training part.
std::vector<SweepRow> evaluate_point(
        const FrequencySet& set,
        const SignalParams& base,
        const std::vector<std::string>& estimators,
        const Protocol& protocol,
        std::uint64_t point_seed);

SweepResult noise_sweep(
        const FrequencySet& set,
        const std::vector<double>& sigmas,
        const std::vector<std::string>& estimators,
        const Protocol& protocol);

// dt stays at protocol.dt; networks are retrained for every duration.
SweepResult length_sweep(
        const FrequencySet& set,
        const std::vector<double>& durations,
        double sigma,
        const std::vector<std::string>& estimators,
        const Protocol& protocol);

SweepResult architecture_comparison(
        const FrequencySet& set,
        const std::vector<double>& sigmas,
        const std::vector<std::string>& architectures,
        const Protocol& protocol);

// Row-wise a - b; both must cover the same (condition, estimator) pairs.
SweepResult accuracy_loss(const SweepResult& a, const SweepResult& b);

// "# key=value" preamble, then condition,estimator,accuracy,n_test
void write_results_csv(const SweepResult& result, std::ostream& out);
SweepResult read_results_csv(std::istream& in);
void export_results(const SweepResult& result, const std::string& path);
SweepResult import_results(const std::string& path);

// Self-contained matplotlib script that plots the result and saves a PNG
// next to itself.
std::string plot_script(const SweepResult& result);
void emit_plot_script(const SweepResult& result, const std::string& path);

std::vector<double> default_sigma_grid();
std::vector<double> default_duration_grid();
}
