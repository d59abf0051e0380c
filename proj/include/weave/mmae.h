#pragma once

#include <weave/signal.h>
#include <weave/sine_kf.h>

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace weave
{
/// Bank of sine-wave Kalman filters, one per hypothesized frequency, with
/// Bayesian model probabilities.
struct MmaeState
{
        std::vector<KalmanFilterState> filters;
        std::vector<SineModel> models;
        std::vector<double> probabilities;

        // Optional per-step probability trace, filled by mmae_step when
        // record_history is set.
        bool record_history = false;
        std::vector<std::vector<double>> history;

        // Steps on which every likelihood was zero-equivalent and the
        // probabilities were left unchanged.
        std::size_t degenerate_steps = 0;

        // Lower bound applied to each probability after an update, followed
        // by renormalization. Zero disables it.
        double probability_floor = 0;

        [[nodiscard]] std::size_t size() const
        {
                return filters.size();
        }
};

void validate(const MmaeState& state);

/// Filters for every frequency of the set, sharing x0, p0, dt, phi_s and r of
/// the template; uniform probabilities 1/N.
MmaeState init_bank(const FrequencySet& set, const SineModel& model_template, const Vector2& x0, const Matrix2& p0);

/// Advances every filter with z and applies Bayes' rule with the Gaussian
/// residual likelihood. Probabilities are updated in the log domain:
/// log p_i + log f_i, shifted by the maximum before exponentiating.
MmaeState mmae_step(const MmaeState& state, double z);

// In-place form of mmae_step.
void mmae_advance(MmaeState& state, double z);

// The probability update alone, for log-likelihoods supplied by the caller.
// Returns false (leaving probabilities untouched) when no term is finite.
bool update_probabilities(std::span<double> probabilities, std::span<const double> log_likelihoods, double floor = 0);

// log of exp(-res^2 / 2c) / sqrt(2 pi c)
double log_likelihood(double residual, double residual_var);

Vector2 fused_state(const MmaeState& state);

// rad/s
double fused_frequency(const MmaeState& state);

// Index of the largest probability; ties go to the lowest index.
std::size_t classify(const MmaeState& state);
std::size_t argmax(std::span<const double> values);

struct MmaeConfig
{
        double phi_s = 0.1;
        // Measurement variance. Non-positive means "use the signal's
        // noise_std^2", with zero noise replaced by min_r.
        double r = 0;
        double min_r = 1e-12;
        // Initial covariance diag(amplitude^2 * scale, (amplitude * omega_max)^2 * scale).
        double p0_scale = 100;
        double amplitude = 1;
        Vector2 x0 = Vector2::Zero();
        double probability_floor = 0;
        bool record_history = true;
};

void validate(const MmaeConfig& config);

Matrix2 default_initial_covariance(const FrequencySet& set, const MmaeConfig& config);

struct MmaeRun
{
        std::size_t label = 0;
        // probability_history[k] and frequency_history[k] hold the values after
        // sample k.
        std::vector<std::vector<double>> probability_history;
        std::vector<double> frequency_history;  // rad/s
        MmaeState final_state;
};

MmaeRun run_mmae(const Signal& signal, const FrequencySet& set, const MmaeConfig& config);

// step,p_0,...,p_{N-1},fused_freq_hz
void write_probability_trace(const MmaeRun& run, std::ostream& out);
}
