#include <weave/error.h>
#include <weave/format.h>
#include <weave/mmae.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

namespace weave
{
void validate(const MmaeState& state)
{
        const std::size_t n = state.filters.size();
        require(n >= 2, ErrorKind::parameter, "MMAE bank needs at least two filters");
        require(state.models.size() == n && state.probabilities.size() == n, ErrorKind::structural,
                "MMAE bank sizes disagree");
        double sum = 0;
        for (const double p : state.probabilities)
        {
                require(std::isfinite(p) && p >= 0, ErrorKind::invariant, "MMAE probability is negative or non-finite");
                sum += p;
        }
        require(std::abs(sum - 1) <= 1e-12, ErrorKind::invariant, "MMAE probabilities do not sum to one");
        for (const SineModel& m : state.models)
        {
                validate(m);
        }
}

MmaeState init_bank(const FrequencySet& set, const SineModel& model_template, const Vector2& x0, const Matrix2& p0)
{
        validate(set);
        const std::size_t n = set.size();
        MmaeState state;
        state.filters.assign(n, KalmanFilterState{.x_hat = x0, .p = p0});
        state.probabilities.assign(n, 1.0 / static_cast<double>(n));
        state.models.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
        {
                SineModel model = model_template;
                model.omega = set.angular(i);
                validate(model);
                state.models.push_back(model);
        }
        return state;
}

double log_likelihood(const double residual, const double residual_var)
{
        return -0.5 * residual * residual / residual_var - 0.5 * std::log(2 * std::numbers::pi * residual_var);
}

bool update_probabilities(
        const std::span<double> probabilities,
        const std::span<const double> log_likelihoods,
        const double floor)
{
        require(probabilities.size() == log_likelihoods.size(), ErrorKind::structural,
                "probability and likelihood counts differ");
        const std::size_t n = probabilities.size();

        std::vector<double> log_post(n);
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i)
        {
                const double lp = probabilities[i] > 0 ? std::log(probabilities[i])
                                                       : -std::numeric_limits<double>::infinity();
                log_post[i] = lp + log_likelihoods[i];
                if (std::isnan(log_post[i]))
                {
                        log_post[i] = -std::numeric_limits<double>::infinity();
                }
                best = std::max(best, log_post[i]);
        }
        if (!std::isfinite(best))
        {
                return false;
        }

        double sum = 0;
        for (std::size_t i = 0; i < n; ++i)
        {
                log_post[i] = std::exp(log_post[i] - best);
                sum += log_post[i];
        }
        for (std::size_t i = 0; i < n; ++i)
        {
                probabilities[i] = log_post[i] / sum;
        }
        if (floor > 0)
        {
                double floored = 0;
                for (double& p : probabilities)
                {
                        p = std::max(p, floor);
                        floored += p;
                }
                for (double& p : probabilities)
                {
                        p /= floored;
                }
        }
        return true;
}

void mmae_advance(MmaeState& state, const double z)
{
        const std::size_t n = state.size();
        std::vector<double> log_f(n);
        for (std::size_t i = 0; i < n; ++i)
        {
                const KalmanStep step = kf_step(state.filters[i], z, state.models[i]);
                state.filters[i] = step.next;
                log_f[i] = log_likelihood(step.residual, step.residual_var);
        }
        if (!update_probabilities(state.probabilities, log_f, state.probability_floor))
        {
                ++state.degenerate_steps;
        }
        if (state.record_history)
        {
                state.history.push_back(state.probabilities);
        }
}

MmaeState mmae_step(const MmaeState& state, const double z)
{
        MmaeState next = state;
        mmae_advance(next, z);
        return next;
}

Vector2 fused_state(const MmaeState& state)
{
        Vector2 x = Vector2::Zero();
        for (std::size_t i = 0; i < state.size(); ++i)
        {
                x += state.probabilities[i] * state.filters[i].x_hat;
        }
        return x;
}

double fused_frequency(const MmaeState& state)
{
        double omega = 0;
        for (std::size_t i = 0; i < state.size(); ++i)
        {
                omega += state.probabilities[i] * state.models[i].omega;
        }
        return omega;
}

std::size_t argmax(const std::span<const double> values)
{
        std::size_t best = 0;
        for (std::size_t i = 1; i < values.size(); ++i)
        {
                if (values[i] > values[best])
                {
                        best = i;
                }
        }
        return best;
}

std::size_t classify(const MmaeState& state)
{
        return argmax(state.probabilities);
}

void validate(const MmaeConfig& config)
{
        require(std::isfinite(config.phi_s) && config.phi_s >= 0, ErrorKind::config, "mmae: phi_s must be >= 0");
        require(std::isfinite(config.min_r) && config.min_r > 0, ErrorKind::config, "mmae: min_r must be > 0");
        require(std::isfinite(config.p0_scale) && config.p0_scale > 0, ErrorKind::config,
                "mmae: p0_scale must be > 0");
        require(config.probability_floor >= 0 && config.probability_floor < 1, ErrorKind::config,
                "mmae: probability_floor must lie in [0, 1)");
}

Matrix2 default_initial_covariance(const FrequencySet& set, const MmaeConfig& config)
{
        double omega_max = 0;
        for (std::size_t i = 0; i < set.size(); ++i)
        {
                omega_max = std::max(omega_max, set.angular(i));
        }
        const double a2 = config.amplitude * config.amplitude;
        Matrix2 p0 = Matrix2::Zero();
        p0(0, 0) = a2 * config.p0_scale;
        p0(1, 1) = a2 * omega_max * omega_max * config.p0_scale;
        return p0;
}

MmaeRun run_mmae(const Signal& signal, const FrequencySet& set, const MmaeConfig& config)
{
        validate(config);
        const double sigma2 = signal.params.noise_std * signal.params.noise_std;
        SineModel model_template{
                .omega = 1,
                .dt = signal.params.dt,
                .phi_s = config.phi_s,
                .r = config.r > 0 ? config.r : std::max(sigma2, config.min_r)};

        MmaeRun run;
        run.final_state = init_bank(set, model_template, config.x0, default_initial_covariance(set, config));
        MmaeState& state = run.final_state;
        state.probability_floor = config.probability_floor;
        if (config.record_history)
        {
                run.probability_history.reserve(signal.samples.size());
                run.frequency_history.reserve(signal.samples.size());
        }
        for (const double z : signal.samples)
        {
                mmae_advance(state, z);
                if (config.record_history)
                {
                        run.probability_history.push_back(state.probabilities);
                        run.frequency_history.push_back(fused_frequency(state));
                }
        }
        run.label = classify(state);
        return run;
}

void write_probability_trace(const MmaeRun& run, std::ostream& out)
{
        const std::size_t n = run.final_state.size();
        out << "step";
        for (std::size_t i = 0; i < n; ++i)
        {
                out << ",p_" << i;
        }
        out << ",fused_freq_hz\n";
        for (std::size_t k = 0; k < run.probability_history.size(); ++k)
        {
                out << k;
                for (const double p : run.probability_history[k])
                {
                        out << ',' << format_double(p);
                }
                out << ',' << format_double(run.frequency_history[k] / (2 * std::numbers::pi)) << '\n';
        }
}
}
