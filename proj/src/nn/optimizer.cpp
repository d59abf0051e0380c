#include <weave/error.h>
#include <weave/nn/optimizer.h>

#include <cmath>

namespace weave::nn
{
namespace
{
void check_sizes(const std::span<double> params, const std::span<const double> grads)
{
        require(params.size() == grads.size(), ErrorKind::structural, "parameter and gradient sizes differ");
}

void ensure_size(std::vector<double>& accumulator, const std::size_t n)
{
        if (accumulator.empty())
        {
                accumulator.assign(n, 0.0);
        }
        require(accumulator.size() == n, ErrorKind::structural, "optimizer accumulator size mismatch");
}
}

OptimizerState make_sgd(const double learning_rate, const GradientScope scope, const std::size_t minibatch_size)
{
        return {.kind = OptimizerKind::sgd, .scope = scope, .minibatch_size = minibatch_size, .learning_rate = learning_rate};
}

OptimizerState make_adam(const double learning_rate, const double beta1, const double beta2, const double epsilon)
{
        return {.kind = OptimizerKind::adam,
                .learning_rate = learning_rate,
                .beta1 = beta1,
                .beta2 = beta2,
                .epsilon = epsilon};
}

OptimizerState make_adagrad(const double learning_rate, const double epsilon)
{
        return {.kind = OptimizerKind::adagrad, .learning_rate = learning_rate, .epsilon = epsilon};
}

void validate(const OptimizerState& opt)
{
        require(std::isfinite(opt.learning_rate) && opt.learning_rate > 0, ErrorKind::config,
                "optimizer learning rate must be > 0");
        require(opt.beta1 >= 0 && opt.beta1 < 1 && opt.beta2 >= 0 && opt.beta2 < 1, ErrorKind::config,
                "optimizer betas must lie in [0, 1)");
        require(opt.epsilon >= 0, ErrorKind::config, "optimizer epsilon must be >= 0");
        require(opt.kind != OptimizerKind::sgd || opt.scope != GradientScope::minibatch || opt.minibatch_size >= 1,
                ErrorKind::config, "minibatch size must be >= 1");
}

const char* to_string(const OptimizerKind kind)
{
        switch (kind)
        {
        case OptimizerKind::sgd:
                return "sgd";
        case OptimizerKind::adam:
                return "adam";
        case OptimizerKind::adagrad:
                return "adagrad";
        }
        return "sgd";
}

OptimizerKind parse_optimizer_kind(const std::string& text)
{
        if (text == "sgd")
        {
                return OptimizerKind::sgd;
        }
        if (text == "adam")
        {
                return OptimizerKind::adam;
        }
        if (text == "adagrad")
        {
                return OptimizerKind::adagrad;
        }
        fail(ErrorKind::config, "unknown optimizer '" + text + "' (expected sgd, adam or adagrad)");
}

const char* to_string(const GradientScope scope)
{
        switch (scope)
        {
        case GradientScope::batch:
                return "batch";
        case GradientScope::stochastic:
                return "stochastic";
        case GradientScope::minibatch:
                return "minibatch";
        }
        return "minibatch";
}

GradientScope parse_gradient_scope(const std::string& text)
{
        if (text == "batch")
        {
                return GradientScope::batch;
        }
        if (text == "stochastic")
        {
                return GradientScope::stochastic;
        }
        if (text == "minibatch")
        {
                return GradientScope::minibatch;
        }
        fail(ErrorKind::config, "unknown gradient scope '" + text + "' (expected batch, stochastic or minibatch)");
}

std::size_t examples_per_step(const OptimizerState& opt, const std::size_t batch_size, const std::size_t train_size)
{
        if (opt.kind != OptimizerKind::sgd)
        {
                return batch_size;
        }
        switch (opt.scope)
        {
        case GradientScope::batch:
                return train_size;
        case GradientScope::stochastic:
                return 1;
        case GradientScope::minibatch:
                return opt.minibatch_size;
        }
        return batch_size;
}

void sgd_step(const std::span<double> params, const std::span<const double> grads, OptimizerState& opt)
{
        check_sizes(params, grads);
        for (std::size_t i = 0; i < params.size(); ++i)
        {
                params[i] -= opt.learning_rate * grads[i];
        }
        ++opt.t;
}

void adam_step(const std::span<double> params, const std::span<const double> grads, OptimizerState& opt)
{
        check_sizes(params, grads);
        ensure_size(opt.m, params.size());
        ensure_size(opt.v, params.size());
        ++opt.t;
        const double t = static_cast<double>(opt.t);
        const double c1 = 1 - std::pow(opt.beta1, t);
        const double c2 = 1 - std::pow(opt.beta2, t);
        for (std::size_t i = 0; i < params.size(); ++i)
        {
                const double g = grads[i];
                opt.m[i] = opt.beta1 * opt.m[i] + (1 - opt.beta1) * g;
                opt.v[i] = opt.beta2 * opt.v[i] + (1 - opt.beta2) * g * g;
                const double m_hat = opt.m[i] / c1;
                const double v_hat = opt.v[i] / c2;
                params[i] -= opt.learning_rate * m_hat / std::sqrt(v_hat + opt.epsilon);
        }
}

void adagrad_step(const std::span<double> params, const std::span<const double> grads, OptimizerState& opt)
{
        check_sizes(params, grads);
        ensure_size(opt.g_sum, params.size());
        ++opt.t;
        for (std::size_t i = 0; i < params.size(); ++i)
        {
                const double g = grads[i];
                opt.g_sum[i] += g * g;
                params[i] -= opt.learning_rate * g / std::sqrt(opt.g_sum[i] + opt.epsilon);
        }
}

void optimizer_step(const std::span<double> params, const std::span<const double> grads, OptimizerState& opt)
{
        switch (opt.kind)
        {
        case OptimizerKind::sgd:
                sgd_step(params, grads, opt);
                return;
        case OptimizerKind::adam:
                adam_step(params, grads, opt);
                return;
        case OptimizerKind::adagrad:
                adagrad_step(params, grads, opt);
                return;
        }
}
}
