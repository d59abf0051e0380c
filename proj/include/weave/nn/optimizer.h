#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace weave::nn
{
enum class OptimizerKind
{
        sgd,
        adam,
        adagrad,
};

// How much data one plain gradient-descent step sees.
enum class GradientScope
{
        batch,       // the whole training set
        stochastic,  // a single example
        minibatch,   // minibatch_size examples
};

struct OptimizerState
{
        OptimizerKind kind = OptimizerKind::sgd;
        GradientScope scope = GradientScope::minibatch;
        std::size_t minibatch_size = 32;
        double learning_rate = 0.01;
        double beta1 = 0.9;
        double beta2 = 0.999;
        double epsilon = 1e-8;

        std::vector<double> m;       // Adam first moment
        std::vector<double> v;       // Adam second moment
        std::vector<double> g_sum;   // Adagrad running sum of squared gradients
        std::size_t t = 0;           // completed steps
};

OptimizerState make_sgd(double learning_rate, GradientScope scope = GradientScope::minibatch, std::size_t minibatch_size = 32);
OptimizerState make_adam(double learning_rate = 0.001, double beta1 = 0.9, double beta2 = 0.999, double epsilon = 1e-8);
OptimizerState make_adagrad(double learning_rate = 0.01, double epsilon = 1e-8);

void validate(const OptimizerState& opt);

const char* to_string(OptimizerKind kind);
OptimizerKind parse_optimizer_kind(const std::string& text);
const char* to_string(GradientScope scope);
GradientScope parse_gradient_scope(const std::string& text);

// Examples per update for the optimizer: the whole set, one, or the
// minibatch size for plain SGD; batch_size for the adaptive methods.
std::size_t examples_per_step(const OptimizerState& opt, std::size_t batch_size, std::size_t train_size);

// theta <- theta - eta g
void sgd_step(std::span<double> params, std::span<const double> grads, OptimizerState& opt);

/// t <- t + 1
/// m <- beta1 m + (1 - beta1) g,  v <- beta2 v + (1 - beta2) g^2
/// m_hat = m / (1 - beta1^t),  v_hat = v / (1 - beta2^t)
/// theta <- theta - eta m_hat / sqrt(v_hat + epsilon)
void adam_step(std::span<double> params, std::span<const double> grads, OptimizerState& opt);

/// G <- G + g^2,  theta <- theta - eta g / sqrt(G + epsilon)
void adagrad_step(std::span<double> params, std::span<const double> grads, OptimizerState& opt);

void optimizer_step(std::span<double> params, std::span<const double> grads, OptimizerState& opt);
}
