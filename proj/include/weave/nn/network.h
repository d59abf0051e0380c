#pragma once

#include <weave/nn/network_spec.h>
#include <weave/nn/parameters.h>
#include <weave/nn/tensor.h>

#include <cstddef>
#include <span>
#include <vector>

namespace weave::nn
{
/// Reusable activation and gradient buffers for one network.
/// Not shareable across threads; give each worker its own.
class Workspace
{
        const NetworkSpec* spec_;
        std::vector<Shape> shapes_;
        std::vector<std::vector<double>> activations_;
        std::vector<std::vector<double>> gradients_;
        std::vector<std::vector<std::size_t>> argmax_;
        std::vector<double> loss_grad_;

public:
        explicit Workspace(const NetworkSpec& spec);

        // Logits for input; valid until the next call.
        std::span<const double> forward(const Parameters& params, std::span<const double> input);

        // Runs forward and backward for one example, adds d loss / d params
        // into grad_accum and returns the loss. logits_out (optional) receives
        // the logits.
        double accumulate_gradient(
                const Parameters& params,
                std::span<const double> input,
                std::size_t label,
                std::span<double> grad_accum,
                std::span<double> logits_out = {});

        [[nodiscard]] const std::vector<Shape>& shapes() const
        {
                return shapes_;
        }
};

Tensor1 forward(const NetworkSpec& spec, const Parameters& params, std::span<const double> input);

struct LossAndGradients
{
        double loss = 0;
        std::vector<double> gradients;  // parameter layout order
};

LossAndGradients backward(const NetworkSpec& spec, const Parameters& params, std::span<const double> input, std::size_t label);

// Mean loss and mean gradient over the examples, reduced in index order.
LossAndGradients backward_batch(
        const NetworkSpec& spec,
        const Parameters& params,
        std::span<const std::span<const double>> inputs,
        std::span<const std::size_t> labels);
}
