#pragma once

#include <weave/nn/network_spec.h>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace weave::nn
{
// Where one trainable layer's weights and biases live in the flat vector.
// Dense weights are (units, inputs) row-major; conv kernels are
// (filters, in_channels, kernel) row-major.
struct ParameterBlock
{
        std::size_t layer = 0;
        std::size_t fan_in = 0;
        std::size_t weight_offset = 0;
        std::size_t weight_count = 0;
        std::size_t bias_offset = 0;
        std::size_t bias_count = 0;
};

std::vector<ParameterBlock> parameter_layout(const NetworkSpec& spec);

struct Parameters
{
        std::vector<double> values;
        std::vector<ParameterBlock> layout;

        [[nodiscard]] std::size_t size() const
        {
                return values.size();
        }

        // Block for layers[layer]; throws if that layer is not trainable.
        [[nodiscard]] const ParameterBlock& block(std::size_t layer) const;

        std::span<double> weights(std::size_t layer);
        [[nodiscard]] std::span<const double> weights(std::size_t layer) const;
        std::span<double> biases(std::size_t layer);
        [[nodiscard]] std::span<const double> biases(std::size_t layer) const;
};

Parameters zero_parameters(const NetworkSpec& spec);

/// He-style uniform initialization: every weight ~ U(-b, b) with
/// b = sqrt(6 / fan_in), drawn in layout order from Rng(seed); biases zero.
Parameters init_parameters(const NetworkSpec& spec, std::uint64_t seed);

void validate(const Parameters& params, const NetworkSpec& spec);
}
