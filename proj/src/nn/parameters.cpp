#include <weave/error.h>
#include <weave/nn/parameters.h>
#include <weave/random.h>

#include <cmath>
#include <string>

namespace weave::nn
{
std::vector<ParameterBlock> parameter_layout(const NetworkSpec& spec)
{
        const std::vector<Shape> shapes = propagate_shapes(spec);
        std::vector<ParameterBlock> layout;
        std::size_t offset = 0;
        for (std::size_t i = 0; i < spec.layers.size(); ++i)
        {
                const Shape in = shapes[i];
                ParameterBlock block{.layer = i};
                if (const auto* d = std::get_if<Dense>(&spec.layers[i]))
                {
                        block.fan_in = in.length;
                        block.weight_count = d->units * in.length;
                        block.bias_count = d->units;
                }
                else if (const auto* c = std::get_if<Conv1d>(&spec.layers[i]))
                {
                        block.fan_in = in.channels * c->kernel;
                        block.weight_count = c->filters * in.channels * c->kernel;
                        block.bias_count = c->filters;
                }
                else
                {
                        continue;
                }
                block.weight_offset = offset;
                block.bias_offset = offset + block.weight_count;
                offset = block.bias_offset + block.bias_count;
                layout.push_back(block);
        }
        return layout;
}

const ParameterBlock& Parameters::block(const std::size_t layer) const
{
        for (const ParameterBlock& b : layout)
        {
                if (b.layer == layer)
                {
                        return b;
                }
        }
        fail(ErrorKind::structural, "layer " + std::to_string(layer) + " has no parameters");
}

std::span<double> Parameters::weights(const std::size_t layer)
{
        const ParameterBlock& b = block(layer);
        return std::span(values).subspan(b.weight_offset, b.weight_count);
}

std::span<const double> Parameters::weights(const std::size_t layer) const
{
        const ParameterBlock& b = block(layer);
        return std::span(values).subspan(b.weight_offset, b.weight_count);
}

std::span<double> Parameters::biases(const std::size_t layer)
{
        const ParameterBlock& b = block(layer);
        return std::span(values).subspan(b.bias_offset, b.bias_count);
}

std::span<const double> Parameters::biases(const std::size_t layer) const
{
        const ParameterBlock& b = block(layer);
        return std::span(values).subspan(b.bias_offset, b.bias_count);
}

Parameters zero_parameters(const NetworkSpec& spec)
{
        Parameters params;
        params.layout = parameter_layout(spec);
        const std::size_t total =
                params.layout.empty() ? 0 : params.layout.back().bias_offset + params.layout.back().bias_count;
        params.values.assign(total, 0.0);
        return params;
}

Parameters init_parameters(const NetworkSpec& spec, const std::uint64_t seed)
{
        Parameters params = zero_parameters(spec);
        Rng rng(seed);
        for (const ParameterBlock& b : params.layout)
        {
                const double bound = std::sqrt(6.0 / static_cast<double>(b.fan_in));
                for (std::size_t k = 0; k < b.weight_count; ++k)
                {
                        params.values[b.weight_offset + k] = rng.uniform(-bound, bound);
                }
        }
        return params;
}

void validate(const Parameters& params, const NetworkSpec& spec)
{
        const Parameters expected = zero_parameters(spec);
        require(params.values.size() == expected.values.size(), ErrorKind::structural,
                "parameter count " + std::to_string(params.values.size()) + " does not match network '" + spec.name
                        + "' (" + std::to_string(expected.values.size()) + ")");
        for (const double v : params.values)
        {
                require(std::isfinite(v), ErrorKind::numeric, "non-finite parameter");
        }
}
}
