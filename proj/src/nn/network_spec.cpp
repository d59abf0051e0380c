#include <weave/error.h>
#include <weave/nn/network_spec.h>

#include <string>

namespace weave::nn
{
Tensor1::Tensor1(const Shape s, std::vector<double> v)
        : shape(s),
          values(std::move(v))
{
        require(values.size() == shape.size(), ErrorKind::structural,
                "tensor has " + std::to_string(values.size()) + " values for shape (" + std::to_string(shape.channels)
                        + ", " + std::to_string(shape.length) + ")");
}

Tensor1 Tensor1::vector(const std::span<const double> v)
{
        return Tensor1({.channels = 1, .length = v.size()}, std::vector<double>(v.begin(), v.end()));
}

namespace
{
template <class... Ts>
struct Overloaded : Ts...
{
        using Ts::operator()...;
};

std::string at_layer(const std::size_t i)
{
        return " (layer " + std::to_string(i) + ")";
}
}

const char* layer_name(const LayerSpec& layer)
{
        return std::visit(
                Overloaded{
                        [](const Dense&)
                        {
                                return "dense";
                        },
                        [](const Conv1d&)
                        {
                                return "conv1d";
                        },
                        [](const MaxPool1d&)
                        {
                                return "maxpool1d";
                        },
                        [](const Relu&)
                        {
                                return "relu";
                        },
                        [](const Flatten&)
                        {
                                return "flatten";
                        }},
                layer);
}

bool is_trainable(const LayerSpec& layer)
{
        return std::holds_alternative<Dense>(layer) || std::holds_alternative<Conv1d>(layer);
}

std::vector<Shape> propagate_shapes(const NetworkSpec& spec)
{
        require(spec.input_length >= 1, ErrorKind::structural, "network input length must be >= 1");
        std::vector<Shape> shapes;
        shapes.reserve(spec.layers.size() + 1);
        shapes.push_back({.channels = 1, .length = spec.input_length});
        for (std::size_t i = 0; i < spec.layers.size(); ++i)
        {
                const Shape in = shapes.back();
                const Shape out = std::visit(
                        Overloaded{
                                [&](const Dense& d) -> Shape
                                {
                                        require(d.units >= 1, ErrorKind::structural, "dense units must be >= 1" + at_layer(i));
                                        require(in.channels == 1, ErrorKind::structural,
                                                "dense layer needs a flat input; insert flatten" + at_layer(i));
                                        return {.channels = 1, .length = d.units};
                                },
                                [&](const Conv1d& c) -> Shape
                                {
                                        require(c.filters >= 1, ErrorKind::structural, "conv filters must be >= 1" + at_layer(i));
                                        require(c.kernel >= 1, ErrorKind::structural, "conv kernel must be >= 1" + at_layer(i));
                                        if (c.padding == Padding::same)
                                        {
                                                require(c.kernel % 2 == 1, ErrorKind::structural,
                                                        "same padding needs an odd kernel" + at_layer(i));
                                                return {.channels = c.filters, .length = in.length};
                                        }
                                        require(in.length >= c.kernel, ErrorKind::structural,
                                                "input shorter than kernel" + at_layer(i));
                                        return {.channels = c.filters, .length = in.length - c.kernel + 1};
                                },
                                [&](const MaxPool1d& p) -> Shape
                                {
                                        require(p.window >= 1, ErrorKind::structural, "pool window must be >= 1" + at_layer(i));
                                        require(in.length >= p.window, ErrorKind::structural,
                                                "input shorter than pool window" + at_layer(i));
                                        return {.channels = in.channels, .length = in.length / p.window};
                                },
                                [&](const Relu&) -> Shape
                                {
                                        return in;
                                },
                                [&](const Flatten&) -> Shape
                                {
                                        return {.channels = 1, .length = in.size()};
                                }},
                        spec.layers[i]);
                shapes.push_back(out);
        }
        require(spec.num_classes >= 2, ErrorKind::structural, "network needs at least two classes");
        const Shape last = shapes.back();
        require(last.channels == 1 && last.length == spec.num_classes, ErrorKind::structural,
                "network '" + spec.name + "' ends in " + std::to_string(last.size()) + " outputs, expected "
                        + std::to_string(spec.num_classes) + " logits");
        const bool dense_last = !spec.layers.empty() && std::holds_alternative<Dense>(spec.layers.back());
        require(dense_last, ErrorKind::structural, "network must end with a dense layer producing logits");
        return shapes;
}

void validate(const NetworkSpec& spec)
{
        propagate_shapes(spec);
}
}
