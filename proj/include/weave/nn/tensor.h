#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace weave::nn
{
struct Shape
{
        std::size_t channels = 1;
        std::size_t length = 0;

        [[nodiscard]] std::size_t size() const
        {
                return channels * length;
        }

        bool operator==(const Shape&) const = default;
};

// Channel-major (channels, length) array: element (c, l) at c * length + l.
struct Tensor1
{
        Shape shape;
        std::vector<double> values;

        Tensor1() = default;

        explicit Tensor1(Shape s)
                : shape(s),
                  values(s.size(), 0.0)
        {
        }

        Tensor1(Shape s, std::vector<double> v);

        static Tensor1 vector(std::span<const double> v);

        double& at(std::size_t c, std::size_t l)
        {
                return values[c * shape.length + l];
        }

        [[nodiscard]] double at(std::size_t c, std::size_t l) const
        {
                return values[c * shape.length + l];
        }
};
}
