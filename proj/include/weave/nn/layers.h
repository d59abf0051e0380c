#pragma once

#include <weave/nn/network_spec.h>
#include <weave/nn/tensor.h>

#include <cstddef>
#include <span>
#include <vector>

namespace weave::nn
{
// out_j = b_j + sum_i w_ji in_i over the flattened input.
Tensor1 dense_forward(const Tensor1& input, std::span<const double> weights, std::span<const double> biases);

// kernels: (filters, in_channels, kernel) row-major. Zero padding of
// kernel / 2 on each side when padding is same.
Tensor1 conv1d_forward(
        const Tensor1& input,
        std::span<const double> kernels,
        std::span<const double> biases,
        std::size_t kernel,
        Padding padding);

Tensor1 maxpool1d_forward(const Tensor1& input, std::size_t window);

Tensor1 relu(const Tensor1& input);
double sigmoid(double x);
double tanh_activation(double x);

// Raw kernels shared by the single-layer functions above and the network
// forward/backward passes. Backward kernels accumulate into their gradient
// outputs; grad_input may be empty to skip it.
namespace kernels
{
void dense_forward(
        std::span<const double> in,
        std::span<const double> weights,
        std::span<const double> biases,
        std::span<double> out);

void dense_backward(
        std::span<const double> in,
        std::span<const double> weights,
        std::span<const double> grad_out,
        std::span<double> grad_weights,
        std::span<double> grad_biases,
        std::span<double> grad_input);

void conv1d_forward(
        Shape in_shape,
        std::span<const double> in,
        std::span<const double> kernels,
        std::span<const double> biases,
        std::size_t kernel,
        Padding padding,
        Shape out_shape,
        std::span<double> out);

void conv1d_backward(
        Shape in_shape,
        std::span<const double> in,
        std::span<const double> kernels,
        std::size_t kernel,
        Padding padding,
        Shape out_shape,
        std::span<const double> grad_out,
        std::span<double> grad_kernels,
        std::span<double> grad_biases,
        std::span<double> grad_input);

// argmax receives, per output element, the input index it was taken from
// (first maximum on ties).
void maxpool1d_forward(
        Shape in_shape,
        std::span<const double> in,
        std::size_t window,
        std::span<double> out,
        std::span<std::size_t> argmax);

void maxpool1d_backward(std::span<const std::size_t> argmax, std::span<const double> grad_out, std::span<double> grad_input);

void relu_forward(std::span<const double> in, std::span<double> out);
void relu_backward(std::span<const double> in, std::span<const double> grad_out, std::span<double> grad_input);
}
}
