#include <weave/error.h>
#include <weave/nn/layers.h>

#include <algorithm>
#include <cmath>
#include <string>

namespace weave::nn
{
namespace kernels
{
namespace
{
struct Range
{
        std::size_t begin;
        std::size_t end;
};

// Output positions l for which input position l + k - pad is in range.
Range valid_range(const std::size_t k, const std::size_t pad, const std::size_t in_length, const std::size_t out_length)
{
        const std::size_t begin = pad > k ? pad - k : 0;
        const std::size_t limit = in_length + pad > k ? in_length + pad - k : 0;
        const std::size_t end = std::min(out_length, limit);
        return {.begin = begin, .end = std::max(begin, end)};
}

std::size_t padding_of(const std::size_t kernel, const Padding padding)
{
        return padding == Padding::same ? kernel / 2 : 0;
}

// Four fixed accumulators: deterministic, and independent enough to pipeline.
double dot(const double* a, const double* b, const std::size_t n)
{
        double s0 = 0;
        double s1 = 0;
        double s2 = 0;
        double s3 = 0;
        std::size_t i = 0;
        for (; i + 4 <= n; i += 4)
        {
                s0 += a[i] * b[i];
                s1 += a[i + 1] * b[i + 1];
                s2 += a[i + 2] * b[i + 2];
                s3 += a[i + 3] * b[i + 3];
        }
        for (; i < n; ++i)
        {
                s0 += a[i] * b[i];
        }
        return (s0 + s1) + (s2 + s3);
}

// y[l] += sum_k w[k] x[l + k - pad], taps added in k order for every l.
void correlate(
        double* y, const std::size_t ny, const double* x, const std::size_t nx, const double* w, const std::size_t kernel,
        const std::size_t pad)
{
        const std::size_t lo = std::min(pad, ny);
        const std::size_t hi = std::max(lo, std::min(ny, nx + pad + 1 > kernel ? nx + pad + 1 - kernel : 0));
        auto edge = [&](const std::size_t l)
        {
                double acc = y[l];
                for (std::size_t k = 0; k < kernel; ++k)
                {
                        if (l + k >= pad && l + k - pad < nx)
                        {
                                acc += w[k] * x[l + k - pad];
                        }
                }
                y[l] = acc;
        };
        for (std::size_t l = 0; l < lo; ++l)
        {
                edge(l);
        }
        if (kernel == 3)
        {
                const double w0 = w[0];
                const double w1 = w[1];
                const double w2 = w[2];
                const double* xs = x - pad;
                for (std::size_t l = lo; l < hi; ++l)
                {
                        y[l] = ((y[l] + w0 * xs[l]) + w1 * xs[l + 1]) + w2 * xs[l + 2];
                }
        }
        else
        {
                for (std::size_t l = lo; l < hi; ++l)
                {
                        edge(l);
                }
        }
        for (std::size_t l = hi; l < ny; ++l)
        {
                edge(l);
        }
}

// gx[j] += sum_k w[k] g[j - k + pad], taps added in k order for every j.
void convolve(
        double* gx, const std::size_t nx, const double* g, const std::size_t ng, const double* w, const std::size_t kernel,
        const std::size_t pad)
{
        // Interior j has j - k + pad in [0, ng) for every k.
        const std::size_t lo = std::min(nx, kernel > pad + 1 ? kernel - 1 - pad : 0);
        const std::size_t hi = std::max(lo, std::min(nx, ng > pad ? ng - pad : 0));
        auto edge = [&](const std::size_t j)
        {
                double acc = gx[j];
                for (std::size_t k = 0; k < kernel; ++k)
                {
                        if (j + pad >= k && j + pad - k < ng)
                        {
                                acc += w[k] * g[j + pad - k];
                        }
                }
                gx[j] = acc;
        };
        for (std::size_t j = 0; j < lo; ++j)
        {
                edge(j);
        }
        if (kernel == 3)
        {
                const double w0 = w[0];
                const double w1 = w[1];
                const double w2 = w[2];
                for (std::size_t j = lo; j < hi; ++j)
                {
                        const double* gs = g + j + pad;
                        gx[j] = ((gx[j] + w0 * gs[0]) + w1 * gs[-1]) + w2 * gs[-2];
                }
        }
        else
        {
                for (std::size_t j = lo; j < hi; ++j)
                {
                        edge(j);
                }
        }
        for (std::size_t j = hi; j < nx; ++j)
        {
                edge(j);
        }
}
}

void dense_forward(
        const std::span<const double> in,
        const std::span<const double> weights,
        const std::span<const double> biases,
        const std::span<double> out)
{
        const std::size_t n = in.size();
        for (std::size_t j = 0; j < out.size(); ++j)
        {
                const double* w = weights.data() + j * n;
                double sum = 0;
                for (std::size_t i = 0; i < n; ++i)
                {
                        sum += w[i] * in[i];
                }
                out[j] = biases[j] + sum;
        }
}

void dense_backward(
        const std::span<const double> in,
        const std::span<const double> weights,
        const std::span<const double> grad_out,
        const std::span<double> grad_weights,
        const std::span<double> grad_biases,
        const std::span<double> grad_input)
{
        const std::size_t n = in.size();
        for (std::size_t j = 0; j < grad_out.size(); ++j)
        {
                const double g = grad_out[j];
                grad_biases[j] += g;
                if (g == 0)
                {
                        continue;
                }
                double* gw = grad_weights.data() + j * n;
                for (std::size_t i = 0; i < n; ++i)
                {
                        gw[i] += g * in[i];
                }
                if (!grad_input.empty())
                {
                        const double* w = weights.data() + j * n;
                        for (std::size_t i = 0; i < n; ++i)
                        {
                                grad_input[i] += g * w[i];
                        }
                }
        }
}

void conv1d_forward(
        const Shape in_shape,
        const std::span<const double> in,
        const std::span<const double> kernels,
        const std::span<const double> biases,
        const std::size_t kernel,
        const Padding padding,
        const Shape out_shape,
        const std::span<double> out)
{
        const std::size_t pad = padding_of(kernel, padding);
        const std::size_t lin = in_shape.length;
        const std::size_t lout = out_shape.length;
        for (std::size_t o = 0; o < out_shape.channels; ++o)
        {
                double* y = out.data() + o * lout;
                std::fill(y, y + lout, biases[o]);
                for (std::size_t c = 0; c < in_shape.channels; ++c)
                {
                        const double* x = in.data() + c * lin;
                        const double* w = kernels.data() + (o * in_shape.channels + c) * kernel;
                        correlate(y, lout, x, lin, w, kernel, pad);
                }
        }
}

void conv1d_backward(
        const Shape in_shape,
        const std::span<const double> in,
        const std::span<const double> kernels,
        const std::size_t kernel,
        const Padding padding,
        const Shape out_shape,
        const std::span<const double> grad_out,
        const std::span<double> grad_kernels,
        const std::span<double> grad_biases,
        const std::span<double> grad_input)
{
        const std::size_t pad = padding_of(kernel, padding);
        const std::size_t lin = in_shape.length;
        const std::size_t lout = out_shape.length;
        for (std::size_t o = 0; o < out_shape.channels; ++o)
        {
                const double* g = grad_out.data() + o * lout;
                double bias_sum = 0;
                for (std::size_t l = 0; l < lout; ++l)
                {
                        bias_sum += g[l];
                }
                grad_biases[o] += bias_sum;
                for (std::size_t c = 0; c < in_shape.channels; ++c)
                {
                        const double* x = in.data() + c * lin;
                        const std::size_t w_offset = (o * in_shape.channels + c) * kernel;
                        for (std::size_t k = 0; k < kernel; ++k)
                        {
                                const Range r = valid_range(k, pad, lin, lout);
                                grad_kernels[w_offset + k] += dot(g + r.begin, x + r.begin + k - pad, r.end - r.begin);
                        }
                        if (!grad_input.empty())
                        {
                                convolve(grad_input.data() + c * lin, lin, g, lout, kernels.data() + w_offset, kernel, pad);
                        }
                }
        }
}

void maxpool1d_forward(
        const Shape in_shape,
        const std::span<const double> in,
        const std::size_t window,
        const std::span<double> out,
        const std::span<std::size_t> argmax)
{
        const std::size_t lout = in_shape.length / window;
        for (std::size_t c = 0; c < in_shape.channels; ++c)
        {
                for (std::size_t l = 0; l < lout; ++l)
                {
                        std::size_t best = c * in_shape.length + l * window;
                        for (std::size_t k = 1; k < window; ++k)
                        {
                                const std::size_t idx = c * in_shape.length + l * window + k;
                                if (in[idx] > in[best])
                                {
                                        best = idx;
                                }
                        }
                        out[c * lout + l] = in[best];
                        argmax[c * lout + l] = best;
                }
        }
}

void maxpool1d_backward(
        const std::span<const std::size_t> argmax,
        const std::span<const double> grad_out,
        const std::span<double> grad_input)
{
        for (std::size_t i = 0; i < grad_out.size(); ++i)
        {
                grad_input[argmax[i]] += grad_out[i];
        }
}

void relu_forward(const std::span<const double> in, const std::span<double> out)
{
        for (std::size_t i = 0; i < in.size(); ++i)
        {
                out[i] = in[i] > 0 ? in[i] : 0.0;
        }
}

void relu_backward(const std::span<const double> in, const std::span<const double> grad_out, const std::span<double> grad_input)
{
        for (std::size_t i = 0; i < in.size(); ++i)
        {
                grad_input[i] += in[i] > 0 ? grad_out[i] : 0.0;
        }
}
}

Tensor1 dense_forward(const Tensor1& input, const std::span<const double> weights, const std::span<const double> biases)
{
        const std::size_t units = biases.size();
        require(weights.size() == units * input.values.size(), ErrorKind::structural,
                "dense weights hold " + std::to_string(weights.size()) + " values, expected "
                        + std::to_string(units * input.values.size()));
        Tensor1 out({.channels = 1, .length = units});
        kernels::dense_forward(input.values, weights, biases, out.values);
        return out;
}

Tensor1 conv1d_forward(
        const Tensor1& input,
        const std::span<const double> kernels,
        const std::span<const double> biases,
        const std::size_t kernel,
        const Padding padding)
{
        const std::size_t filters = biases.size();
        require(kernel >= 1, ErrorKind::structural, "conv kernel must be >= 1");
        require(kernels.size() == filters * input.shape.channels * kernel, ErrorKind::structural,
                "conv kernels hold " + std::to_string(kernels.size()) + " values, expected "
                        + std::to_string(filters * input.shape.channels * kernel));
        Shape out_shape{.channels = filters, .length = input.shape.length};
        if (padding == Padding::same)
        {
                require(kernel % 2 == 1, ErrorKind::structural, "same padding needs an odd kernel");
        }
        else
        {
                require(input.shape.length >= kernel, ErrorKind::structural, "input shorter than kernel");
                out_shape.length = input.shape.length - kernel + 1;
        }
        Tensor1 out(out_shape);
        kernels::conv1d_forward(input.shape, input.values, kernels, biases, kernel, padding, out_shape, out.values);
        return out;
}

Tensor1 maxpool1d_forward(const Tensor1& input, const std::size_t window)
{
        require(window >= 1, ErrorKind::structural, "pool window must be >= 1");
        Tensor1 out({.channels = input.shape.channels, .length = input.shape.length / window});
        std::vector<std::size_t> argmax(out.values.size());
        kernels::maxpool1d_forward(input.shape, input.values, window, out.values, argmax);
        return out;
}

Tensor1 relu(const Tensor1& input)
{
        Tensor1 out(input.shape);
        kernels::relu_forward(input.values, out.values);
        return out;
}

double sigmoid(const double x)
{
        return 1 / (1 + std::exp(-x));
}

double tanh_activation(const double x)
{
        return 2 / (1 + std::exp(-2 * x)) - 1;
}
}
