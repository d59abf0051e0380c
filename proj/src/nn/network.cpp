#include <weave/error.h>
#include <weave/nn/layers.h>
#include <weave/nn/loss.h>
#include <weave/nn/network.h>

#include <algorithm>
#include <string>

namespace weave::nn
{
Workspace::Workspace(const NetworkSpec& spec)
        : spec_(&spec),
          shapes_(propagate_shapes(spec))
{
        activations_.resize(shapes_.size());
        gradients_.resize(shapes_.size());
        argmax_.resize(spec.layers.size());
        for (std::size_t i = 0; i < shapes_.size(); ++i)
        {
                activations_[i].resize(shapes_[i].size());
                gradients_[i].resize(shapes_[i].size());
        }
        for (std::size_t i = 0; i < spec.layers.size(); ++i)
        {
                if (std::holds_alternative<MaxPool1d>(spec.layers[i]))
                {
                        argmax_[i].resize(shapes_[i + 1].size());
                }
        }
        loss_grad_.resize(spec.num_classes);
}

std::span<const double> Workspace::forward(const Parameters& params, const std::span<const double> input)
{
        require(input.size() == spec_->input_length, ErrorKind::structural,
                "network '" + spec_->name + "' expects " + std::to_string(spec_->input_length) + " samples, got "
                        + std::to_string(input.size()));
        std::copy(input.begin(), input.end(), activations_[0].begin());
        for (std::size_t i = 0; i < spec_->layers.size(); ++i)
        {
                const std::span<const double> in = activations_[i];
                const std::span<double> out = activations_[i + 1];
                const LayerSpec& layer = spec_->layers[i];
                if (std::holds_alternative<Dense>(layer))
                {
                        kernels::dense_forward(in, params.weights(i), params.biases(i), out);
                }
                else if (const auto* c = std::get_if<Conv1d>(&layer))
                {
                        kernels::conv1d_forward(
                                shapes_[i], in, params.weights(i), params.biases(i), c->kernel, c->padding, shapes_[i + 1], out);
                }
                else if (const auto* p = std::get_if<MaxPool1d>(&layer))
                {
                        kernels::maxpool1d_forward(shapes_[i], in, p->window, out, argmax_[i]);
                }
                else if (std::holds_alternative<Relu>(layer))
                {
                        kernels::relu_forward(in, out);
                }
                else
                {
                        std::copy(in.begin(), in.end(), out.begin());
                }
        }
        return activations_.back();
}

double Workspace::accumulate_gradient(
        const Parameters& params,
        const std::span<const double> input,
        const std::size_t label,
        const std::span<double> grad_accum,
        const std::span<double> logits_out)
{
        require(grad_accum.size() == params.size(), ErrorKind::structural, "gradient buffer size mismatch");
        const std::span<const double> logits = forward(params, input);
        if (!logits_out.empty())
        {
                std::copy(logits.begin(), logits.end(), logits_out.begin());
        }
        const std::size_t last = spec_->layers.size();
        const double loss = softmax_cross_entropy(logits, label, gradients_[last]);

        for (std::size_t i = last; i-- > 0;)
        {
                const std::span<const double> in = activations_[i];
                const std::span<const double> grad_out = gradients_[i + 1];
                // The input gradient is only needed below the first layer.
                const std::span<double> grad_in = i > 0 ? std::span<double>(gradients_[i]) : std::span<double>();
                std::fill(grad_in.begin(), grad_in.end(), 0.0);
                const LayerSpec& layer = spec_->layers[i];
                if (std::holds_alternative<Dense>(layer))
                {
                        const ParameterBlock& b = params.block(i);
                        kernels::dense_backward(
                                in, params.weights(i), grad_out, grad_accum.subspan(b.weight_offset, b.weight_count),
                                grad_accum.subspan(b.bias_offset, b.bias_count), grad_in);
                }
                else if (const auto* c = std::get_if<Conv1d>(&layer))
                {
                        const ParameterBlock& b = params.block(i);
                        kernels::conv1d_backward(
                                shapes_[i], in, params.weights(i), c->kernel, c->padding, shapes_[i + 1], grad_out,
                                grad_accum.subspan(b.weight_offset, b.weight_count),
                                grad_accum.subspan(b.bias_offset, b.bias_count), grad_in);
                }
                else if (i == 0)
                {
                        continue;
                }
                else if (std::holds_alternative<MaxPool1d>(layer))
                {
                        kernels::maxpool1d_backward(argmax_[i], grad_out, grad_in);
                }
                else if (std::holds_alternative<Relu>(layer))
                {
                        kernels::relu_backward(in, grad_out, grad_in);
                }
                else
                {
                        std::copy(grad_out.begin(), grad_out.end(), grad_in.begin());
                }
        }
        return loss;
}

Tensor1 forward(const NetworkSpec& spec, const Parameters& params, const std::span<const double> input)
{
        validate(params, spec);
        Workspace ws(spec);
        const std::span<const double> logits = ws.forward(params, input);
        return Tensor1::vector(logits);
}

LossAndGradients backward(
        const NetworkSpec& spec,
        const Parameters& params,
        const std::span<const double> input,
        const std::size_t label)
{
        validate(params, spec);
        Workspace ws(spec);
        LossAndGradients out;
        out.gradients.assign(params.size(), 0.0);
        out.loss = ws.accumulate_gradient(params, input, label, out.gradients);
        return out;
}

LossAndGradients backward_batch(
        const NetworkSpec& spec,
        const Parameters& params,
        const std::span<const std::span<const double>> inputs,
        const std::span<const std::size_t> labels)
{
        require(!inputs.empty() && inputs.size() == labels.size(), ErrorKind::structural,
                "batch needs matching, non-empty inputs and labels");
        validate(params, spec);
        Workspace ws(spec);
        LossAndGradients out;
        out.gradients.assign(params.size(), 0.0);
        for (std::size_t i = 0; i < inputs.size(); ++i)
        {
                out.loss += ws.accumulate_gradient(params, inputs[i], labels[i], out.gradients);
        }
        const double scale = 1.0 / static_cast<double>(inputs.size());
        out.loss *= scale;
        for (double& g : out.gradients)
        {
                g *= scale;
        }
        return out;
}
}
