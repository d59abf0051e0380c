#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace weave::nn
{
std::vector<double> softmax(std::span<const double> logits);

struct LossGradient
{
        double loss = 0;
        std::vector<double> gradient;
};

/// -log softmax(logits)[label] via log-sum-exp with max subtraction;
/// gradient = softmax(logits) - onehot(label).
LossGradient softmax_cross_entropy(std::span<const double> logits, std::size_t label);

// Writes the gradient into grad (same size as logits) and returns the loss.
double softmax_cross_entropy(std::span<const double> logits, std::size_t label, std::span<double> grad);
}
