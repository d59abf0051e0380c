#include <weave/error.h>
#include <weave/nn/loss.h>

#include <algorithm>
#include <cmath>

namespace weave::nn
{
std::vector<double> softmax(const std::span<const double> logits)
{
        require(!logits.empty(), ErrorKind::structural, "softmax of an empty vector");
        const double top = *std::max_element(logits.begin(), logits.end());
        std::vector<double> p(logits.size());
        double sum = 0;
        for (std::size_t i = 0; i < logits.size(); ++i)
        {
                p[i] = std::exp(logits[i] - top);
                sum += p[i];
        }
        for (double& v : p)
        {
                v /= sum;
        }
        return p;
}

double softmax_cross_entropy(const std::span<const double> logits, const std::size_t label, const std::span<double> grad)
{
        require(logits.size() >= 2, ErrorKind::structural, "cross entropy needs at least two classes");
        require(label < logits.size(), ErrorKind::structural, "label out of range");
        require(grad.size() == logits.size(), ErrorKind::structural, "gradient size mismatch");
        const double top = *std::max_element(logits.begin(), logits.end());
        double sum = 0;
        for (std::size_t i = 0; i < logits.size(); ++i)
        {
                grad[i] = std::exp(logits[i] - top);
                sum += grad[i];
        }
        for (double& g : grad)
        {
                g /= sum;
        }
        grad[label] -= 1;
        return std::log(sum) - (logits[label] - top);
}

LossGradient softmax_cross_entropy(const std::span<const double> logits, const std::size_t label)
{
        LossGradient out;
        out.gradient.resize(logits.size());
        out.loss = softmax_cross_entropy(logits, label, out.gradient);
        return out;
}
}
