#pragma once

#include <weave/nn/network_spec.h>

#include <cstddef>
#include <string>
#include <vector>

namespace weave::nn
{
// DNN, DNN2, CNN, CNN2
const std::vector<std::string>& architecture_names();

/// Fully connected: hidden dense layers (DNN 10-20-10, DNN2 40-30-20-10), each
/// followed by relu, then dense(num_classes).
/// Convolutional: conv1d blocks (kernel 3, stride 1, same padding) with
/// 4-8-12-16 (CNN) or 4-8-...-28 (CNN2) filters, each followed by relu and,
/// when pool_window > 0, max pooling; then flatten and dense(num_classes).
NetworkSpec build_architecture(
        const std::string& name,
        std::size_t input_length,
        std::size_t num_classes = 3,
        std::size_t pool_window = 0);
}
