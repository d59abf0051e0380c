#pragma once

#include <weave/nn/network_spec.h>
#include <weave/nn/optimizer.h>
#include <weave/nn/parameters.h>
#include <weave/signal.h>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace weave
{
struct TrainConfig
{
        std::size_t epochs = 30;
        std::size_t batch_size = 32;
        nn::OptimizerState optimizer = nn::make_adagrad(0.01);
        std::uint64_t shuffle_seed = 0;
        std::uint64_t init_seed = 0;
};

void validate(const TrainConfig& config);

struct EpochLog
{
        std::size_t epoch = 0;
        double mean_loss = 0;
        // Fraction of examples whose logits (taken just before the update of
        // their batch) put the true class first.
        double train_accuracy = 0;
};

struct TrainedModel
{
        nn::NetworkSpec spec;
        nn::Parameters params;
        std::vector<EpochLog> train_log;
        nn::OptimizerState optimizer;
        std::uint64_t init_seed = 0;
};

/// Mini-batch training with softmax cross-entropy. Each epoch visits the
/// training set in an order shuffled by Rng(derive_seed(shuffle_seed, epoch, 0));
/// each batch's mean gradient is handed to the optimizer. Deterministic given
/// the config. Throws divergence on a non-finite loss.
TrainedModel train(const nn::NetworkSpec& spec, const LabeledDataset& train_set, const TrainConfig& config);

// Argmax of the logits for every signal (ties to the lowest index).
std::vector<std::size_t> predict(const nn::NetworkSpec& spec, const nn::Parameters& params, const LabeledDataset& dataset);

double evaluate_accuracy(const TrainedModel& model, const LabeledDataset& test_set);
double evaluate_accuracy(const nn::NetworkSpec& spec, const nn::Parameters& params, const LabeledDataset& test_set);

// epoch,mean_loss,train_accuracy
void write_train_log(const std::vector<EpochLog>& log, std::ostream& out);
}
