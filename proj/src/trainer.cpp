#include <weave/error.h>
#include <weave/format.h>
#include <weave/mmae.h>
#include <weave/nn/network.h>
#include <weave/random.h>
#include <weave/trainer.h>

#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

namespace weave
{
void validate(const TrainConfig& config)
{
        require(config.epochs >= 1, ErrorKind::config, "epochs must be >= 1");
        require(config.batch_size >= 1, ErrorKind::config, "batch_size must be >= 1");
        nn::validate(config.optimizer);
}

namespace
{
void check_inputs(const nn::NetworkSpec& spec, const LabeledDataset& dataset)
{
        require(dataset.input_length() == spec.input_length, ErrorKind::structural,
                "network '" + spec.name + "' expects " + std::to_string(spec.input_length) + " samples, dataset has "
                        + std::to_string(dataset.input_length()));
        require(dataset.set.size() == spec.num_classes, ErrorKind::structural,
                "network '" + spec.name + "' has " + std::to_string(spec.num_classes) + " outputs, dataset has "
                        + std::to_string(dataset.set.size()) + " classes");
}
}

TrainedModel train(const nn::NetworkSpec& spec, const LabeledDataset& train_set, const TrainConfig& config)
{
        validate(config);
        require(train_set.size() > 0, ErrorKind::parameter, "training set is empty");
        check_inputs(spec, train_set);

        TrainedModel model{
                .spec = spec,
                .params = nn::init_parameters(spec, config.init_seed),
                .optimizer = config.optimizer,
                .init_seed = config.init_seed};
        model.optimizer.m.clear();
        model.optimizer.v.clear();
        model.optimizer.g_sum.clear();
        model.optimizer.t = 0;

        const std::size_t n = train_set.size();
        const std::size_t per_step = std::min(n, nn::examples_per_step(model.optimizer, config.batch_size, n));
        nn::Workspace ws(model.spec);
        std::vector<double> grads(model.params.size());
        std::vector<double> logits(spec.num_classes);
        std::vector<std::size_t> order(n);

        for (std::size_t epoch = 0; epoch < config.epochs; ++epoch)
        {
                std::iota(order.begin(), order.end(), std::size_t{0});
                Rng rng(derive_seed(config.shuffle_seed, epoch, 0));
                shuffle(std::span(order), rng);

                double loss_sum = 0;
                std::size_t correct = 0;
                for (std::size_t start = 0; start < n; start += per_step)
                {
                        const std::size_t end = std::min(n, start + per_step);
                        std::fill(grads.begin(), grads.end(), 0.0);
                        for (std::size_t b = start; b < end; ++b)
                        {
                                const std::size_t i = order[b];
                                const std::size_t label = train_set.labels[i];
                                loss_sum += ws.accumulate_gradient(model.params, train_set.signals[i].samples, label, grads, logits);
                                correct += argmax(logits) == label ? 1 : 0;
                        }
                        const double scale = 1.0 / static_cast<double>(end - start);
                        for (double& g : grads)
                        {
                                g *= scale;
                        }
                        nn::optimizer_step(model.params.values, grads, model.optimizer);
                }
                const double mean_loss = loss_sum / static_cast<double>(n);
                if (!std::isfinite(mean_loss))
                {
                        fail(ErrorKind::divergence,
                             "non-finite loss in epoch " + std::to_string(epoch + 1) + " training '" + spec.name + "'");
                }
                model.train_log.push_back(
                        {.epoch = epoch + 1,
                         .mean_loss = mean_loss,
                         .train_accuracy = static_cast<double>(correct) / static_cast<double>(n)});
        }
        return model;
}

std::vector<std::size_t> predict(const nn::NetworkSpec& spec, const nn::Parameters& params, const LabeledDataset& dataset)
{
        check_inputs(spec, dataset);
        nn::validate(params, spec);
        nn::Workspace ws(spec);
        std::vector<std::size_t> out;
        out.reserve(dataset.size());
        for (const Signal& s : dataset.signals)
        {
                out.push_back(argmax(ws.forward(params, s.samples)));
        }
        return out;
}

double evaluate_accuracy(const nn::NetworkSpec& spec, const nn::Parameters& params, const LabeledDataset& test_set)
{
        require(test_set.size() > 0, ErrorKind::parameter, "test set is empty");
        const std::vector<std::size_t> predicted = predict(spec, params, test_set);
        std::size_t correct = 0;
        for (std::size_t i = 0; i < predicted.size(); ++i)
        {
                correct += predicted[i] == test_set.labels[i] ? 1 : 0;
        }
        return static_cast<double>(correct) / static_cast<double>(test_set.size());
}

double evaluate_accuracy(const TrainedModel& model, const LabeledDataset& test_set)
{
        return evaluate_accuracy(model.spec, model.params, test_set);
}

void write_train_log(const std::vector<EpochLog>& log, std::ostream& out)
{
        out << "epoch,mean_loss,train_accuracy\n";
        for (const EpochLog& e : log)
        {
                out << e.epoch << ',' << format_double(e.mean_loss) << ',' << format_double(e.train_accuracy) << '\n';
        }
}
}
