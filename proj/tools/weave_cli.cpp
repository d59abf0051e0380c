// weave: generate sine-wave datasets, train classifiers, run the MMAE bank and
// accuracy sweeps.
//
//   weave gen-data [--set omega1] [--sigma 0.3] [--duration 1] [--out DIR]
//   weave train --arch DNN [--data train.csv]
//   weave eval --model models/DNN-....json --data test.csv
//   weave eval --model mmae --data test.csv [--trace trace.csv]
//   weave sweep noise|length|arch|loss
//
// Exit status: 0 success, 2 config error, 3 data error, 4 numeric failure.

#include <weave/error.h>
#include <weave/experiments.h>
#include <weave/mmae.h>
#include <weave/nn/architectures.h>
#include <weave/nn/model_io.h>
#include <weave/run_config.h>
#include <weave/trainer.h>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;

namespace
{
struct Options
{
        std::string config_path;
        std::optional<std::string> set;
        std::optional<double> sigma;
        std::optional<double> duration;
        std::optional<std::string> arch;
        std::optional<std::uint64_t> seed;
        std::optional<std::size_t> jobs;
        std::optional<std::string> units;
        std::optional<std::string> out;
        bool fast = false;
        bool force = false;

        std::string data;
        std::string model;
        std::string trace;
        std::string sweep_kind;
};

void add_common(CLI::App* cmd, Options& o)
{
        cmd->add_option("--config", o.config_path, "JSON run configuration");
        cmd->add_option("--set", o.set, "Frequency set: omega1, omega2, omega3 or custom");
        cmd->add_option("--sigma", o.sigma, "Measurement noise standard deviation [m]");
        cmd->add_option("--duration", o.duration, "Signal length T [s]");
        cmd->add_option("--seed", o.seed, "Root seed");
        cmd->add_option("--jobs", o.jobs, "Sweep points evaluated in parallel");
        cmd->add_option("--units", o.units, "Interpretation of set values: hz or rad_per_s");
        cmd->add_option("--out", o.out, "Output directory");
        cmd->add_flag("--fast", o.fast, "300 signals per class instead of 3000");
        cmd->add_flag("--force", o.force, "Overwrite existing outputs");
}

int exit_code(const weave::ErrorKind kind)
{
        switch (kind)
        {
        case weave::ErrorKind::config:
        case weave::ErrorKind::parameter:
                return 2;
        case weave::ErrorKind::data:
        case weave::ErrorKind::io:
        case weave::ErrorKind::structural:
                return 3;
        case weave::ErrorKind::numeric:
        case weave::ErrorKind::invariant:
        case weave::ErrorKind::divergence:
                return 4;
        }
        return 1;
}

weave::RunConfig make_config(const Options& o)
{
        weave::RunConfig c = o.config_path.empty() ? weave::RunConfig{} : weave::load_run_config(o.config_path);
        if (o.set)
        {
                c.set = *o.set;
        }
        if (o.sigma)
        {
                c.sigma = *o.sigma;
        }
        if (o.duration)
        {
                c.protocol.duration = *o.duration;
        }
        if (o.seed)
        {
                c.protocol.seed = *o.seed;
        }
        if (o.jobs)
        {
                c.protocol.jobs = *o.jobs;
        }
        if (o.units)
        {
                c.frequency_unit = weave::parse_frequency_unit(*o.units);
        }
        if (o.out)
        {
                c.output_dir = *o.out;
        }
        if (o.fast)
        {
                c.protocol.per_class = 300;
        }
        if (o.arch)
        {
                c.estimators = {*o.arch};
        }
        weave::validate(c);
        return c;
}

fs::path output_file(const weave::RunConfig& c, const std::string& sub, const std::string& name, const bool force)
{
        const fs::path dir = fs::path(c.output_dir) / sub;
        std::error_code ec;
        fs::create_directories(dir, ec);
        weave::require(!ec, weave::ErrorKind::io, "cannot create '" + dir.string() + "': " + ec.message());
        const fs::path path = dir / name;
        weave::require(force || !fs::exists(path), weave::ErrorKind::io,
                       "'" + path.string() + "' exists; pass --force to overwrite");
        return path;
}

std::string short_fp(const weave::RunConfig& c)
{
        return weave::config_fingerprint(c).substr(0, 12);
}

// Same seeds as the noise-sweep point at this sigma, so gen-data, train and
// eval reproduce the corresponding `sweep noise` row.
std::uint64_t point_seed(const weave::RunConfig& c)
{
        return weave::noise_point_seed(c.protocol, c.sigma);
}

weave::DatasetSplit generate_split(const weave::RunConfig& c)
{
        const weave::FrequencySet set = weave::resolve_set(c, c.set);
        const weave::Protocol& p = c.protocol;
        const weave::SignalParams base{
                .amplitude = p.amplitude, .noise_std = c.sigma, .duration = p.duration, .dt = p.dt};
        return weave::point_split(set, base, p, point_seed(c));
}

int cmd_gen_data(const Options& o)
{
        const weave::RunConfig c = make_config(o);
        const weave::DatasetSplit split = generate_split(c);
        const std::string stem = c.set + "-" + short_fp(c);
        const fs::path train_path = output_file(c, "datasets", stem + "-train.csv", o.force);
        const fs::path test_path = output_file(c, "datasets", stem + "-test.csv", o.force);
        weave::save_dataset(split.train, train_path.string());
        weave::save_dataset(split.test, test_path.string());
        std::cout << "train " << split.train.size() << " signals -> " << train_path.string() << '\n';
        std::cout << "test  " << split.test.size() << " signals -> " << test_path.string() << '\n';
        return 0;
}

int cmd_train(const Options& o)
{
        weave::require(o.arch.has_value(), weave::ErrorKind::config, "train needs --arch (valid: DNN, DNN2, CNN, CNN2)");
        const weave::RunConfig c = make_config(o);
        const std::string arch = *o.arch;
        weave::require(arch != "MMAE", weave::ErrorKind::config,
                       "MMAE needs no training (valid architectures: DNN, DNN2, CNN, CNN2)");

        const weave::LabeledDataset train_set = o.data.empty() ? generate_split(c).train : weave::load_dataset(o.data);
        const weave::nn::NetworkSpec spec = weave::nn::build_architecture(
                arch, train_set.input_length(), train_set.set.size(), c.protocol.pool_window);
        const weave::TrainConfig tc = weave::training_config(c.protocol, arch, point_seed(c));
        const weave::TrainedModel model = weave::train(spec, train_set, tc);

        const std::string stem = arch + "-" + short_fp(c);
        const fs::path model_path = output_file(c, "models", stem + ".json", o.force);
        const fs::path log_path = output_file(c, "models", stem + "-log.csv", o.force);
        weave::nn::ModelFile file{
                .spec = model.spec,
                .params = model.params,
                .seed = model.init_seed,
                .optimizer = model.optimizer,
                .metadata = {{"fingerprint", weave::config_fingerprint(c)},
                             {"epochs", tc.epochs},
                             {"batch_size", tc.batch_size},
                             {"shuffle_seed", tc.shuffle_seed},
                             {"training_data", o.data.empty() ? std::string("generated") : o.data}}};
        weave::nn::save_model(file, model_path.string());
        std::ofstream log(log_path);
        weave::write_train_log(model.train_log, log);
        weave::require(log.good(), weave::ErrorKind::io, "failed writing '" + log_path.string() + "'");

        const weave::EpochLog& last = model.train_log.back();
        std::cout << arch << ": " << model.train_log.size() << " epochs, final loss " << last.mean_loss
                  << ", train accuracy " << last.train_accuracy << '\n';
        std::cout << "model -> " << model_path.string() << '\n' << "log   -> " << log_path.string() << '\n';
        return 0;
}

int cmd_eval(const Options& o)
{
        weave::require(!o.data.empty(), weave::ErrorKind::config, "eval needs --data");
        weave::require(!o.model.empty(), weave::ErrorKind::config, "eval needs --model PATH or --model mmae");
        const weave::RunConfig c = make_config(o);
        const weave::LabeledDataset data = weave::load_dataset(o.data);

        if (o.model == "mmae" || o.model == "MMAE")
        {
                weave::MmaeConfig mc = c.protocol.mmae;
                mc.amplitude = data.signals.empty() ? 1.0 : data.signals.front().params.amplitude;
                std::size_t correct = 0;
                for (std::size_t i = 0; i < data.size(); ++i)
                {
                        const weave::MmaeRun run = weave::run_mmae(data.signals[i], data.set, mc);
                        correct += run.label == data.labels[i] ? 1 : 0;
                        if (i == 0 && !o.trace.empty())
                        {
                                weave::require(o.force || !fs::exists(o.trace), weave::ErrorKind::io,
                                               "'" + o.trace + "' exists; pass --force to overwrite");
                                std::ofstream trace(o.trace);
                                weave::write_probability_trace(run, trace);
                                weave::require(trace.good(), weave::ErrorKind::io, "failed writing '" + o.trace + "'");
                        }
                        if (data.size() == 1)
                        {
                                std::cout << "class " << run.label << " (true " << data.labels[i] << ")\n";
                                weave::write_probability_trace(run, std::cout);
                        }
                }
                std::cout << "estimator=MMAE accuracy=" << static_cast<double>(correct) / static_cast<double>(data.size())
                          << " n_test=" << data.size() << '\n';
                return 0;
        }

        const weave::nn::ModelFile model = weave::nn::load_model(o.model);
        const double accuracy = weave::evaluate_accuracy(model.spec, model.params, data);
        std::cout << "estimator=" << model.spec.name << " accuracy=" << accuracy << " n_test=" << data.size() << '\n';
        return 0;
}

int cmd_sweep(const Options& o)
{
        const weave::RunConfig c = make_config(o);
        const weave::Protocol& p = c.protocol;
        weave::SweepResult result;
        std::string label = c.set;
        if (o.sweep_kind == "noise")
        {
                result = weave::noise_sweep(weave::resolve_set(c, c.set), c.sigmas, c.estimators, p);
        }
        else if (o.sweep_kind == "length")
        {
                result = weave::length_sweep(weave::resolve_set(c, c.set), c.durations, c.sigma, c.estimators, p);
        }
        else if (o.sweep_kind == "arch")
        {
                result = weave::architecture_comparison(weave::resolve_set(c, c.set), c.sigmas, c.architectures, p);
        }
        else if (o.sweep_kind == "loss")
        {
                const weave::SweepResult a =
                        weave::noise_sweep(weave::resolve_set(c, c.loss_sets[0]), c.sigmas, c.estimators, p);
                const weave::SweepResult b =
                        weave::noise_sweep(weave::resolve_set(c, c.loss_sets[1]), c.sigmas, c.estimators, p);
                result = weave::accuracy_loss(a, b);
                label = c.loss_sets[0] + "-" + c.loss_sets[1];
        }
        else
        {
                weave::fail(weave::ErrorKind::config, "unknown sweep kind '" + o.sweep_kind + "' (valid: noise, length, arch, loss)");
        }
        result.metadata.emplace_back("config_fingerprint", weave::config_fingerprint(c));

        const std::string stem = o.sweep_kind + "-" + label + "-" + short_fp(c);
        const fs::path csv = output_file(c, "results", stem + ".csv", o.force);
        const fs::path script = output_file(c, "results", stem + ".py", o.force);
        weave::export_results(result, csv.string());
        weave::emit_plot_script(result, script.string());

        weave::write_results_csv(result, std::cout);
        std::cout << "results -> " << csv.string() << '\n' << "plot    -> " << script.string() << '\n';
        return 0;
}
}

int main(int argc, char** argv)
{
        CLI::App app{"Frequency classification of noisy sine-wave trajectories"};
        app.require_subcommand(1);
        Options o;

        CLI::App* gen = app.add_subcommand("gen-data", "Generate and split a labeled dataset");
        add_common(gen, o);

        CLI::App* train = app.add_subcommand("train", "Train a network architecture");
        add_common(train, o);
        train->add_option("--arch", o.arch, "DNN, DNN2, CNN or CNN2");
        train->add_option("--data", o.data, "Training dataset CSV (generated from the config when omitted)");

        CLI::App* eval = app.add_subcommand("eval", "Score a model file or the MMAE bank on a dataset");
        add_common(eval, o);
        eval->add_option("--model", o.model, "Model JSON path, or 'mmae'");
        eval->add_option("--data", o.data, "Dataset CSV");
        eval->add_option("--trace", o.trace, "MMAE probability trace CSV for the first signal");

        CLI::App* sweep = app.add_subcommand("sweep", "Run an accuracy sweep");
        add_common(sweep, o);
        sweep->add_option("kind", o.sweep_kind, "noise, length, arch or loss")->required();
        sweep->add_option("--arch", o.arch, "Restrict the estimators to one network");

        try
        {
                app.parse(argc, argv);
        }
        catch (const CLI::ParseError& e)
        {
                const int code = app.exit(e);
                return code == 0 ? 0 : 2;
        }

        try
        {
                if (gen->parsed())
                {
                        return cmd_gen_data(o);
                }
                if (train->parsed())
                {
                        return cmd_train(o);
                }
                if (eval->parsed())
                {
                        return cmd_eval(o);
                }
                return cmd_sweep(o);
        }
        catch (const weave::Error& e)
        {
                std::cerr << "weave: " << e.what() << '\n';
                return exit_code(e.kind());
        }
        catch (const std::exception& e)
        {
                std::cerr << "weave: " << e.what() << '\n';
                return 3;
        }
}
