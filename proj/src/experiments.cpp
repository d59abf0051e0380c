#include <weave/error.h>
#include <weave/experiments.h>
#include <weave/format.h>
#include <weave/nn/architectures.h>
#include <weave/random.h>

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace weave
{
std::vector<FrequencySet> builtin_frequency_sets()
{
        return {
                {.name = "omega1", .frequencies = {5, 5.5, 6}},
                {.name = "omega2", .frequencies = {5, 5.2, 5.4}},
                {.name = "omega3", .frequencies = {10, 10.2, 10.4}},
        };
}

FrequencySet builtin_frequency_set(const std::string& name, const FrequencyUnit unit)
{
        for (FrequencySet set : builtin_frequency_sets())
        {
                if (set.name == name)
                {
                        set.unit = unit;
                        return set;
                }
        }
        fail(ErrorKind::config, "unknown frequency set '" + name + "' (valid: omega1, omega2, omega3)");
}

void validate(const Protocol& protocol)
{
        require(protocol.per_class >= 1, ErrorKind::config, "per_class must be >= 1");
        require(protocol.train_fraction > 0 && protocol.train_fraction < 1, ErrorKind::config,
                "train_fraction must lie in (0, 1)");
        require(std::isfinite(protocol.dt) && protocol.dt > 0, ErrorKind::config, "dt must be > 0");
        require(std::isfinite(protocol.duration) && protocol.duration >= protocol.dt, ErrorKind::config,
                "duration must be >= dt");
        require(std::isfinite(protocol.sigma) && protocol.sigma >= 0, ErrorKind::config, "sigma must be >= 0");
        require(protocol.epochs >= 1, ErrorKind::config, "epochs must be >= 1");
        require(protocol.batch_size >= 1, ErrorKind::config, "batch_size must be >= 1");
        require(protocol.dense_learning_rate > 0 && protocol.conv_learning_rate > 0, ErrorKind::config,
                "learning rates must be > 0");
        require(protocol.jobs >= 1, ErrorKind::config, "jobs must be >= 1");
        validate(protocol.mmae);
}

const std::vector<std::string>& estimator_names()
{
        static const std::vector<std::string> names = []
        {
                std::vector<std::string> n{"MMAE"};
                const auto& archs = nn::architecture_names();
                n.insert(n.end(), archs.begin(), archs.end());
                return n;
        }();
        return names;
}

void validate_estimators(const std::vector<std::string>& estimators)
{
        require(!estimators.empty(), ErrorKind::config, "no estimators selected");
        for (const std::string& e : estimators)
        {
                const auto& valid = estimator_names();
                require(std::find(valid.begin(), valid.end(), e) != valid.end(), ErrorKind::config,
                        "unknown estimator '" + e + "' (valid: MMAE, DNN, DNN2, CNN, CNN2)");
                require(std::count(estimators.begin(), estimators.end(), e) == 1, ErrorKind::config,
                        "estimator '" + e + "' listed twice");
        }
}

namespace
{
bool is_conv(const std::string& architecture)
{
        return architecture.rfind("CNN", 0) == 0;
}

std::uint64_t point_seed(const std::uint64_t root, const std::uint64_t tag, const double condition)
{
        return derive_seed(root, tag, std::bit_cast<std::uint64_t>(condition));
}

std::string join(const std::vector<double>& values)
{
        std::string out;
        for (std::size_t i = 0; i < values.size(); ++i)
        {
                out += (i > 0 ? " " : "") + format_double(values[i]);
        }
        return out;
}

std::string join(const std::vector<std::string>& values)
{
        std::string out;
        for (std::size_t i = 0; i < values.size(); ++i)
        {
                out += (i > 0 ? " " : "") + values[i];
        }
        return out;
}

std::vector<std::pair<std::string, std::string>> protocol_metadata(
        const FrequencySet& set,
        const Protocol& p,
        const std::vector<std::string>& estimators)
{
        return {
                {"set", set.name},
                {"unit", to_string(set.unit)},
                {"frequencies", join(set.frequencies)},
                {"estimators", join(estimators)},
                {"per_class", std::to_string(p.per_class)},
                {"train_fraction", format_double(p.train_fraction)},
                {"amplitude", format_double(p.amplitude)},
                {"dt", format_double(p.dt)},
                {"mmae_phi_s", format_double(p.mmae.phi_s)},
                {"mmae_p0_scale", format_double(p.mmae.p0_scale)},
                {"mmae_min_r", format_double(p.mmae.min_r)},
                {"mmae_probability_floor", format_double(p.mmae.probability_floor)},
                {"epochs", std::to_string(p.epochs)},
                {"batch_size", std::to_string(p.batch_size)},
                {"dense_optimizer", "adagrad"},
                {"dense_learning_rate", format_double(p.dense_learning_rate)},
                {"conv_optimizer", "adam"},
                {"conv_learning_rate", format_double(p.conv_learning_rate)},
                {"pool_window", std::to_string(p.pool_window)},
                {"init", "he_uniform"},
                {"seed", std::to_string(p.seed)},
        };
}

void stamp(SweepResult& result)
{
        std::string text;
        for (const auto& [k, v] : result.metadata)
        {
                text += k + "=" + v + "\n";
        }
        const std::string hash = fingerprint_hash(text);
        result.metadata.emplace_back("fingerprint", hash);
        for (SweepRow& row : result.rows)
        {
                row.fingerprint = hash;
        }
}

// Runs task(i) for i in [0, n) on up to jobs threads; rethrows the first
// failure by index.
void parallel_for(const std::size_t n, const std::size_t jobs, const std::function<void(std::size_t)>& task)
{
        if (jobs <= 1 || n <= 1)
        {
                for (std::size_t i = 0; i < n; ++i)
                {
                        task(i);
                }
                return;
        }
        std::vector<std::exception_ptr> errors(n);
        std::atomic<std::size_t> next{0};
        {
                std::vector<std::jthread> workers;
                for (std::size_t w = 0; w < std::min(jobs, n); ++w)
                {
                        workers.emplace_back(
                                [&]
                                {
                                        for (std::size_t i = next++; i < n; i = next++)
                                        {
                                                try
                                                {
                                                        task(i);
                                                }
                                                catch (...)
                                                {
                                                        errors[i] = std::current_exception();
                                                }
                                        }
                                });
                }
        }
        for (const std::exception_ptr& e : errors)
        {
                if (e)
                {
                        std::rethrow_exception(e);
                }
        }
}

SignalParams base_params(const Protocol& p, const double sigma, const double duration)
{
        return {.amplitude = p.amplitude, .frequency = 1, .phase = 0, .noise_std = sigma, .duration = duration, .dt = p.dt};
}

SweepResult sweep(
        const FrequencySet& set,
        const std::string& condition,
        const std::vector<double>& values,
        const std::vector<SignalParams>& bases,
        const std::vector<std::string>& estimators,
        const Protocol& protocol,
        const std::uint64_t tag)
{
        validate(set);
        validate(protocol);
        validate_estimators(estimators);

        std::vector<std::vector<SweepRow>> per_point(values.size());
        const auto seed_of = [&](const double value)
        {
                return tag == 1 ? noise_point_seed(protocol, value) : length_point_seed(protocol, value);
        };
        parallel_for(
                values.size(), protocol.jobs,
                [&](const std::size_t i)
                {
                        per_point[i] = evaluate_point(
                                set, bases[i], estimators, protocol, seed_of(values[i]));
                        for (SweepRow& row : per_point[i])
                        {
                                row.condition = values[i];
                        }
                });

        SweepResult result{.condition = condition};
        result.metadata = protocol_metadata(set, protocol, estimators);
        for (std::vector<SweepRow>& rows : per_point)
        {
                result.rows.insert(result.rows.end(), rows.begin(), rows.end());
        }
        return result;
}
}

TrainConfig training_config(const Protocol& protocol, const std::string& architecture, const std::uint64_t seed)
{
        return {.epochs = protocol.epochs,
                .batch_size = protocol.batch_size,
                .optimizer = is_conv(architecture) ? nn::make_adam(protocol.conv_learning_rate)
                                                   : nn::make_adagrad(protocol.dense_learning_rate),
                .shuffle_seed = derive_seed(seed, 4, 0),
                .init_seed = derive_seed(seed, 3, 0)};
}

std::string SweepResult::fingerprint() const
{
        for (const auto& [k, v] : metadata)
        {
                if (k == "fingerprint")
                {
                        return v;
                }
        }
        return {};
}

std::vector<double> SweepResult::conditions() const
{
        std::vector<double> out;
        for (const SweepRow& r : rows)
        {
                if (std::find(out.begin(), out.end(), r.condition) == out.end())
                {
                        out.push_back(r.condition);
                }
        }
        return out;
}

std::vector<std::string> SweepResult::estimators() const
{
        std::vector<std::string> out;
        for (const SweepRow& r : rows)
        {
                if (std::find(out.begin(), out.end(), r.estimator) == out.end())
                {
                        out.push_back(r.estimator);
                }
        }
        return out;
}

const SweepRow& SweepResult::row(const double condition, const std::string& estimator) const
{
        for (const SweepRow& r : rows)
        {
                if (r.condition == condition && r.estimator == estimator)
                {
                        return r;
                }
        }
        fail(ErrorKind::structural, "no row for " + this->condition + "=" + format_double(condition) + ", " + estimator);
}

double SweepResult::accuracy(const double condition, const std::string& estimator) const
{
        return row(condition, estimator).accuracy;
}

void validate(const SweepResult& result)
{
        for (std::size_t i = 0; i < result.rows.size(); ++i)
        {
                const SweepRow& r = result.rows[i];
                if (result.quantity == "accuracy")
                {
                        require(r.accuracy >= 0 && r.accuracy <= 1, ErrorKind::data, "accuracy outside [0, 1]");
                }
                for (std::size_t j = 0; j < i; ++j)
                {
                        require(!(result.rows[j].condition == r.condition && result.rows[j].estimator == r.estimator),
                                ErrorKind::data, "duplicate row for " + r.estimator + " at " + format_double(r.condition));
                }
        }
}

std::string fingerprint_hash(const std::string& text)
{
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (const unsigned char c : text)
        {
                h ^= c;
                h *= 0x100000001b3ULL;
        }
        std::ostringstream out;
        out << std::hex;
        out.width(16);
        out.fill('0');
        out << h;
        return out.str();
}

std::uint64_t noise_point_seed(const Protocol& protocol, const double sigma)
{
        return point_seed(protocol.seed, 1, sigma);
}

std::uint64_t length_point_seed(const Protocol& protocol, const double duration)
{
        return point_seed(protocol.seed, 2, duration);
}

DatasetSplit point_split(const FrequencySet& set, const SignalParams& base, const Protocol& protocol, const std::uint64_t seed)
{
        const LabeledDataset dataset = generate_dataset(set, protocol.per_class, base, derive_seed(seed, 1, 0));
        const std::size_t total = dataset.size();
        require(total >= 2, ErrorKind::parameter, "a split needs at least two signals");
        const auto train_count = static_cast<std::size_t>(std::clamp<double>(
                std::round(protocol.train_fraction * static_cast<double>(total)), 1.0, static_cast<double>(total - 1)));
        return split_dataset(dataset, train_count, derive_seed(seed, 2, 0));
}

std::vector<SweepRow> evaluate_point(
        const FrequencySet& set,
        const SignalParams& base,
        const std::vector<std::string>& estimators,
        const Protocol& protocol,
        const std::uint64_t seed)
{
        const DatasetSplit split = point_split(set, base, protocol, seed);
        const std::size_t n_test = split.test.size();

        std::vector<SweepRow> rows;
        for (const std::string& estimator : estimators)
        {
                double accuracy = 0;
                if (estimator == "MMAE")
                {
                        MmaeConfig config = protocol.mmae;
                        config.amplitude = protocol.amplitude;
                        config.record_history = false;
                        std::size_t correct = 0;
                        for (std::size_t i = 0; i < n_test; ++i)
                        {
                                correct += run_mmae(split.test.signals[i], set, config).label == split.test.labels[i] ? 1 : 0;
                        }
                        accuracy = static_cast<double>(correct) / static_cast<double>(n_test);
                }
                else
                {
                        const nn::NetworkSpec spec =
                                nn::build_architecture(estimator, split.test.input_length(), set.size(), protocol.pool_window);
                        const TrainedModel model = train(spec, split.train, training_config(protocol, estimator, seed));
                        accuracy = evaluate_accuracy(model, split.test);
                }
                rows.push_back({.estimator = estimator, .accuracy = accuracy, .n_test = n_test});
        }
        return rows;
}

SweepResult noise_sweep(
        const FrequencySet& set,
        const std::vector<double>& sigmas,
        const std::vector<std::string>& estimators,
        const Protocol& protocol)
{
        std::vector<SignalParams> bases;
        for (const double s : sigmas)
        {
                require(std::isfinite(s) && s >= 0, ErrorKind::config, "sigma values must be >= 0");
                bases.push_back(base_params(protocol, s, protocol.duration));
        }
        SweepResult result = sweep(set, "sigma", sigmas, bases, estimators, protocol, 1);
        result.metadata.emplace_back("duration", format_double(protocol.duration));
        result.metadata.emplace_back("sigmas", join(sigmas));
        stamp(result);
        return result;
}

SweepResult length_sweep(
        const FrequencySet& set,
        const std::vector<double>& durations,
        const double sigma,
        const std::vector<std::string>& estimators,
        const Protocol& protocol)
{
        require(std::isfinite(sigma) && sigma >= 0, ErrorKind::config, "sigma must be >= 0");
        std::vector<SignalParams> bases;
        std::vector<std::string> measurements;
        for (const double d : durations)
        {
                require(std::isfinite(d) && d >= protocol.dt, ErrorKind::config, "durations must be >= dt");
                bases.push_back(base_params(protocol, sigma, d));
                // Intervals, not samples: T / dt.
                measurements.push_back(std::to_string(sample_count(d, protocol.dt) - 1));
        }
        SweepResult result = sweep(set, "duration", durations, bases, estimators, protocol, 2);
        result.metadata.emplace_back("sigma", format_double(sigma));
        result.metadata.emplace_back("durations", join(durations));
        result.metadata.emplace_back("measurements", join(measurements));
        stamp(result);
        return result;
}

SweepResult architecture_comparison(
        const FrequencySet& set,
        const std::vector<double>& sigmas,
        const std::vector<std::string>& architectures,
        const Protocol& protocol)
{
        for (const std::string& a : architectures)
        {
                require(a != "MMAE", ErrorKind::config, "architecture comparison takes network names only");
        }
        return noise_sweep(set, sigmas, architectures, protocol);
}

SweepResult accuracy_loss(const SweepResult& a, const SweepResult& b)
{
        require(a.condition == b.condition, ErrorKind::structural,
                "cannot subtract a " + b.condition + " sweep from a " + a.condition + " sweep");
        require(a.rows.size() == b.rows.size(), ErrorKind::structural, "sweeps cover different rows");
        SweepResult out{.condition = a.condition, .quantity = "accuracy_loss"};
        for (const SweepRow& ra : a.rows)
        {
                const SweepRow* match = nullptr;
                for (const SweepRow& rb : b.rows)
                {
                        if (rb.condition == ra.condition && rb.estimator == ra.estimator)
                        {
                                match = &rb;
                        }
                }
                require(match != nullptr, ErrorKind::structural,
                        "no matching row for " + ra.estimator + " at " + a.condition + "=" + format_double(ra.condition));
                out.rows.push_back(
                        {.condition = ra.condition, .estimator = ra.estimator, .accuracy = ra.accuracy - match->accuracy,
                         .n_test = ra.n_test});
        }
        out.metadata.emplace_back("minuend", a.fingerprint());
        out.metadata.emplace_back("subtrahend", b.fingerprint());
        for (const auto& [k, v] : a.metadata)
        {
                if (k == "set")
                {
                        out.metadata.emplace_back("minuend_set", v);
                }
        }
        for (const auto& [k, v] : b.metadata)
        {
                if (k == "set")
                {
                        out.metadata.emplace_back("subtrahend_set", v);
                }
        }
        stamp(out);
        return out;
}

void write_results_csv(const SweepResult& result, std::ostream& out)
{
        out << "# condition=" << result.condition << '\n';
        out << "# quantity=" << result.quantity << '\n';
        for (const auto& [k, v] : result.metadata)
        {
                out << "# " << k << '=' << v << '\n';
        }
        out << "condition,estimator,accuracy,n_test\n";
        for (const SweepRow& r : result.rows)
        {
                out << format_double(r.condition) << ',' << r.estimator << ',' << format_double(r.accuracy) << ','
                    << r.n_test << '\n';
        }
}

SweepResult read_results_csv(std::istream& in)
{
        SweepResult result;
        std::string line;
        bool header = false;
        std::size_t line_number = 0;
        while (std::getline(in, line))
        {
                ++line_number;
                const std::string_view view = trim(line);
                if (view.empty())
                {
                        continue;
                }
                if (view.front() == '#')
                {
                        const std::string_view body = trim(view.substr(1));
                        const std::size_t eq = body.find('=');
                        require(eq != std::string_view::npos, ErrorKind::data,
                                "malformed comment on line " + std::to_string(line_number));
                        const std::string key(trim(body.substr(0, eq)));
                        const std::string value(trim(body.substr(eq + 1)));
                        if (key == "condition")
                        {
                                result.condition = value;
                        }
                        else if (key == "quantity")
                        {
                                result.quantity = value;
                        }
                        else
                        {
                                result.metadata.emplace_back(key, value);
                        }
                        continue;
                }
                if (!header)
                {
                        require(view == "condition,estimator,accuracy,n_test", ErrorKind::data,
                                "results header must be condition,estimator,accuracy,n_test");
                        header = true;
                        continue;
                }
                const std::vector<std::string_view> f = split(view, ',');
                require(f.size() == 4, ErrorKind::data, "results line " + std::to_string(line_number) + " needs 4 fields");
                const double n_test = parse_double(f[3]);
                result.rows.push_back(
                        {.condition = parse_double(f[0]),
                         .estimator = std::string(trim(f[1])),
                         .accuracy = parse_double(f[2]),
                         .n_test = static_cast<std::size_t>(n_test)});
        }
        require(header, ErrorKind::data, "results file has no header line");
        const std::string fp = result.fingerprint();
        for (SweepRow& r : result.rows)
        {
                r.fingerprint = fp;
        }
        validate(result);
        return result;
}

void export_results(const SweepResult& result, const std::string& path)
{
        std::ofstream out(path);
        require(out.good(), ErrorKind::io, "cannot open '" + path + "' for writing");
        write_results_csv(result, out);
        require(out.good(), ErrorKind::io, "failed writing '" + path + "'");
}

SweepResult import_results(const std::string& path)
{
        std::ifstream in(path);
        require(in.good(), ErrorKind::data, "cannot open results '" + path + "'");
        return read_results_csv(in);
}

std::string plot_script(const SweepResult& result)
{
        const bool by_length = result.condition == "duration";
        const bool loss = result.quantity == "accuracy_loss";
        const std::string x_label = by_length ? "Signal length T [s]" : "Noise standard deviation [m]";
        const std::string y_label = loss ? "Accuracy loss" : "Accuracy";
        const std::string title = y_label + (by_length ? " vs signal length" : " vs noise standard deviation");

        std::string set_label;
        for (const auto& [k, v] : result.metadata)
        {
                if (k == "set" || k == "minuend_set")
                {
                        set_label += v;
                }
                if (k == "subtrahend_set")
                {
                        set_label += " - " + v;
                }
        }

        std::ostringstream s;
        s << "#!/usr/bin/env python3\n";
        s << "# Generated by weave. Fingerprint " << result.fingerprint() << ".\n";
        s << "import os\n\n";
        s << "import matplotlib\n\n";
        s << "matplotlib.use(\"Agg\")\n";
        s << "import matplotlib.pyplot as plt\n\n";
        s << "series = {\n";
        for (const std::string& e : result.estimators())
        {
                std::string xs;
                std::string ys;
                for (const SweepRow& r : result.rows)
                {
                        if (r.estimator == e)
                        {
                                xs += (xs.empty() ? "" : ", ") + format_double(r.condition);
                                ys += (ys.empty() ? "" : ", ") + format_double(r.accuracy);
                        }
                }
                s << "    \"" << e << "\": ([" << xs << "], [" << ys << "]),\n";
        }
        s << "}\n\n";
        s << "fig, ax = plt.subplots(figsize=(6, 4))\n";
        s << "for name, (x, y) in series.items():\n";
        s << "    ax.plot(x, y, marker=\"o\", label=name)\n";
        s << "ax.set_xlabel(\"" << x_label << "\")\n";
        s << "ax.set_ylabel(\"" << y_label << "\")\n";
        s << "ax.set_title(\"" << title << (set_label.empty() ? "" : " (" + set_label + ")") << "\")\n";
        s << "ax.grid(True)\n";
        s << "ax.legend()\n";
        s << "fig.tight_layout()\n";
        s << "fig.savefig(os.path.splitext(os.path.abspath(__file__))[0] + \".png\", dpi=150)\n";
        return s.str();
}

void emit_plot_script(const SweepResult& result, const std::string& path)
{
        std::ofstream out(path);
        require(out.good(), ErrorKind::io, "cannot open '" + path + "' for writing");
        out << plot_script(result);
        require(out.good(), ErrorKind::io, "failed writing '" + path + "'");
}

std::vector<double> default_sigma_grid()
{
        return {0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
}

std::vector<double> default_duration_grid()
{
        return {0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0};
}
}
