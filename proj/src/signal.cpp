#include <weave/error.h>
#include <weave/format.h>
#include <weave/random.h>
#include <weave/signal.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace weave
{
namespace
{
bool finite_all(const std::vector<double>& values)
{
        return std::all_of(
                values.begin(), values.end(),
                [](const double v)
                {
                        return std::isfinite(v);
                });
}
}

void validate(const SignalParams& params)
{
        const auto check = [](const bool ok, const std::string& what)
        {
                require(ok, ErrorKind::parameter, "signal parameters: " + what);
        };
        check(std::isfinite(params.amplitude), "amplitude must be finite");
        check(std::isfinite(params.phase), "phase must be finite");
        check(std::isfinite(params.frequency) && params.frequency > 0, "frequency must be > 0");
        check(std::isfinite(params.duration) && params.duration > 0, "duration must be > 0");
        check(std::isfinite(params.dt) && params.dt > 0, "dt must be > 0");
        check(params.dt <= params.duration, "dt must not exceed duration");
        check(std::isfinite(params.noise_std) && params.noise_std >= 0, "noise_std must be >= 0");
}

std::size_t sample_count(const double duration, const double dt)
{
        const double ratio = duration / dt;
        const double nearest = std::round(ratio);
        const double intervals =
                std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio) ? nearest : std::floor(ratio);
        return static_cast<std::size_t>(intervals) + 1;
}

Signal generate_signal(const SignalParams& params)
{
        validate(params);
        const std::size_t n = sample_count(params.duration, params.dt);
        Signal signal{.samples = std::vector<double>(n), .params = params};
        Rng rng(params.seed);
        for (std::size_t k = 0; k < n; ++k)
        {
                const double t = static_cast<double>(k) * params.dt;
                const double noise = params.noise_std > 0 ? params.noise_std * rng.gaussian() : 0.0;
                signal.samples[k] = params.amplitude * std::sin(params.frequency * t + params.phase) + noise;
        }
        return signal;
}

const char* to_string(const FrequencyUnit unit)
{
        return unit == FrequencyUnit::hertz ? "hz" : "rad_per_s";
}

FrequencyUnit parse_frequency_unit(const std::string& text)
{
        if (text == "hz")
        {
                return FrequencyUnit::hertz;
        }
        if (text == "rad_per_s" || text == "rad")
        {
                return FrequencyUnit::radians_per_second;
        }
        fail(ErrorKind::config, "unknown frequency unit '" + text + "' (expected hz or rad_per_s)");
}

double FrequencySet::angular(const std::size_t i) const
{
        const double value = frequencies.at(i);
        return unit == FrequencyUnit::hertz ? 2 * std::numbers::pi * value : value;
}

void validate(const FrequencySet& set)
{
        require(set.frequencies.size() >= 2, ErrorKind::parameter,
                "frequency set '" + set.name + "' needs at least two frequencies");
        for (std::size_t i = 0; i < set.frequencies.size(); ++i)
        {
                require(std::isfinite(set.frequencies[i]) && set.frequencies[i] > 0, ErrorKind::parameter,
                        "frequency set '" + set.name + "' has a non-positive frequency");
                require(i == 0 || set.frequencies[i] > set.frequencies[i - 1], ErrorKind::parameter,
                        "frequency set '" + set.name + "' must be strictly increasing");
        }
}

std::size_t LabeledDataset::input_length() const
{
        return signals.empty() ? 0 : signals.front().samples.size();
}

void validate(const LabeledDataset& dataset)
{
        validate(dataset.set);
        require(dataset.signals.size() == dataset.labels.size(), ErrorKind::data,
                "dataset signal and label counts differ");
        for (std::size_t i = 0; i < dataset.size(); ++i)
        {
                const Signal& s = dataset.signals[i];
                require(dataset.labels[i] < dataset.set.size(), ErrorKind::data,
                        "label out of range at row " + std::to_string(i));
                require(s.samples.size() == dataset.input_length(), ErrorKind::data,
                        "signals differ in length at row " + std::to_string(i));
                require(s.params.dt == dataset.signals.front().params.dt, ErrorKind::data,
                        "signals differ in dt at row " + std::to_string(i));
                require(finite_all(s.samples), ErrorKind::data, "non-finite sample at row " + std::to_string(i));
        }
}

LabeledDataset generate_dataset(
        const FrequencySet& set,
        const std::size_t per_class,
        const SignalParams& base,
        const std::uint64_t seed)
{
        validate(set);
        require(per_class >= 1, ErrorKind::parameter, "per_class must be >= 1");

        LabeledDataset dataset;
        dataset.set = set;
        dataset.signals.reserve(per_class * set.size());
        dataset.labels.reserve(per_class * set.size());
        for (std::size_t c = 0; c < set.size(); ++c)
        {
                for (std::size_t j = 0; j < per_class; ++j)
                {
                        SignalParams params = base;
                        params.frequency = set.angular(c);
                        params.phase = 0;
                        params.seed = derive_seed(seed, c, j);
                        dataset.signals.push_back(generate_signal(params));
                        dataset.labels.push_back(c);
                }
        }
        return dataset;
}

DatasetSplit split_dataset(const LabeledDataset& dataset, const std::size_t train_count, const std::uint64_t seed)
{
        const std::size_t total = dataset.size();
        require(train_count > 0 && train_count < total, ErrorKind::parameter,
                "train_count must lie in (0, " + std::to_string(total) + ")");

        const std::size_t classes = dataset.set.size();
        std::vector<std::vector<std::size_t>> members(classes);
        for (std::size_t i = 0; i < total; ++i)
        {
                members.at(dataset.labels[i]).push_back(i);
        }

        // largest-remainder apportionment of train_count over classes
        std::vector<std::size_t> quota(classes);
        std::vector<std::pair<double, std::size_t>> remainders;
        std::size_t assigned = 0;
        for (std::size_t c = 0; c < classes; ++c)
        {
                const double exact = static_cast<double>(train_count) * static_cast<double>(members[c].size())
                                     / static_cast<double>(total);
                quota[c] = static_cast<std::size_t>(std::floor(exact));
                assigned += quota[c];
                remainders.emplace_back(exact - std::floor(exact), c);
        }
        std::stable_sort(
                remainders.begin(), remainders.end(),
                [](const auto& a, const auto& b)
                {
                        return a.first > b.first;
                });
        for (std::size_t r = 0; assigned < train_count; ++r)
        {
                const std::size_t c = remainders[r % classes].second;
                if (quota[c] < members[c].size())
                {
                        ++quota[c];
                        ++assigned;
                }
        }

        std::vector<std::size_t> train_indices;
        std::vector<std::size_t> test_indices;
        for (std::size_t c = 0; c < classes; ++c)
        {
                Rng rng(derive_seed(seed, c, 0));
                shuffle(std::span(members[c]), rng);
                train_indices.insert(train_indices.end(), members[c].begin(), members[c].begin() + quota[c]);
                test_indices.insert(test_indices.end(), members[c].begin() + quota[c], members[c].end());
        }
        Rng train_rng(derive_seed(seed, classes, 1));
        shuffle(std::span(train_indices), train_rng);
        Rng test_rng(derive_seed(seed, classes, 2));
        shuffle(std::span(test_indices), test_rng);

        const auto gather = [&](const std::vector<std::size_t>& indices)
        {
                LabeledDataset part;
                part.set = dataset.set;
                part.signals.reserve(indices.size());
                part.labels.reserve(indices.size());
                for (const std::size_t i : indices)
                {
                        part.signals.push_back(dataset.signals[i]);
                        part.labels.push_back(dataset.labels[i]);
                }
                return part;
        };
        return {.train = gather(train_indices), .test = gather(test_indices)};
}

void write_dataset_csv(const LabeledDataset& dataset, std::ostream& out)
{
        out << "# set=" << dataset.set.name << '\n';
        out << "# unit=" << to_string(dataset.set.unit) << '\n';
        out << "# frequencies=";
        for (std::size_t i = 0; i < dataset.set.size(); ++i)
        {
                out << (i > 0 ? " " : "") << format_double(dataset.set.frequencies[i]);
        }
        out << '\n';
        if (!dataset.signals.empty())
        {
                out << "# amplitude=" << format_double(dataset.signals.front().params.amplitude) << '\n';
        }
        out << "label,freq_hz,sigma,dt";
        for (std::size_t k = 0; k < dataset.input_length(); ++k)
        {
                out << ",s" << k;
        }
        out << '\n';
        for (std::size_t i = 0; i < dataset.size(); ++i)
        {
                const Signal& s = dataset.signals[i];
                out << dataset.labels[i] << ',' << format_double(s.params.frequency / (2 * std::numbers::pi)) << ','
                    << format_double(s.params.noise_std) << ',' << format_double(s.params.dt);
                for (const double v : s.samples)
                {
                        out << ',' << format_double(v);
                }
                out << '\n';
        }
}

LabeledDataset read_dataset_csv(std::istream& in)
{
        LabeledDataset dataset;
        double amplitude = 1;
        bool have_frequencies = false;
        std::string line;
        std::size_t line_number = 0;
        std::size_t columns = 0;
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
                        if (eq == std::string_view::npos)
                        {
                                continue;
                        }
                        const std::string key(trim(body.substr(0, eq)));
                        const std::string_view value = trim(body.substr(eq + 1));
                        if (key == "set")
                        {
                                dataset.set.name = std::string(value);
                        }
                        else if (key == "unit")
                        {
                                dataset.set.unit = parse_frequency_unit(std::string(value));
                        }
                        else if (key == "frequencies")
                        {
                                for (const std::string_view f : split(value, ' '))
                                {
                                        if (!trim(f).empty())
                                        {
                                                dataset.set.frequencies.push_back(parse_double(f));
                                        }
                                }
                                have_frequencies = true;
                        }
                        else if (key == "amplitude")
                        {
                                amplitude = parse_double(value);
                        }
                        continue;
                }
                const std::vector<std::string_view> fields = split(view, ',');
                if (columns == 0)
                {
                        require(fields.size() >= 5 && trim(fields[0]) == "label" && trim(fields[1]) == "freq_hz",
                                ErrorKind::data, "dataset header must start with label,freq_hz,sigma,dt,s0");
                        columns = fields.size();
                        continue;
                }
                require(fields.size() == columns, ErrorKind::data,
                        "dataset line " + std::to_string(line_number) + " has " + std::to_string(fields.size())
                                + " fields, expected " + std::to_string(columns));
                const double label = parse_double(fields[0]);
                require(label >= 0 && label == std::floor(label), ErrorKind::data,
                        "bad label on line " + std::to_string(line_number));
                Signal signal;
                signal.params.amplitude = amplitude;
                signal.params.frequency = 2 * std::numbers::pi * parse_double(fields[1]);
                signal.params.noise_std = parse_double(fields[2]);
                signal.params.dt = parse_double(fields[3]);
                signal.samples.reserve(columns - 4);
                for (std::size_t k = 4; k < columns; ++k)
                {
                        signal.samples.push_back(parse_double(fields[k]));
                }
                signal.params.duration = static_cast<double>(signal.samples.size() - 1) * signal.params.dt;
                dataset.labels.push_back(static_cast<std::size_t>(label));
                dataset.signals.push_back(std::move(signal));
        }
        require(columns > 0, ErrorKind::data, "dataset has no header line");

        if (!have_frequencies)
        {
                // Recover the set from the per-row frequencies.
                std::size_t classes = 0;
                for (const std::size_t l : dataset.labels)
                {
                        classes = std::max(classes, l + 1);
                }
                dataset.set.unit = FrequencyUnit::hertz;
                dataset.set.frequencies.assign(classes, 0.0);
                for (std::size_t i = 0; i < dataset.size(); ++i)
                {
                        dataset.set.frequencies[dataset.labels[i]] =
                                dataset.signals[i].params.frequency / (2 * std::numbers::pi);
                }
        }
        else
        {
                for (std::size_t i = 0; i < dataset.size(); ++i)
                {
                        if (dataset.labels[i] < dataset.set.size())
                        {
                                dataset.signals[i].params.frequency = dataset.set.angular(dataset.labels[i]);
                        }
                }
        }
        validate(dataset);
        return dataset;
}

void save_dataset(const LabeledDataset& dataset, const std::string& path)
{
        std::ofstream out(path);
        require(out.good(), ErrorKind::io, "cannot open '" + path + "' for writing");
        write_dataset_csv(dataset, out);
        require(out.good(), ErrorKind::io, "failed writing '" + path + "'");
}

LabeledDataset load_dataset(const std::string& path)
{
        std::ifstream in(path);
        require(in.good(), ErrorKind::data, "cannot open dataset '" + path + "'");
        try
        {
                return read_dataset_csv(in);
        }
        catch (const Error& e)
        {
                fail(e.kind(), e.detail() + " (in '" + path + "')");
        }
}
}
