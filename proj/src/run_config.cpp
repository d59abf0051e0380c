#include <weave/error.h>
#include <weave/nn/architectures.h>
#include <weave/run_config.h>

#include <fstream>
#include <set>

namespace weave
{
using nlohmann::json;

namespace
{
void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed)
{
        require(j.is_object(), ErrorKind::config, where + " must be an object");
        for (const auto& [key, value] : j.items())
        {
                require(allowed.contains(key), ErrorKind::config, "unknown key '" + key + "' in " + where);
        }
}

template <typename T>
void read(const json& j, const char* key, T& target)
{
        if (j.contains(key))
        {
                target = j.at(key).get<T>();
        }
}
}

void validate(const RunConfig& config)
{
        require(config.sigma >= 0, ErrorKind::config, "sigma must be >= 0");
        validate(config.protocol);
        resolve_set(config, config.set);
        for (const double s : config.sigmas)
        {
                require(s >= 0, ErrorKind::config, "sweep sigmas must be >= 0");
        }
        for (const double d : config.durations)
        {
                require(d >= config.protocol.dt, ErrorKind::config, "sweep durations must be >= dt");
        }
        validate_estimators(config.estimators);
        validate_estimators(config.architectures);
        for (const std::string& a : config.architectures)
        {
                require(a != "MMAE", ErrorKind::config, "architectures lists networks only");
        }
        require(config.loss_sets.size() == 2, ErrorKind::config, "loss_sets needs exactly two set names");
        for (const std::string& s : config.loss_sets)
        {
                resolve_set(config, s);
        }
        require(!config.output_dir.empty(), ErrorKind::config, "output_dir must not be empty");
}

json to_json(const RunConfig& c)
{
        const Protocol& p = c.protocol;
        return {
                {"schema_version", RunConfig::schema_version},
                {"set", c.set},
                {"frequency_unit", to_string(c.frequency_unit)},
                {"custom_frequencies", c.custom_frequencies},
                {"signal", {{"amplitude", p.amplitude}, {"sigma", c.sigma}, {"duration", p.duration}, {"dt", p.dt}}},
                {"dataset", {{"per_class", p.per_class}, {"train_fraction", p.train_fraction}}},
                {"kalman",
                 {{"phi_s", p.mmae.phi_s},
                  {"p0_scale", p.mmae.p0_scale},
                  {"min_r", p.mmae.min_r},
                  {"probability_floor", p.mmae.probability_floor}}},
                {"training",
                 {{"epochs", p.epochs},
                  {"batch_size", p.batch_size},
                  {"dense_learning_rate", p.dense_learning_rate},
                  {"conv_learning_rate", p.conv_learning_rate},
                  {"pool_window", p.pool_window}}},
                {"sweep",
                 {{"sigmas", c.sigmas},
                  {"durations", c.durations},
                  {"estimators", c.estimators},
                  {"architectures", c.architectures},
                  {"loss_sets", c.loss_sets}}},
                {"output_dir", c.output_dir},
                {"seed", p.seed},
                {"jobs", p.jobs},
        };
}

RunConfig run_config_from_json(const json& j)
{
        RunConfig c;
        Protocol& p = c.protocol;
        try
        {
                check_keys(
                        j, "config",
                        {"schema_version", "set", "frequency_unit", "custom_frequencies", "signal", "dataset", "kalman",
                         "training", "sweep", "output_dir", "seed", "jobs"});
                require(j.value("schema_version", RunConfig::schema_version) == RunConfig::schema_version,
                        ErrorKind::config, "unsupported schema_version");
                read(j, "set", c.set);
                if (j.contains("frequency_unit"))
                {
                        c.frequency_unit = parse_frequency_unit(j.at("frequency_unit").get<std::string>());
                }
                read(j, "custom_frequencies", c.custom_frequencies);
                if (j.contains("signal"))
                {
                        const json& s = j.at("signal");
                        check_keys(s, "signal", {"amplitude", "sigma", "duration", "dt"});
                        read(s, "amplitude", p.amplitude);
                        read(s, "sigma", c.sigma);
                        read(s, "duration", p.duration);
                        read(s, "dt", p.dt);
                }
                if (j.contains("dataset"))
                {
                        const json& d = j.at("dataset");
                        check_keys(d, "dataset", {"per_class", "train_fraction"});
                        read(d, "per_class", p.per_class);
                        read(d, "train_fraction", p.train_fraction);
                }
                if (j.contains("kalman"))
                {
                        const json& k = j.at("kalman");
                        check_keys(k, "kalman", {"phi_s", "p0_scale", "min_r", "probability_floor"});
                        read(k, "phi_s", p.mmae.phi_s);
                        read(k, "p0_scale", p.mmae.p0_scale);
                        read(k, "min_r", p.mmae.min_r);
                        read(k, "probability_floor", p.mmae.probability_floor);
                }
                if (j.contains("training"))
                {
                        const json& t = j.at("training");
                        check_keys(
                                t, "training",
                                {"epochs", "batch_size", "dense_learning_rate", "conv_learning_rate", "pool_window"});
                        read(t, "epochs", p.epochs);
                        read(t, "batch_size", p.batch_size);
                        read(t, "dense_learning_rate", p.dense_learning_rate);
                        read(t, "conv_learning_rate", p.conv_learning_rate);
                        read(t, "pool_window", p.pool_window);
                }
                if (j.contains("sweep"))
                {
                        const json& s = j.at("sweep");
                        check_keys(s, "sweep", {"sigmas", "durations", "estimators", "architectures", "loss_sets"});
                        read(s, "sigmas", c.sigmas);
                        read(s, "durations", c.durations);
                        read(s, "estimators", c.estimators);
                        read(s, "architectures", c.architectures);
                        read(s, "loss_sets", c.loss_sets);
                }
                read(j, "output_dir", c.output_dir);
                read(j, "seed", p.seed);
                read(j, "jobs", p.jobs);
        }
        catch (const json::exception& e)
        {
                fail(ErrorKind::config, std::string("bad config value: ") + e.what());
        }
        validate(c);
        return c;
}

RunConfig load_run_config(const std::string& path)
{
        std::ifstream in(path);
        require(in.good(), ErrorKind::config, "cannot open config '" + path + "'");
        json j;
        try
        {
                in >> j;
        }
        catch (const json::exception& e)
        {
                fail(ErrorKind::config, "config '" + path + "' is not valid JSON: " + e.what());
        }
        return run_config_from_json(j);
}

FrequencySet resolve_set(const RunConfig& config, const std::string& name)
{
        if (name == "custom")
        {
                FrequencySet set{.name = "custom", .frequencies = config.custom_frequencies, .unit = config.frequency_unit};
                try
                {
                        validate(set);
                }
                catch (const Error& e)
                {
                        fail(ErrorKind::config, e.detail());
                }
                return set;
        }
        return builtin_frequency_set(name, config.frequency_unit);
}

std::string config_fingerprint(const RunConfig& config)
{
        json j = to_json(config);
        // Neither affects any result.
        j.erase("output_dir");
        j.erase("jobs");
        return fingerprint_hash(j.dump());
}
}
