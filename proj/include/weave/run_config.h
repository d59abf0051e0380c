#pragma once

#include <weave/experiments.h>
#include <weave/signal.h>

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace weave
{
/// Complete configuration of a CLI invocation. Serialized as JSON with a
/// schema_version field; unknown keys are rejected.
struct RunConfig
{
        static constexpr int schema_version = 1;

        // omega1, omega2, omega3 or custom
        std::string set = "omega1";
        FrequencyUnit frequency_unit = FrequencyUnit::radians_per_second;
        std::vector<double> custom_frequencies;

        double sigma = 0.3;
        Protocol protocol;

        std::vector<double> sigmas = default_sigma_grid();
        std::vector<double> durations = default_duration_grid();
        std::vector<std::string> estimators{"DNN", "MMAE"};
        std::vector<std::string> architectures{"DNN", "DNN2", "CNN", "CNN2"};
        std::vector<std::string> loss_sets{"omega1", "omega2"};

        std::string output_dir = "out";
};

void validate(const RunConfig& config);

nlohmann::json to_json(const RunConfig& config);
// Missing keys keep their defaults; unknown keys and wrong types are config errors.
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

// Resolves a set name (builtin or "custom") with the configured unit.
FrequencySet resolve_set(const RunConfig& config, const std::string& name);

// Hash of the canonical JSON form.
std::string config_fingerprint(const RunConfig& config);
}
