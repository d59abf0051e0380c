#pragma once

#include <weave/nn/network_spec.h>
#include <weave/nn/optimizer.h>
#include <weave/nn/parameters.h>

#include <json.hpp>

#include <cstdint>
#include <string>

namespace weave::nn
{
nlohmann::json spec_to_json(const NetworkSpec& spec);
NetworkSpec spec_from_json(const nlohmann::json& j);

// Hyperparameters only; accumulators are not stored.
nlohmann::json optimizer_to_json(const OptimizerState& opt);
OptimizerState optimizer_from_json(const nlohmann::json& j);

struct ModelFile
{
        NetworkSpec spec;
        Parameters params;
        std::uint64_t seed = 0;
        OptimizerState optimizer;
        // Free-form run metadata (fingerprint, training settings).
        nlohmann::json metadata = nlohmann::json::object();
};

/// {"format": "weave-model", "version": 1, "spec": ..., "seed": ...,
///  "init": "he_uniform", "layers": [{"layer": i, "kind": ..., "weights": [...],
///  "biases": [...]}], "optimizer": ..., "metadata": ...}
/// Doubles are written in shortest round-trip form, so a reload is bit-exact.
nlohmann::json model_to_json(const ModelFile& model);
ModelFile model_from_json(const nlohmann::json& j);

void save_model(const ModelFile& model, const std::string& path);
ModelFile load_model(const std::string& path);
}
