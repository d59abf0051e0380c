#include <weave/error.h>
#include <weave/nn/model_io.h>

#include <fstream>

namespace weave::nn
{
using nlohmann::json;

namespace
{
const char* padding_name(const Padding p)
{
        return p == Padding::same ? "same" : "none";
}

Padding parse_padding(const std::string& text)
{
        if (text == "same")
        {
                return Padding::same;
        }
        if (text == "none")
        {
                return Padding::none;
        }
        fail(ErrorKind::data, "unknown padding '" + text + "'");
}

template <typename F>
auto guarded(const std::string& what, F&& f)
{
        try
        {
                return f();
        }
        catch (const json::exception& e)
        {
                fail(ErrorKind::data, what + ": " + e.what());
        }
}
}

json spec_to_json(const NetworkSpec& spec)
{
        json layers = json::array();
        for (const LayerSpec& layer : spec.layers)
        {
                json l{{"kind", layer_name(layer)}};
                if (const auto* d = std::get_if<Dense>(&layer))
                {
                        l["units"] = d->units;
                }
                else if (const auto* c = std::get_if<Conv1d>(&layer))
                {
                        l["filters"] = c->filters;
                        l["kernel"] = c->kernel;
                        l["stride"] = 1;
                        l["padding"] = padding_name(c->padding);
                }
                else if (const auto* p = std::get_if<MaxPool1d>(&layer))
                {
                        l["window"] = p->window;
                }
                layers.push_back(std::move(l));
        }
        return {{"name", spec.name},
                {"input_length", spec.input_length},
                {"num_classes", spec.num_classes},
                {"layers", std::move(layers)}};
}

NetworkSpec spec_from_json(const json& j)
{
        return guarded(
                "network spec",
                [&]
                {
                        NetworkSpec spec;
                        spec.name = j.at("name").get<std::string>();
                        spec.input_length = j.at("input_length").get<std::size_t>();
                        spec.num_classes = j.at("num_classes").get<std::size_t>();
                        for (const json& l : j.at("layers"))
                        {
                                const std::string kind = l.at("kind").get<std::string>();
                                if (kind == "dense")
                                {
                                        spec.layers.emplace_back(Dense{.units = l.at("units").get<std::size_t>()});
                                }
                                else if (kind == "conv1d")
                                {
                                        require(l.value("stride", 1) == 1, ErrorKind::data, "only stride 1 is supported");
                                        spec.layers.emplace_back(Conv1d{
                                                .filters = l.at("filters").get<std::size_t>(),
                                                .kernel = l.value("kernel", std::size_t{3}),
                                                .padding = parse_padding(l.value("padding", std::string("same")))});
                                }
                                else if (kind == "maxpool1d")
                                {
                                        spec.layers.emplace_back(MaxPool1d{.window = l.at("window").get<std::size_t>()});
                                }
                                else if (kind == "relu")
                                {
                                        spec.layers.emplace_back(Relu{});
                                }
                                else if (kind == "flatten")
                                {
                                        spec.layers.emplace_back(Flatten{});
                                }
                                else
                                {
                                        fail(ErrorKind::data, "unknown layer kind '" + kind + "'");
                                }
                        }
                        validate(spec);
                        return spec;
                });
}

json optimizer_to_json(const OptimizerState& opt)
{
        json j{{"kind", to_string(opt.kind)}, {"learning_rate", opt.learning_rate}, {"epsilon", opt.epsilon}};
        if (opt.kind == OptimizerKind::adam)
        {
                j["beta1"] = opt.beta1;
                j["beta2"] = opt.beta2;
        }
        if (opt.kind == OptimizerKind::sgd)
        {
                j["scope"] = to_string(opt.scope);
                j["minibatch_size"] = opt.minibatch_size;
        }
        return j;
}

OptimizerState optimizer_from_json(const json& j)
{
        return guarded(
                "optimizer",
                [&]
                {
                        OptimizerState opt;
                        opt.kind = parse_optimizer_kind(j.at("kind").get<std::string>());
                        opt.learning_rate = j.at("learning_rate").get<double>();
                        opt.epsilon = j.value("epsilon", 1e-8);
                        opt.beta1 = j.value("beta1", 0.9);
                        opt.beta2 = j.value("beta2", 0.999);
                        opt.scope = parse_gradient_scope(j.value("scope", std::string("minibatch")));
                        opt.minibatch_size = j.value("minibatch_size", std::size_t{32});
                        validate(opt);
                        return opt;
                });
}

json model_to_json(const ModelFile& model)
{
        json layers = json::array();
        for (const ParameterBlock& b : model.params.layout)
        {
                const auto w = model.params.weights(b.layer);
                const auto bias = model.params.biases(b.layer);
                layers.push_back(
                        {{"layer", b.layer},
                         {"kind", layer_name(model.spec.layers.at(b.layer))},
                         {"weights", std::vector<double>(w.begin(), w.end())},
                         {"biases", std::vector<double>(bias.begin(), bias.end())}});
        }
        return {{"format", "weave-model"},
                {"version", 1},
                {"spec", spec_to_json(model.spec)},
                {"seed", model.seed},
                {"init", "he_uniform"},
                {"layers", std::move(layers)},
                {"optimizer", optimizer_to_json(model.optimizer)},
                {"metadata", model.metadata}};
}

ModelFile model_from_json(const json& j)
{
        return guarded(
                "model file",
                [&]
                {
                        require(j.value("format", std::string()) == "weave-model", ErrorKind::data, "not a model file");
                        ModelFile model;
                        model.spec = spec_from_json(j.at("spec"));
                        model.seed = j.value("seed", std::uint64_t{0});
                        model.params = zero_parameters(model.spec);
                        const json& layers = j.at("layers");
                        require(layers.size() == model.params.layout.size(), ErrorKind::structural,
                                "model file has " + std::to_string(layers.size()) + " parameter blocks, spec needs "
                                        + std::to_string(model.params.layout.size()));
                        for (std::size_t i = 0; i < layers.size(); ++i)
                        {
                                const ParameterBlock& b = model.params.layout[i];
                                const auto w = layers[i].at("weights").get<std::vector<double>>();
                                const auto bias = layers[i].at("biases").get<std::vector<double>>();
                                require(layers[i].at("layer").get<std::size_t>() == b.layer && w.size() == b.weight_count
                                                && bias.size() == b.bias_count,
                                        ErrorKind::structural, "model parameter block " + std::to_string(i) + " does not match spec");
                                std::copy(w.begin(), w.end(), model.params.weights(b.layer).begin());
                                std::copy(bias.begin(), bias.end(), model.params.biases(b.layer).begin());
                        }
                        validate(model.params, model.spec);
                        if (j.contains("optimizer"))
                        {
                                model.optimizer = optimizer_from_json(j.at("optimizer"));
                        }
                        model.metadata = j.value("metadata", json::object());
                        return model;
                });
}

void save_model(const ModelFile& model, const std::string& path)
{
        std::ofstream out(path);
        require(out.good(), ErrorKind::io, "cannot open '" + path + "' for writing");
        out << model_to_json(model).dump(1) << '\n';
        require(out.good(), ErrorKind::io, "failed writing '" + path + "'");
}

ModelFile load_model(const std::string& path)
{
        std::ifstream in(path);
        require(in.good(), ErrorKind::data, "cannot open model '" + path + "'");
        json j;
        try
        {
                in >> j;
        }
        catch (const json::exception& e)
        {
                fail(ErrorKind::data, "model '" + path + "' is not valid JSON: " + e.what());
        }
        return model_from_json(j);
}
}
