#include <weave/error.h>
#include <weave/nn/architectures.h>

namespace weave::nn
{
const std::vector<std::string>& architecture_names()
{
        static const std::vector<std::string> names{"DNN", "DNN2", "CNN", "CNN2"};
        return names;
}

namespace
{
NetworkSpec dense_stack(const std::string& name, const std::vector<std::size_t>& widths)
{
        NetworkSpec spec{.name = name};
        for (const std::size_t w : widths)
        {
                spec.layers.emplace_back(Dense{.units = w});
                spec.layers.emplace_back(Relu{});
        }
        return spec;
}

NetworkSpec conv_stack(const std::string& name, const std::vector<std::size_t>& filters, const std::size_t pool_window)
{
        NetworkSpec spec{.name = name};
        for (const std::size_t f : filters)
        {
                spec.layers.emplace_back(Conv1d{.filters = f, .kernel = 3, .padding = Padding::same});
                spec.layers.emplace_back(Relu{});
                if (pool_window > 0)
                {
                        spec.layers.emplace_back(MaxPool1d{.window = pool_window});
                }
        }
        spec.layers.emplace_back(Flatten{});
        return spec;
}
}

NetworkSpec build_architecture(
        const std::string& name,
        const std::size_t input_length,
        const std::size_t num_classes,
        const std::size_t pool_window)
{
        NetworkSpec spec;
        if (name == "DNN")
        {
                spec = dense_stack(name, {10, 20, 10});
        }
        else if (name == "DNN2")
        {
                spec = dense_stack(name, {40, 30, 20, 10});
        }
        else if (name == "CNN")
        {
                spec = conv_stack(name, {4, 8, 12, 16}, pool_window);
        }
        else if (name == "CNN2")
        {
                spec = conv_stack(name, {4, 8, 12, 16, 20, 24, 28}, pool_window);
        }
        else
        {
                fail(ErrorKind::config, "unknown architecture '" + name + "' (valid: DNN, DNN2, CNN, CNN2)");
        }
        spec.layers.emplace_back(Dense{.units = num_classes});
        spec.input_length = input_length;
        spec.num_classes = num_classes;
        validate(spec);
        return spec;
}
}
