#include <weave/error.h>
#include <weave/experiments.h>
#include <weave/run_config.h>

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

using namespace weave;

#ifndef WEAVE_GOLDEN_DIR
#error "WEAVE_GOLDEN_DIR must point at tests/golden"
#endif

namespace
{
Protocol small_protocol(std::size_t per_class = 90)
{
        Protocol p;
        p.per_class = per_class;
        p.epochs = 20;
        p.seed = 5;
        return p;
}

FrequencySet omega1()
{
        return builtin_frequency_set("omega1", FrequencyUnit::radians_per_second);
}

std::string csv(const SweepResult& r)
{
        std::ostringstream out;
        write_results_csv(r, out);
        return out.str();
}

SweepResult handmade()
{
        SweepResult r;
        r.condition = "sigma";
        r.rows = {
                {0.1, "DNN", 1.0, 1000, "f"},
                {0.1, "MMAE", 0.98, 1000, "f"},
                {0.3, "DNN", 0.995, 1000, "f"},
                {0.3, "MMAE", 0.902, 1000, "f"},
        };
        r.metadata = {{"set", "omega1"}, {"fingerprint", "0123456789abcdef"}};
        return r;
}

std::string read_file(const std::filesystem::path& path)
{
        std::ifstream in(path);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
}
}

TEST_SUITE("experiments")
{
TEST_CASE("builtin frequency sets")
{
        const auto sets = builtin_frequency_sets();
        REQUIRE(sets.size() == 3);
        CHECK(sets[0].frequencies == std::vector<double>{5, 5.5, 6});
        CHECK(sets[1].frequencies == std::vector<double>{5, 5.2, 5.4});
        CHECK(sets[2].frequencies == std::vector<double>{10, 10.2, 10.4});
        CHECK(sets[2].name == "omega3");
        CHECK(sets[0].unit == FrequencyUnit::hertz);
        CHECK(builtin_frequency_set("omega2", FrequencyUnit::radians_per_second).angular(1) == 5.2);
        CHECK_THROWS_AS(builtin_frequency_set("omega4"), Error);
}

TEST_CASE("estimator names")
{
        CHECK(estimator_names() == std::vector<std::string>{"MMAE", "DNN", "DNN2", "CNN", "CNN2"});
        CHECK_NOTHROW(validate_estimators({"MMAE", "CNN"}));
        CHECK_THROWS_AS(validate_estimators({"LSTM"}), Error);
        CHECK_THROWS_AS(validate_estimators({"DNN", "DNN"}), Error);
}

TEST_CASE("training settings per architecture")
{
        const Protocol p;
        const TrainConfig dense = training_config(p, "DNN2", 1);
        CHECK(dense.optimizer.kind == nn::OptimizerKind::adagrad);
        CHECK(dense.optimizer.learning_rate == 0.01);
        const TrainConfig conv = training_config(p, "CNN", 1);
        CHECK(conv.optimizer.kind == nn::OptimizerKind::adam);
        CHECK(conv.optimizer.learning_rate == 0.001);
        CHECK(conv.epochs == 30);
        CHECK(conv.batch_size == 32);
}

TEST_CASE("point seeds and splits")
{
        const Protocol p = small_protocol();
        std::set<std::uint64_t> seeds;
        for (const double s : default_sigma_grid())
        {
                seeds.insert(noise_point_seed(p, s));
        }
        CHECK(seeds.size() == default_sigma_grid().size());
        CHECK(noise_point_seed(p, 0.3) != length_point_seed(p, 0.3));

        SignalParams base;
        base.noise_std = 0.3;
        const DatasetSplit split = point_split(omega1(), base, p, noise_point_seed(p, 0.3));
        CHECK(split.train.size() == 240);
        CHECK(split.test.size() == 30);
}

TEST_CASE("noiseless sweep point is solved by every estimator")
{
        const SweepResult r = noise_sweep(omega1(), {0.0}, {"DNN", "MMAE"}, small_protocol());
        CHECK(r.accuracy(0.0, "DNN") == 1.0);
        CHECK(r.accuracy(0.0, "MMAE") == 1.0);
        CHECK(r.row(0.0, "MMAE").n_test == 30);
        CHECK(r.condition == "sigma");
        CHECK(!r.fingerprint().empty());
        CHECK(r.rows[0].fingerprint == r.fingerprint());
}

TEST_CASE("sweeps are reproducible byte for byte")
{
        const Protocol p = small_protocol(60);
        const std::string a = csv(noise_sweep(omega1(), {0.2, 0.4}, {"DNN", "MMAE"}, p));
        const std::string b = csv(noise_sweep(omega1(), {0.2, 0.4}, {"DNN", "MMAE"}, p));
        CHECK(a == b);

        Protocol threaded = p;
        threaded.jobs = 2;
        const std::string c = csv(noise_sweep(omega1(), {0.2, 0.4}, {"DNN", "MMAE"}, threaded));
        CHECK(c.substr(c.find("condition,")) == a.substr(a.find("condition,")));
}

TEST_CASE("estimators do not see each other's settings")
{
        const Protocol p = small_protocol(60);
        const SweepResult base = noise_sweep(omega1(), {0.4}, {"DNN", "MMAE"}, p);

        Protocol other_nn = p;
        other_nn.dense_learning_rate = 0.02;
        other_nn.epochs = 3;
        const SweepResult r1 = noise_sweep(omega1(), {0.4}, {"DNN", "MMAE"}, other_nn);
        CHECK(r1.accuracy(0.4, "MMAE") == base.accuracy(0.4, "MMAE"));

        Protocol other_kf = p;
        other_kf.mmae.phi_s = 3;
        const SweepResult r2 = noise_sweep(omega1(), {0.4}, {"DNN", "MMAE"}, other_kf);
        CHECK(r2.accuracy(0.4, "DNN") == base.accuracy(0.4, "DNN"));
        CHECK(r2.fingerprint() != base.fingerprint());
}

TEST_CASE("length sweep metadata and the one-interval edge case")
{
        Protocol p = small_protocol(900);
        p.epochs = 5;
        const SweepResult r = length_sweep(omega1(), {0.01, 0.75}, 0.3, {"DNN", "MMAE"}, p);
        CHECK(r.condition == "duration");
        bool found = false;
        for (const auto& [k, v] : r.metadata)
        {
                if (k == "measurements")
                {
                        CHECK(v == "1 75");
                        found = true;
                }
        }
        CHECK(found);
        CHECK(r.accuracy(0.01, "DNN") == doctest::Approx(1.0 / 3).epsilon(0.3));
        CHECK(r.accuracy(0.01, "MMAE") == doctest::Approx(1.0 / 3).epsilon(0.3));
        CHECK(r.accuracy(0.75, "MMAE") > 0.5);
}

TEST_CASE("architecture comparison takes networks only")
{
        CHECK_THROWS_AS(architecture_comparison(omega1(), {0.1}, {"MMAE", "DNN"}, small_protocol()), Error);
}

TEST_CASE("accuracy loss")
{
        const SweepResult a = handmade();
        const SweepResult zero = accuracy_loss(a, a);
        CHECK(zero.quantity == "accuracy_loss");
        for (const auto& row : zero.rows)
        {
                CHECK(row.accuracy == 0.0);
        }
        SweepResult b = handmade();
        b.rows[3].accuracy = 0.7;
        b.metadata[0].second = "omega2";
        const SweepResult diff = accuracy_loss(a, b);
        CHECK(diff.accuracy(0.3, "MMAE") == doctest::Approx(0.202));
        CHECK(diff.accuracy(0.3, "DNN") == 0.0);

        SweepResult shifted = handmade();
        shifted.rows[0].condition = 0.2;
        try
        {
                accuracy_loss(a, shifted);
                FAIL("expected an error");
        }
        catch (const Error& e)
        {
                CHECK(e.kind() == ErrorKind::structural);
        }
        SweepResult other = handmade();
        other.condition = "duration";
        CHECK_THROWS_AS(accuracy_loss(a, other), Error);
}

TEST_CASE("results csv")
{
        const SweepResult r = handmade();
        const std::string text = csv(r);
        CHECK(text.find("# set=omega1\n") != std::string::npos);
        CHECK(text.find("condition,estimator,accuracy,n_test\n0.1,DNN,1,1000\n") != std::string::npos);

        std::istringstream in(text);
        const SweepResult back = read_results_csv(in);
        REQUIRE(back.rows.size() == r.rows.size());
        for (std::size_t i = 0; i < r.rows.size(); ++i)
        {
                CHECK(back.rows[i].condition == r.rows[i].condition);
                CHECK(back.rows[i].estimator == r.rows[i].estimator);
                CHECK(back.rows[i].accuracy == r.rows[i].accuracy);
                CHECK(back.rows[i].n_test == r.rows[i].n_test);
        }
        CHECK(back.fingerprint() == r.fingerprint());
        CHECK(csv(back) == text);

        SweepResult empty;
        empty.condition = "sigma";
        const std::string empty_text = csv(empty);
        CHECK(empty_text.substr(empty_text.find("condition,")) == "condition,estimator,accuracy,n_test\n");
        std::istringstream empty_in(empty_text);
        CHECK(read_results_csv(empty_in).rows.empty());
}

TEST_CASE("malformed results are data errors")
{
        std::istringstream no_header("# set=omega1\n");
        CHECK_THROWS_AS(read_results_csv(no_header), Error);
        std::istringstream bad_row("condition,estimator,accuracy,n_test\n0.1,DNN,1.5,10\n");
        CHECK_THROWS_AS(read_results_csv(bad_row), Error);
        std::istringstream dup("condition,estimator,accuracy,n_test\n0.1,DNN,1,10\n0.1,DNN,1,10\n");
        CHECK_THROWS_AS(read_results_csv(dup), Error);
        try
        {
                import_results("/nonexistent/results.csv");
                FAIL("expected an error");
        }
        catch (const Error& e)
        {
                CHECK(e.kind() == ErrorKind::data);
        }
}

TEST_CASE("export and import through files")
{
        const auto path = std::filesystem::temp_directory_path() / "weave_results_test.csv";
        export_results(handmade(), path.string());
        const SweepResult back = import_results(path.string());
        std::filesystem::remove(path);
        CHECK(back.accuracy(0.3, "DNN") == 0.995);
}

TEST_CASE("plot script matches the golden file")
{
        const std::string script = plot_script(handmade());
        CHECK(script.find("Noise standard deviation [m]") != std::string::npos);
        CHECK(script == read_file(std::filesystem::path(WEAVE_GOLDEN_DIR) / "noise_sweep_plot.py"));

        SweepResult length = handmade();
        length.condition = "duration";
        CHECK(plot_script(length).find("Signal length T [s]") != std::string::npos);
}
}

TEST_SUITE("run_config")
{
TEST_CASE("defaults validate and round trip")
{
        const RunConfig c;
        CHECK_NOTHROW(validate(c));
        CHECK(c.frequency_unit == FrequencyUnit::radians_per_second);
        const RunConfig back = run_config_from_json(to_json(c));
        CHECK(to_json(back) == to_json(c));
        CHECK(config_fingerprint(back) == config_fingerprint(c));
}

TEST_CASE("unknown keys and bad values are config errors")
{
        auto kind = [](const nlohmann::json& j)
        {
                try
                {
                        run_config_from_json(j);
                }
                catch (const Error& e)
                {
                        return e.kind();
                }
                return ErrorKind::data;
        };
        CHECK(kind({{"sigmaa", 0.3}}) == ErrorKind::config);
        CHECK(kind({{"training", {{"epoch", 3}}}}) == ErrorKind::config);
        CHECK(kind({{"signal", {{"sigma", "high"}}}}) == ErrorKind::config);
        CHECK(kind({{"signal", {{"sigma", -1}}}}) == ErrorKind::config);
        CHECK(kind({{"set", "omega9"}}) == ErrorKind::config);
        CHECK(kind({{"schema_version", 2}}) == ErrorKind::config);
        CHECK(kind({{"sweep", {{"estimators", {"DNN", "GRU"}}}}}) == ErrorKind::config);
        CHECK(kind({{"frequency_unit", "rpm"}}) == ErrorKind::config);
}

TEST_CASE("partial configs keep defaults")
{
        const RunConfig c = run_config_from_json({{"seed", 9}, {"training", {{"epochs", 4}}}});
        CHECK(c.protocol.seed == 9);
        CHECK(c.protocol.epochs == 4);
        CHECK(c.protocol.batch_size == 32);
        CHECK(c.sigma == 0.3);
}

TEST_CASE("fingerprint tracks results-relevant settings only")
{
        RunConfig a;
        RunConfig b;
        b.output_dir = "elsewhere";
        b.protocol.jobs = 4;
        CHECK(config_fingerprint(a) == config_fingerprint(b));
        b.protocol.seed = 2;
        CHECK(config_fingerprint(a) != config_fingerprint(b));
        RunConfig c;
        c.frequency_unit = FrequencyUnit::hertz;
        CHECK(config_fingerprint(a) != config_fingerprint(c));
}

TEST_CASE("custom frequency sets")
{
        RunConfig c;
        c.set = "custom";
        c.custom_frequencies = {2, 3, 4, 5};
        const FrequencySet s = resolve_set(c, "custom");
        CHECK(s.size() == 4);
        CHECK(s.unit == FrequencyUnit::radians_per_second);
        c.custom_frequencies = {3, 2};
        CHECK_THROWS_AS(validate(c), Error);
}
}
