// Command-line front end: run, sweep, detect-outliers.
//
// Exit codes: 0 success, 1 configuration error, 2 data error, 3 internal.

#include "ecoamlp/errors.hpp"
#include "ecoamlp/harness.hpp"
#include "ecoamlp/kernels.hpp"
#include "ecoamlp/report.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace ecoamlp;

namespace {

struct Overrides {
    std::optional<std::string> config_path;
    std::optional<std::string> data;
    std::optional<std::string> output;
    std::optional<std::string> algorithm;
    std::optional<std::size_t> k;
    std::optional<std::size_t> n_outliers;
    std::optional<std::string> measure;
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<std::size_t> ensemble_size;
    std::optional<std::size_t> cycles;
    std::optional<std::size_t> generations;
    std::vector<std::size_t> hidden_range;
    std::vector<double> lr_range;
    std::optional<std::uint64_t> seed;
    bool warm_start = false;
    bool no_scale_inputs = false;
    std::optional<std::string> preprocessor;
    std::optional<double> sample_fraction;
    std::optional<std::string> classifier;
    std::optional<std::size_t> knn_k;
    std::optional<std::size_t> repeats;
    std::optional<std::size_t> threads;
    std::vector<std::string> drop_features;
    std::optional<bool> stratified;
};

void add_common(CLI::App& cmd, Overrides& o) {
    cmd.add_option("--config", o.config_path, "JSON config file; flags override its values");
    cmd.add_option("--data", o.data, "CSV dataset (last column is the 0/1 class)");
    cmd.add_option("--output", o.output, "Directory for report.json and report.txt");
    cmd.add_option("--algorithm", o.algorithm, "Outlier algorithm: ecodb|codb");
    cmd.add_option("--k", o.k, "Neighbors for outlier detection");
    cmd.add_option("--n-outliers", o.n_outliers, "Number of outliers to remove");
    cmd.add_option("--measure", o.measure, "Outlier distance: correlation|euclidean|mixed");
    cmd.add_option("--alpha", o.alpha, "COF deviation weight");
    cmd.add_option("--beta", o.beta, "COF k-distance weight");
    cmd.add_option("--ensemble-size", o.ensemble_size);
    cmd.add_option("--cycles", o.cycles, "Epochs per generation");
    cmd.add_option("--generations", o.generations);
    cmd.add_option("--hidden-range", o.hidden_range, "MIN MAX hidden units")->expected(2);
    cmd.add_option("--lr-range", o.lr_range, "MIN MAX learning rate")->expected(2);
    cmd.add_option("--seed", o.seed);
    cmd.add_flag("--warm-start", o.warm_start, "Offspring inherit parent weights");
    cmd.add_flag("--no-scale-inputs", o.no_scale_inputs, "Feed raw features to the networks");
    cmd.add_option("--preprocessor", o.preprocessor, "none|ztransform|bootstrap|stratified|ecodb");
    cmd.add_option("--sample-fraction", o.sample_fraction);
    cmd.add_option("--classifier", o.classifier, "automlp|knn|nb");
    cmd.add_option("--knn-k", o.knn_k);
    cmd.add_option("--repeats", o.repeats);
    cmd.add_option("--threads", o.threads, "Worker threads (0 = all cores)");
    cmd.add_option("--drop-features", o.drop_features, "Feature names to drop")->delimiter(',');
    cmd.add_option("--stratified", o.stratified, "Stratify the split (true|false)");
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
}

ExperimentConfig build_config(const Overrides& o) {
    ExperimentConfig base;
    base.output_path = "results";
    if (o.config_path) {
        base = config_from_json(read_json_file(*o.config_path), base);
    }
    // Flags go through the same parser as the file so both share validation.
    Json flags = Json::object();
    auto put = [&flags](const char* key, const auto& value) {
        if (value) {
            flags[key] = *value;
        }
    };
    put("data_path", o.data);
    put("output_path", o.output);
    put("algorithm", o.algorithm);
    put("k", o.k);
    put("n_outliers", o.n_outliers);
    put("measure", o.measure);
    put("alpha", o.alpha);
    put("beta", o.beta);
    put("ensemble_size", o.ensemble_size);
    put("cycles", o.cycles);
    put("generations", o.generations);
    put("seed", o.seed);
    put("preprocessor", o.preprocessor);
    put("sample_fraction", o.sample_fraction);
    put("classifier", o.classifier);
    put("knn_k", o.knn_k);
    put("repeats", o.repeats);
    put("threads", o.threads);
    put("stratified", o.stratified);
    if (o.hidden_range.size() == 2) {
        flags["hidden_min"] = o.hidden_range[0];
        flags["hidden_max"] = o.hidden_range[1];
    }
    if (o.lr_range.size() == 2) {
        flags["lr_min"] = o.lr_range[0];
        flags["lr_max"] = o.lr_range[1];
    }
    if (o.warm_start) {
        flags["warm_start"] = true;
    }
    if (o.no_scale_inputs) {
        flags["scale_inputs"] = false;
    }
    if (!o.drop_features.empty()) {
        flags["drop_features"] = o.drop_features;
    }
    auto config = config_from_json(flags, base);
    if (config.data_path.empty()) {
        throw ConfigError("no dataset given (use --data or data_path in the config)");
    }
    config.validate();
    return config;
}

Dataset load(const ExperimentConfig& config) {
    const auto text = read_text_file(config.data_path);
    return parse_csv(text, infer_numeric_schema(text), config.data_path);
}

int cmd_run(const Overrides& o) {
    const auto config = build_config(o);
    const auto report = run_experiment(config, load(config));
    const auto text = run_report_text(report);
    write_report_files(config.output_path, run_report_json(report, utc_timestamp()), text);
    std::cout << text;
    return 0;
}

int cmd_sweep(const Overrides& o, const std::string& axis_name, std::vector<std::string> variants) {
    const auto config = build_config(o);
    const auto axis = parse_axis(axis_name);
    if (variants.empty()) {
        variants = default_variants(axis);
    }
    const auto sweep = run_sweep(config, load(config), axis, variants);
    const auto text = sweep_text(sweep);
    write_report_files(config.output_path, sweep_json(sweep, utc_timestamp()), text);
    std::cout << text;
    return 0;
}

int cmd_detect(const Overrides& o, bool whole_dataset) {
    const auto config = build_config(o);
    const auto data = transform_nominal(drop_features(load(config), config.drop_features));
    const Dataset target = whole_dataset ? data : split(data, config.split).train;
    const auto& params = config.preprocessor.outliers;
    const auto rep = detect_outliers(target, params);
    Json doc{{"algorithm", algorithm_name(rep.algorithm)},
             {"params", outlier_params_json(params)},
             {"scope", whole_dataset ? "dataset" : "training_split"},
             {"instances", target.size()},
             {"generated_at", utc_timestamp()},
             {"outliers", outlier_report_json(rep)}};
    std::ostringstream text;
    text << algorithm_name(rep.algorithm) << " on " << target.size() << " instances ("
         << (whole_dataset ? "whole dataset" : "training split") << ")\n";
    text << "rank  id     pcl     deviation     kdist         score\n";
    std::size_t rank = 1;
    for (const auto& s : rep.ranked) {
        text << rank++ << "     " << s.id << "  " << s.pcl << "  " << s.deviation << "  " << s.kdist << "  "
             << s.score << "\n";
    }
    write_report_files(config.output_path, doc, text.str());
    std::cout << text.str();
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ECO-AMLP: class-outlier removal and evolutionary MLP ensembles"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string simd = "auto";
    app.add_option("--simd", simd, "Kernel backend: auto|scalar|avx2")->capture_default_str();

    Overrides run_opts;
    auto* run = app.add_subcommand("run", "Train and evaluate one configuration");
    add_common(*run, run_opts);

    Overrides sweep_opts;
    std::string axis = "preprocessor";
    std::vector<std::string> variants;
    auto* sweep = app.add_subcommand("sweep", "Compare preprocessors or classifiers on the same splits");
    add_common(*sweep, sweep_opts);
    sweep->add_option("--axis", axis, "preprocessor|classifier")->capture_default_str();
    sweep->add_option("--variants", variants, "Comma-separated variant names")->delimiter(',');

    Overrides detect_opts;
    bool whole = false;
    auto* detect = app.add_subcommand("detect-outliers", "Rank class outliers and write them as JSON");
    add_common(*detect, detect_opts);
    detect->add_flag("--no-split", whole, "Score the whole dataset instead of the training split");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        kernels::Backend backend{};
        if (!kernels::parse_backend(simd, backend)) {
            throw ConfigError("unknown --simd backend '" + simd + "'");
        }
        if (!kernels::set_backend(backend)) {
            throw ConfigError("--simd " + simd + " is not supported on this CPU");
        }
        if (run->parsed()) {
            return cmd_run(run_opts);
        }
        if (sweep->parsed()) {
            return cmd_sweep(sweep_opts, axis, variants);
        }
        return cmd_detect(detect_opts, whole);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
