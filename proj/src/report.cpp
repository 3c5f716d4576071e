#include "ecoamlp/report.hpp"

#include "ecoamlp/errors.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace ecoamlp {

Json outlier_report_json(const OutlierReport& report) {
    Json out = Json::array();
    for (const auto& s : report.ranked) {
        out.push_back({{"id", s.id}, {"pcl", s.pcl}, {"deviation", s.deviation}, {"kdist", s.kdist}, {"score", s.score}});
    }
    return out;
}

Json outlier_params_json(const OutlierParams& p) {
    return {{"algorithm", algorithm_name(p.algorithm)},
            {"k", p.k},
            {"n_outliers", p.n},
            {"measure", measure_name(p.measure)},
            {"alpha", p.alpha},
            {"beta", p.beta}};
}

Json network_json(const MlpNetwork& net) {
    const auto& c = net.config();
    return {{"input_dim", c.input_dim},
            {"hidden_units", c.hidden_units},
            {"learning_rate", c.learning_rate},
            {"weight_init_seed", c.weight_init_seed},
            {"epochs_trained", net.epochs_trained()},
            {"input_offset", net.scaling().offset},
            {"input_scale", net.scaling().scale},
            {"weights_ih", std::vector<double>(net.weights_ih().begin(), net.weights_ih().end())},
            {"weights_ho", std::vector<double>(net.weights_ho().begin(), net.weights_ho().end())}};
}

MlpNetwork network_from_json(const Json& doc) {
    try {
        MlpConfig config{doc.at("input_dim").get<std::size_t>(), doc.at("hidden_units").get<std::size_t>(),
                         doc.at("learning_rate").get<double>(), doc.at("weight_init_seed").get<std::uint64_t>()};
        InputScaling scaling{doc.at("input_offset").get<std::vector<double>>(),
                             doc.at("input_scale").get<std::vector<double>>()};
        return MlpNetwork::from_parts(config, doc.at("weights_ih").get<std::vector<double>>(),
                                      doc.at("weights_ho").get<std::vector<double>>(),
                                      doc.at("epochs_trained").get<std::size_t>(), std::move(scaling));
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("network json: ") + e.what());
    }
}

Json eval_json(const EvalReport& r) {
    Json out{{"confusion", {{"tp", r.matrix.tp}, {"tn", r.matrix.tn}, {"fp", r.matrix.fp}, {"fn", r.matrix.fn}}},
             {"accuracy", r.accuracy},
             {"precision_pos", r.precision_pos},
             {"recall_pos", r.recall_pos},
             {"precision_neg", r.precision_neg},
             {"recall_neg", r.recall_neg},
             {"weighted_mean_precision", r.weighted_mean_precision},
             {"weighted_mean_recall", r.weighted_mean_recall}};
    out["undefined_metrics"] = r.undefined;
    return out;
}

Json history_json(const std::vector<GenerationRecord>& history) {
    Json out = Json::array();
    for (const auto& g : history) {
        Json members = Json::array();
        for (const auto& m : g.members) {
            members.push_back({{"slot", m.slot},
                               {"hidden_units", m.hidden_units},
                               {"learning_rate", m.learning_rate},
                               {"validation_error", m.validation_error},
                               {"replaced", m.replaced}});
        }
        out.push_back({{"generation", g.generation},
                       {"best_error", g.best_error},
                       {"running_best_error", g.running_best_error},
                       {"members", std::move(members)}});
    }
    return out;
}

Json config_json(const ExperimentConfig& c) {
    const auto& o = c.preprocessor.outliers;
    const auto& a = c.classifier.automlp;
    Json out{{"data_path", c.data_path},
             {"train_fraction", c.split.train_fraction},
             {"validation_fraction", c.split.validation_fraction},
             {"test_fraction", c.split.test_fraction},
             {"seed", c.split.seed},
             {"stratified", c.split.stratified},
             {"preprocessor", preprocessor_name(c.preprocessor.kind)}};
    out["sample_fraction"] = c.preprocessor.effective_fraction();
    out["algorithm"] = algorithm_name(o.algorithm);
    out["k"] = o.k;
    out["n_outliers"] = o.n;
    out["measure"] = measure_name(o.measure);
    out["alpha"] = o.alpha;
    out["beta"] = o.beta;
    out["classifier"] = classifier_name(c.classifier.kind);
    out["knn_k"] = c.classifier.knn_k;
    out["knn_measure"] = measure_name(c.classifier.knn_measure);
    out["ensemble_size"] = a.ensemble_size;
    out["cycles"] = a.cycles_per_generation;
    out["generations"] = a.generations;
    out["hidden_min"] = a.hidden_min;
    out["hidden_max"] = a.hidden_max;
    out["lr_min"] = a.lr_min;
    out["lr_max"] = a.lr_max;
    out["warm_start"] = a.warm_start;
    out["scale_inputs"] = a.scale_inputs;
    out["repeats"] = c.repeats;
    out["drop_features"] = c.drop_features;
    out["test_equals_train"] = c.test_equals_train;
    out["output_path"] = c.output_path;
    return out;
}

ExperimentConfig config_from_json(const Json& doc) { return config_from_json(doc, ExperimentConfig{}); }

ExperimentConfig config_from_json(const Json& doc, ExperimentConfig c) {
    if (!doc.is_object()) {
        throw ConfigError("config: expected a JSON object");
    }
    static const std::set<std::string> known{
        "data_path",    "train_fraction", "validation_fraction", "test_fraction", "seed",          "stratified",
        "preprocessor", "sample_fraction", "algorithm",          "k",             "n_outliers",    "measure",
        "alpha",        "beta",            "classifier",         "knn_k",         "knn_measure",   "ensemble_size",
        "cycles",       "generations",     "hidden_min",         "hidden_max",    "lr_min",        "lr_max",
        "warm_start",   "scale_inputs",    "threads",            "repeats",       "drop_features", "test_equals_train",
        "output_path"};
    for (const auto& [key, value] : doc.items()) {
        if (!known.contains(key)) {
            throw ConfigError("config: unknown key '" + key + "'");
        }
    }
    try {
        auto take = [&doc](const char* key, auto& field) {
            if (doc.contains(key)) {
                field = doc.at(key).get<std::decay_t<decltype(field)>>();
            }
        };
        auto& o = c.preprocessor.outliers;
        auto& a = c.classifier.automlp;
        take("data_path", c.data_path);
        take("train_fraction", c.split.train_fraction);
        take("validation_fraction", c.split.validation_fraction);
        take("test_fraction", c.split.test_fraction);
        take("seed", c.split.seed);
        take("stratified", c.split.stratified);
        if (doc.contains("preprocessor")) {
            c.preprocessor.kind = parse_preprocessor(doc.at("preprocessor").get<std::string>());
        }
        if (doc.contains("sample_fraction")) {
            c.preprocessor.sample_fraction = doc.at("sample_fraction").get<double>();
        }
        if (doc.contains("algorithm")) {
            o.algorithm = parse_algorithm(doc.at("algorithm").get<std::string>());
        }
        take("k", o.k);
        take("n_outliers", o.n);
        if (doc.contains("measure")) {
            o.measure = parse_measure(doc.at("measure").get<std::string>());
        }
        take("alpha", o.alpha);
        take("beta", o.beta);
        if (doc.contains("classifier")) {
            c.classifier.kind = parse_classifier(doc.at("classifier").get<std::string>());
        }
        take("knn_k", c.classifier.knn_k);
        if (doc.contains("knn_measure")) {
            c.classifier.knn_measure = parse_measure(doc.at("knn_measure").get<std::string>());
        }
        take("ensemble_size", a.ensemble_size);
        take("cycles", a.cycles_per_generation);
        take("generations", a.generations);
        take("hidden_min", a.hidden_min);
        take("hidden_max", a.hidden_max);
        take("lr_min", a.lr_min);
        take("lr_max", a.lr_max);
        take("warm_start", a.warm_start);
        take("scale_inputs", a.scale_inputs);
        take("threads", a.threads);
        take("repeats", c.repeats);
        take("drop_features", c.drop_features);
        take("test_equals_train", c.test_equals_train);
        take("output_path", c.output_path);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return c;
}

namespace {

Json summary_json(const std::map<std::string, MetricSummary>& summary) {
    Json out = Json::object();
    for (const auto& name : metric_names()) {
        const auto it = summary.find(name);
        if (it != summary.end()) {
            out[name] = {{"median", it->second.median}, {"min", it->second.min}, {"max", it->second.max}};
        }
    }
    return out;
}

std::string pad(std::string text, std::size_t width) {
    if (text.size() < width) {
        text.append(width - text.size(), ' ');
    }
    return text;
}

std::string pad_left(std::string text, std::size_t width) {
    if (text.size() < width) {
        text.insert(0, width - text.size(), ' ');
    }
    return text;
}

} // namespace

std::string percent(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", fraction * 100.0);
    return buf;
}

Json run_report_json(const RunReport& report, const std::optional<std::string>& timestamp) {
    Json out = Json::object();
    if (timestamp) {
        out["generated_at"] = *timestamp;
    }
    out["config"] = config_json(report.config);
    Json repeats = Json::array();
    for (const auto& r : report.repeats) {
        Json rep{{"repeat", r.repeat},
                 {"seed", r.seed},
                 {"sizes",
                  {{"train", r.train_size},
                   {"train_after_preprocess", r.train_size_after_preprocess},
                   {"validation", r.validation_size},
                   {"test", r.test_size}}},
                 {"validation", eval_json(r.validation)},
                 {"test", eval_json(r.test)}};
        if (r.outliers) {
            rep["outliers"] = outlier_report_json(*r.outliers);
        }
        if (r.winner) {
            rep["winner"] = {{"hidden_units", r.winner->hidden_units()},
                             {"learning_rate", r.winner->learning_rate()},
                             {"epochs_trained", r.winner->epochs_trained()}};
        }
        if (r.history) {
            rep["automlp_history"] = history_json(*r.history);
        }
        repeats.push_back(std::move(rep));
    }
    out["repeats"] = std::move(repeats);
    out["validation_summary"] = summary_json(report.validation_summary);
    out["test_summary"] = summary_json(report.test_summary);
    return out;
}

std::string run_report_text(const RunReport& report) {
    std::ostringstream os;
    const auto& c = report.config;
    os << "preprocessor: " << preprocessor_name(c.preprocessor.kind) << "   classifier: "
       << classifier_name(c.classifier.kind) << "   repeats: " << c.repeats << "   seed: " << c.split.seed << "\n\n";
    os << pad("repeat", 8) << pad_left("val acc", 10) << pad_left("test acc", 10) << pad_left("WMR", 8)
       << pad_left("WMP", 8) << pad_left("TP", 5) << pad_left("TN", 5) << pad_left("FP", 5) << pad_left("FN", 5)
       << "\n";
    for (const auto& r : report.repeats) {
        os << pad(std::to_string(r.repeat), 8) << pad_left(percent(r.validation.accuracy), 10)
           << pad_left(percent(r.test.accuracy), 10) << pad_left(percent(r.test.weighted_mean_recall), 8)
           << pad_left(percent(r.test.weighted_mean_precision), 8) << pad_left(std::to_string(r.test.matrix.tp), 5)
           << pad_left(std::to_string(r.test.matrix.tn), 5) << pad_left(std::to_string(r.test.matrix.fp), 5)
           << pad_left(std::to_string(r.test.matrix.fn), 5) << "\n";
    }
    os << "\n" << pad("test metric", 26) << pad_left("median", 9) << pad_left("min", 9) << pad_left("max", 9) << "\n";
    for (const auto& name : metric_names()) {
        const auto& s = report.test_summary.at(name);
        os << pad(name, 26) << pad_left(percent(s.median), 9) << pad_left(percent(s.min), 9)
           << pad_left(percent(s.max), 9) << "\n";
    }
    return os.str();
}

Json sweep_json(const SweepReport& sweep, const std::optional<std::string>& timestamp) {
    Json out = Json::object();
    if (timestamp) {
        out["generated_at"] = *timestamp;
    }
    out["axis"] = axis_name(sweep.axis);
    Json table = Json::array();
    for (std::size_t i = 0; i < sweep.variants.size(); ++i) {
        const auto& s = sweep.runs[i].test_summary;
        table.push_back({{"variant", sweep.variants[i]},
                         {"accuracy", s.at("accuracy").median},
                         {"weighted_mean_recall", s.at("weighted_mean_recall").median},
                         {"weighted_mean_precision", s.at("weighted_mean_precision").median}});
    }
    out["table"] = std::move(table);
    if (sweep.ecodb_vs_none) {
        const auto& ref = *sweep.ecodb_vs_none;
        out["reference_expectation"] = {{"description", ref.description},
                                        {"expected_min_delta", ref.expected_min_delta},
                                        {"observed_median_delta", ref.observed_median_delta},
                                        {"paired_deltas", ref.paired_deltas},
                                        {"met", ref.met}};
    }
    Json runs = Json::object();
    for (std::size_t i = 0; i < sweep.variants.size(); ++i) {
        runs[sweep.variants[i]] = run_report_json(sweep.runs[i]);
    }
    out["runs"] = std::move(runs);
    return out;
}

std::string sweep_text(const SweepReport& sweep) {
    std::ostringstream os;
    const std::string title = sweep.axis == SweepAxis::preprocessor ? "Pre-Processing Method" : "Classifier";
    std::size_t width = title.size();
    for (const auto& v : sweep.variants) {
        width = std::max(width, v.size());
    }
    width += 2;
    os << pad(title, width) << pad_left("Accuracy", 10) << pad_left("WMR", 8) << pad_left("WMP", 8) << "\n";
    for (std::size_t i = 0; i < sweep.variants.size(); ++i) {
        const auto& s = sweep.runs[i].test_summary;
        os << pad(sweep.variants[i], width) << pad_left(percent(s.at("accuracy").median), 10)
           << pad_left(percent(s.at("weighted_mean_recall").median), 8)
           << pad_left(percent(s.at("weighted_mean_precision").median), 8) << "\n";
    }
    os << "(median over " << (sweep.runs.empty() ? 0 : sweep.runs.front().repeats.size())
       << " repeats, test set, percent)\n";
    if (sweep.ecodb_vs_none) {
        const auto& ref = *sweep.ecodb_vs_none;
        os << "\nreference expectation: " << ref.description << "\n"
           << "  observed median paired delta: " << percent(ref.observed_median_delta) << " points -> "
           << (ref.met ? "met" : "NOT MET (flagged)") << "\n";
    }
    return os.str();
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw DataError("cannot write " + tmp.string());
        }
        out << content;
        if (!out.flush()) {
            throw DataError("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw DataError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

void write_report_files(const std::filesystem::path& directory, const Json& doc, const std::string& text) {
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) {
        throw DataError("cannot create " + directory.string() + ": " + ec.message());
    }
    write_atomic(directory / "report.json", doc.dump(2) + "\n");
    write_atomic(directory / "report.txt", text);
}

} // namespace ecoamlp
