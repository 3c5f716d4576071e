#include "ecoamlp/harness.hpp"

#include "ecoamlp/errors.hpp"
#include "ecoamlp/rng.hpp"

#include <algorithm>
#include <cmath>

namespace ecoamlp {

std::string_view classifier_name(ClassifierKind kind) noexcept {
    switch (kind) {
    case ClassifierKind::automlp:
        return "automlp";
    case ClassifierKind::knn:
        return "knn";
    case ClassifierKind::naive_bayes:
        return "nb";
    }
    return "?";
}

ClassifierKind parse_classifier(std::string_view name) {
    if (name == "automlp") {
        return ClassifierKind::automlp;
    }
    if (name == "knn") {
        return ClassifierKind::knn;
    }
    if (name == "nb" || name == "naive_bayes") {
        return ClassifierKind::naive_bayes;
    }
    throw ConfigError("unknown classifier '" + std::string(name) + "' (expected automlp|knn|nb)");
}

double PreprocessorConfig::effective_fraction() const {
    if (sample_fraction) {
        return *sample_fraction;
    }
    return kind == PreprocessorKind::stratified_sample ? kDefaultStratifiedFraction : kDefaultBootstrapFraction;
}

void ExperimentConfig::validate() const {
    split.validate();
    if (repeats == 0) {
        throw ConfigError("config: repeats must be at least 1");
    }
    const double fraction = preprocessor.effective_fraction();
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw ConfigError("config: sample_fraction must lie in (0, 1]");
    }
    if (preprocessor.outliers.k == 0 || !(preprocessor.outliers.alpha > 0.0) || !(preprocessor.outliers.beta > 0.0)) {
        throw ConfigError("config: outlier k, alpha and beta must be positive");
    }
    if (classifier.kind == ClassifierKind::automlp) {
        classifier.automlp.validate();
    }
    if (classifier.knn_k == 0) {
        throw ConfigError("config: knn_k must be at least 1");
    }
}

std::string_view role_name(Role role) noexcept {
    switch (role) {
    case Role::train:
        return "train";
    case Role::validation:
        return "validation";
    case Role::test:
        return "test";
    }
    return "?";
}

std::string_view stage_name(Stage stage) noexcept {
    switch (stage) {
    case Stage::preprocess:
        return "preprocess";
    case Stage::train:
        return "train";
    case Stage::validate:
        return "validate";
    case Stage::final_evaluation:
        return "final_evaluation";
    }
    return "?";
}

PreparedTraining preprocess(const TrackedDataset& train, const PreprocessorConfig& config, std::uint64_t seed) {
    const Dataset& data = train.read(Stage::preprocess);
    switch (config.kind) {
    case PreprocessorKind::none:
        return PreparedTraining(data, std::nullopt, std::nullopt);
    case PreprocessorKind::ztransform: {
        auto z = ZTransform::fit(data);
        auto transformed = z.apply(data);
        return PreparedTraining(std::move(transformed), std::move(z), std::nullopt);
    }
    case PreprocessorKind::bootstrap_sample:
        return PreparedTraining(bootstrap_sample(data, config.effective_fraction(), seed), std::nullopt, std::nullopt);
    case PreprocessorKind::stratified_sample:
        return PreparedTraining(stratified_sample(data, config.effective_fraction(), seed), std::nullopt,
                                std::nullopt);
    case PreprocessorKind::ecodb_outlier_removal: {
        auto report = detect_outliers(data, config.outliers);
        auto kept = remove_outliers(data, report);
        return PreparedTraining(std::move(kept), std::nullopt, std::move(report));
    }
    }
    throw ConfigError("unknown preprocessor");
}

int FittedModel::predict(std::span<const double> features) const {
    std::vector<double> transformed;
    if (transform) {
        transformed = transform->apply(features);
        features = transformed;
    }
    return std::visit(
        [&](const auto& m) -> int {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, AutoMlpResult>) {
                return m.winner.predict(features);
            } else if constexpr (std::is_same_v<M, KnnModel>) {
                return knn_classify(m.train, features, m.k, m.measure);
            } else {
                return m.classify(features);
            }
        },
        model);
}

std::vector<int> FittedModel::predict(const Dataset& data) const {
    std::vector<int> out;
    out.reserve(data.size());
    for (const auto& inst : data.instances()) {
        out.push_back(predict(inst.features));
    }
    return out;
}

FittedModel train_classifier(const PreparedTraining& train, const TrackedDataset& validation,
                             const ClassifierConfig& config, std::uint64_t seed) {
    const Dataset& data = train.data();
    switch (config.kind) {
    case ClassifierKind::automlp: {
        const Dataset& raw_validation = validation.read(Stage::train);
        const Dataset val = train.transform() ? train.transform()->apply(raw_validation) : raw_validation;
        auto params = config.automlp;
        params.seed = seed;
        return FittedModel{train_automlp(data, val, params), train.transform()};
    }
    case ClassifierKind::knn: {
        const std::size_t k = std::min(config.knn_k, data.size());
        return FittedModel{KnnModel{data, k, Measure::of(config.knn_measure, data.schema())}, train.transform()};
    }
    case ClassifierKind::naive_bayes:
        return FittedModel{NaiveBayes::fit(data), train.transform()};
    }
    throw ConfigError("unknown classifier");
}

EvalReport evaluate(const FittedModel& model, const TrackedDataset& data, Stage stage) {
    const Dataset& d = data.read(stage);
    const auto predictions = model.predict(d);
    std::vector<int> truths;
    truths.reserve(d.size());
    for (const auto& inst : d.instances()) {
        truths.push_back(inst.label);
    }
    return report(confusion(predictions, truths));
}

const std::vector<std::string>& metric_names() {
    static const std::vector<std::string> names{"accuracy",      "weighted_mean_recall", "weighted_mean_precision",
                                                "precision_pos", "recall_pos",           "precision_neg",
                                                "recall_neg"};
    return names;
}

double metric_value(const EvalReport& r, std::string_view name) {
    if (name == "accuracy") {
        return r.accuracy;
    }
    if (name == "weighted_mean_recall") {
        return r.weighted_mean_recall;
    }
    if (name == "weighted_mean_precision") {
        return r.weighted_mean_precision;
    }
    if (name == "precision_pos") {
        return r.precision_pos;
    }
    if (name == "recall_pos") {
        return r.recall_pos;
    }
    if (name == "precision_neg") {
        return r.precision_neg;
    }
    if (name == "recall_neg") {
        return r.recall_neg;
    }
    throw ConfigError("unknown metric '" + std::string(name) + "'");
}

MetricSummary summarize(std::vector<double> values) {
    if (values.empty()) {
        return {};
    }
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    const double median = n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
    return MetricSummary{median, values.front(), values.back()};
}

std::uint64_t repeat_seed(const ExperimentConfig& config, std::size_t repeat) noexcept {
    return config.split.seed + repeat;
}

namespace {

enum : std::uint64_t { kPreprocessSeed = 1, kTrainSeed = 2 };

Dataset load_experiment_data(const ExperimentConfig& config) {
    const auto text = read_text_file(config.data_path);
    return parse_csv(text, infer_numeric_schema(text), config.data_path);
}

RepeatResult run_repeat(const ExperimentConfig& config, const Dataset& dataset, std::size_t r, AccessLog* log) {
    const std::uint64_t seed = repeat_seed(config, r);
    SplitSpec spec = config.split;
    spec.seed = seed;
    auto parts = split(dataset, spec);

    RepeatResult result;
    result.repeat = r;
    result.seed = seed;
    result.train_size = parts.train.size();
    result.validation_size = parts.validation.size();
    result.test_size = config.test_equals_train ? parts.train.size() : parts.test.size();

    const TrackedDataset train(config.test_equals_train ? parts.train : std::move(parts.train), Role::train, log);
    const TrackedDataset validation(std::move(parts.validation), Role::validation, log);
    const TrackedDataset test(config.test_equals_train ? std::move(parts.train) : std::move(parts.test), Role::test,
                              log);

    const auto prepared = preprocess(train, config.preprocessor, derive_seed(seed, {kPreprocessSeed}));
    result.train_size_after_preprocess = prepared.data().size();
    result.outliers = prepared.outliers();

    const auto model = train_classifier(prepared, validation, config.classifier, derive_seed(seed, {kTrainSeed}));
    if (const auto* automlp = std::get_if<AutoMlpResult>(&model.model)) {
        result.history = automlp->population.history;
        result.winner = automlp->winner;
    }
    result.validation = evaluate(model, validation, Stage::validate);
    result.test = evaluate(model, test, Stage::final_evaluation);
    return result;
}

} // namespace

RunReport run_experiment(const ExperimentConfig& config, AccessLog* log) {
    config.validate();
    return run_experiment(config, load_experiment_data(config), log);
}

RunReport run_experiment(const ExperimentConfig& config, const Dataset& raw, AccessLog* log) {
    config.validate();
    // Nominal coding is a per-row lookup, so doing it before the split keeps
    // one consistent category mapping across train/validation/test.
    const Dataset dataset = transform_nominal(drop_features(raw, config.drop_features));

    RunReport out;
    out.config = config;
    for (std::size_t r = 0; r < config.repeats; ++r) {
        out.repeats.push_back(run_repeat(config, dataset, r, log));
    }
    for (const auto& name : metric_names()) {
        std::vector<double> val;
        std::vector<double> test;
        for (const auto& rep : out.repeats) {
            val.push_back(metric_value(rep.validation, name));
            test.push_back(metric_value(rep.test, name));
        }
        out.validation_summary[name] = summarize(std::move(val));
        out.test_summary[name] = summarize(std::move(test));
    }
    return out;
}

std::string_view axis_name(SweepAxis axis) noexcept {
    return axis == SweepAxis::preprocessor ? "preprocessor" : "classifier";
}

SweepAxis parse_axis(std::string_view name) {
    if (name == "preprocessor") {
        return SweepAxis::preprocessor;
    }
    if (name == "classifier") {
        return SweepAxis::classifier;
    }
    throw ConfigError("unknown sweep axis '" + std::string(name) + "' (expected preprocessor|classifier)");
}

std::vector<std::string> default_variants(SweepAxis axis) {
    if (axis == SweepAxis::preprocessor) {
        return {"none", "ztransform", "bootstrap", "stratified", "ecodb"};
    }
    return {"knn", "nb", "automlp"};
}

ExperimentConfig with_variant(const ExperimentConfig& base, SweepAxis axis, std::string_view variant) {
    ExperimentConfig config = base;
    if (axis == SweepAxis::preprocessor) {
        config.preprocessor.kind = parse_preprocessor(variant);
    } else {
        config.classifier.kind = parse_classifier(variant);
    }
    return config;
}

SweepReport run_sweep(const ExperimentConfig& base, SweepAxis axis, const std::vector<std::string>& variants) {
    base.validate();
    if (variants.empty()) {
        throw ConfigError("sweep: no variants given");
    }
    const auto text = read_text_file(base.data_path);
    return run_sweep(base, parse_csv(text, infer_numeric_schema(text), base.data_path), axis, variants);
}

SweepReport run_sweep(const ExperimentConfig& base, const Dataset& dataset, SweepAxis axis,
                      const std::vector<std::string>& variants) {
    if (variants.empty()) {
        throw ConfigError("sweep: no variants given");
    }
    SweepReport sweep;
    sweep.axis = axis;
    sweep.variants = variants;
    std::vector<ExperimentConfig> configs;
    for (const auto& v : variants) {
        configs.push_back(with_variant(base, axis, v));
        configs.back().validate();
    }
    for (const auto& config : configs) {
        sweep.runs.push_back(run_experiment(config, dataset));
    }

    if (axis == SweepAxis::preprocessor) {
        const auto find = [&](std::string_view name) -> const RunReport* {
            for (std::size_t i = 0; i < variants.size(); ++i) {
                if (variants[i] == name) {
                    return &sweep.runs[i];
                }
            }
            return nullptr;
        };
        const RunReport* ecodb = find("ecodb");
        const RunReport* none = find("none");
        if (ecodb != nullptr && none != nullptr) {
            ReferenceExpectation ref;
            ref.description = "ECODB preprocessing improves test accuracy over no preprocessing by more than 5 "
                              "percentage points (AutoMLP fixed, paired seeds)";
            ref.expected_min_delta = 0.05;
            std::vector<double> deltas;
            for (std::size_t r = 0; r < ecodb->repeats.size(); ++r) {
                deltas.push_back(ecodb->repeats[r].test.accuracy - none->repeats[r].test.accuracy);
            }
            ref.paired_deltas = deltas;
            ref.observed_median_delta = summarize(deltas).median;
            ref.met = ref.observed_median_delta > ref.expected_min_delta;
            sweep.ecodb_vs_none = std::move(ref);
        }
    }
    return sweep;
}

} // namespace ecoamlp
