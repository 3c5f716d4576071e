#pragma once

// End-to-end experiments: split -> preprocess (training set only) -> train
// -> evaluate on validation and test, repeated over derived seeds.
//
// The held-out sets are wrapped in TrackedDataset so every read is logged
// with the pipeline stage that made it. The trainer only accepts a
// PreparedTraining, which only preprocess() can produce.

#include "ecoamlp/automlp.hpp"
#include "ecoamlp/baselines.hpp"
#include "ecoamlp/class_outlier.hpp"
#include "ecoamlp/data.hpp"
#include "ecoamlp/metrics.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ecoamlp {

enum class ClassifierKind { automlp, knn, naive_bayes };

std::string_view classifier_name(ClassifierKind kind) noexcept;
/// Accepts automlp|knn|nb.
ClassifierKind parse_classifier(std::string_view name);

struct PreprocessorConfig {
    PreprocessorKind kind = PreprocessorKind::ecodb_outlier_removal;
    /// Unset means the kind's default (1.0 bootstrap, 0.9 stratified).
    std::optional<double> sample_fraction;
    OutlierParams outliers;

    double effective_fraction() const;
};

struct ClassifierConfig {
    ClassifierKind kind = ClassifierKind::automlp;
    AutoMlpParams automlp;
    std::size_t knn_k = 5;
    MeasureKind knn_measure = MeasureKind::euclidean;
};

struct ExperimentConfig {
    std::string data_path;
    SplitSpec split;
    PreprocessorConfig preprocessor;
    ClassifierConfig classifier;
    std::string output_path;
    std::size_t repeats = 1;
    std::vector<std::string> drop_features;
    /// Degenerate check: evaluate the "test" metrics on the raw training
    /// set instead of the held-out test set.
    bool test_equals_train = false;

    void validate() const;
};

// ---------------------------------------------------------------------------
// Access tracking

enum class Role { train, validation, test };
enum class Stage { preprocess, train, validate, final_evaluation };

std::string_view role_name(Role role) noexcept;
std::string_view stage_name(Stage stage) noexcept;

struct AccessEvent {
    Role role;
    Stage stage;
    std::size_t sequence;
};

class AccessLog {
public:
    void record(Role role, Stage stage) { events_.push_back({role, stage, events_.size()}); }
    const std::vector<AccessEvent>& events() const noexcept { return events_; }

private:
    std::vector<AccessEvent> events_;
};

/// A dataset whose reads are recorded in an optional AccessLog.
class TrackedDataset {
public:
    TrackedDataset(Dataset data, Role role, AccessLog* log) : data_(std::move(data)), role_(role), log_(log) {}

    const Dataset& read(Stage stage) const {
        if (log_ != nullptr) {
            log_->record(role_, stage);
        }
        return data_;
    }
    Role role() const noexcept { return role_; }
    std::size_t size() const noexcept { return data_.size(); }

private:
    Dataset data_;
    Role role_;
    AccessLog* log_;
};

// ---------------------------------------------------------------------------
// Pipeline stages

/// Preprocessed training data. Only preprocess() constructs one.
class PreparedTraining {
public:
    const Dataset& data() const noexcept { return data_; }
    const std::optional<ZTransform>& transform() const noexcept { return transform_; }
    const std::optional<OutlierReport>& outliers() const noexcept { return outliers_; }

private:
    friend PreparedTraining preprocess(const TrackedDataset&, const PreprocessorConfig&, std::uint64_t);
    PreparedTraining(Dataset data, std::optional<ZTransform> transform, std::optional<OutlierReport> outliers)
        : data_(std::move(data)), transform_(std::move(transform)), outliers_(std::move(outliers)) {}

    Dataset data_;
    std::optional<ZTransform> transform_;
    std::optional<OutlierReport> outliers_;
};

PreparedTraining preprocess(const TrackedDataset& train, const PreprocessorConfig& config, std::uint64_t seed);

struct KnnModel {
    Dataset train;
    std::size_t k;
    Measure measure;
};

/// A trained classifier together with the feature transform fitted during
/// preprocessing, applied to every dataset it predicts on.
struct FittedModel {
    std::variant<AutoMlpResult, KnnModel, NaiveBayes> model;
    std::optional<ZTransform> transform;

    int predict(std::span<const double> features) const;
    std::vector<int> predict(const Dataset& data) const;
};

FittedModel train_classifier(const PreparedTraining& train, const TrackedDataset& validation,
                             const ClassifierConfig& config, std::uint64_t seed);

EvalReport evaluate(const FittedModel& model, const TrackedDataset& data, Stage stage);

// ---------------------------------------------------------------------------
// Experiments

struct MetricSummary {
    double median = 0.0;
    double min = 0.0;
    double max = 0.0;
};

struct RepeatResult {
    std::size_t repeat = 0;
    std::uint64_t seed = 0;
    std::size_t train_size = 0;
    std::size_t train_size_after_preprocess = 0;
    std::size_t validation_size = 0;
    std::size_t test_size = 0;
    EvalReport validation;
    EvalReport test;
    std::optional<OutlierReport> outliers;
    std::optional<std::vector<GenerationRecord>> history;
    std::optional<MlpNetwork> winner;
};

struct RunReport {
    ExperimentConfig config;
    std::vector<RepeatResult> repeats;
    std::map<std::string, MetricSummary> validation_summary;
    std::map<std::string, MetricSummary> test_summary;
};

/// Metric names in report order: accuracy, weighted_mean_recall,
/// weighted_mean_precision, precision_pos, recall_pos, precision_neg,
/// recall_neg.
const std::vector<std::string>& metric_names();
double metric_value(const EvalReport& report, std::string_view name);
MetricSummary summarize(std::vector<double> values);

/// Seeds used by repeat r: split uses seed + r; preprocessing and training
/// use sub-seeds derived from it.
std::uint64_t repeat_seed(const ExperimentConfig& config, std::size_t repeat) noexcept;

/// Loads config.data_path and runs every repeat. Writes nothing.
RunReport run_experiment(const ExperimentConfig& config, AccessLog* log = nullptr);
/// Same, on an already loaded dataset.
RunReport run_experiment(const ExperimentConfig& config, const Dataset& dataset, AccessLog* log = nullptr);

enum class SweepAxis { preprocessor, classifier };
std::string_view axis_name(SweepAxis axis) noexcept;
SweepAxis parse_axis(std::string_view name);
std::vector<std::string> default_variants(SweepAxis axis);

struct ReferenceExpectation {
    std::string description;
    double expected_min_delta = 0.0;
    double observed_median_delta = 0.0;
    std::vector<double> paired_deltas;
    bool met = false;
};

struct SweepReport {
    SweepAxis axis = SweepAxis::preprocessor;
    std::vector<std::string> variants;
    std::vector<RunReport> runs;
    /// ECODB versus no preprocessing, when both rows are present.
    std::optional<ReferenceExpectation> ecodb_vs_none;
};

ExperimentConfig with_variant(const ExperimentConfig& base, SweepAxis axis, std::string_view variant);
SweepReport run_sweep(const ExperimentConfig& base, SweepAxis axis, const std::vector<std::string>& variants);
SweepReport run_sweep(const ExperimentConfig& base, const Dataset& dataset, SweepAxis axis,
                      const std::vector<std::string>& variants);

} // namespace ecoamlp
