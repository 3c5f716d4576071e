#pragma once

// Tabular datasets: schema, loading, nominal encoding, and seeded splits.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace ecoamlp {

using InstanceId = std::uint64_t;

enum class FeatureKind { numeric, nominal };

struct FeatureDescriptor {
    std::string name;
    FeatureKind kind = FeatureKind::numeric;
    /// Category names for nominal features, in order of first appearance.
    /// A nominal feature value is the index into this list.
    std::vector<std::string> categories;

    friend bool operator==(const FeatureDescriptor&, const FeatureDescriptor&) = default;
};

class Schema {
public:
    Schema(std::vector<FeatureDescriptor> features, std::vector<std::string> class_labels);

    const std::vector<FeatureDescriptor>& features() const noexcept { return features_; }
    const std::vector<std::string>& class_labels() const noexcept { return class_labels_; }
    std::size_t arity() const noexcept { return features_.size(); }
    bool all_numeric() const noexcept;
    std::vector<FeatureKind> kinds() const;
    /// Index of a feature by name; throws DataError if absent.
    std::size_t feature_index(const std::string& name) const;

    FeatureDescriptor& feature(std::size_t index) { return features_.at(index); }

    friend bool operator==(const Schema&, const Schema&) = default;

private:
    std::vector<FeatureDescriptor> features_;
    std::vector<std::string> class_labels_;
};

struct Instance {
    std::vector<double> features;
    int label = 0;
    InstanceId id = 0;
    /// Id of the row this instance was drawn from. Equals id except for
    /// resampled (bootstrap) datasets.
    InstanceId source_id = 0;

    friend bool operator==(const Instance&, const Instance&) = default;
};

/// Immutable after construction. Construction validates arity, labels,
/// finiteness, and id uniqueness.
class Dataset {
public:
    Dataset(Schema schema, std::vector<Instance> instances);

    const Schema& schema() const noexcept { return schema_; }
    std::span<const Instance> instances() const noexcept { return instances_; }
    const Instance& operator[](std::size_t index) const { return instances_[index]; }
    std::size_t size() const noexcept { return instances_.size(); }
    bool empty() const noexcept { return instances_.empty(); }
    std::size_t arity() const noexcept { return schema_.arity(); }

    /// Position of the instance with this id; throws DataError if absent.
    std::size_t index_of(InstanceId id) const;
    bool contains(InstanceId id) const;
    std::vector<InstanceId> ids() const;
    /// Instance counts per class index.
    std::vector<std::size_t> class_counts() const;

    /// New dataset over the same schema holding the selected positions in
    /// the given order.
    Dataset subset(std::span<const std::size_t> positions) const;

    friend bool operator==(const Dataset&, const Dataset&) = default;

private:
    Schema schema_;
    std::vector<Instance> instances_;
};

/// Eight numeric Pima Indians Diabetes features; labels {"0","1"}, class 1
/// is diabetic.
Schema pidd_schema();

/// Whole file as text; DataError if unreadable.
std::string read_text_file(const std::filesystem::path& path);

/// All-numeric schema for a CSV document: feature names from the header
/// line when there is one, otherwise feature_1..feature_m.
Schema infer_numeric_schema(const std::string& text, std::vector<std::string> class_labels = {"0", "1"});

/// Parses a comma-separated file whose last column is the class label.
/// A single header line is skipped when the first row fails numeric parsing
/// of a numeric feature. Nominal values are coded by first appearance.
Dataset load_csv(const std::filesystem::path& path, const Schema& schema);
/// Same as load_csv, reading from an in-memory document.
Dataset parse_csv(const std::string& text, const Schema& schema, const std::string& source = "<memory>");

/// Replaces every nominal feature by the 0-based ordinal of its category,
/// categories ordered by first appearance in this dataset. Idempotent.
Dataset transform_nominal(const Dataset& dataset);

/// Removes the named features. Unknown names are a DataError.
Dataset drop_features(const Dataset& dataset, std::span<const std::string> names);

struct SplitSpec {
    double train_fraction = 0.70;
    double validation_fraction = 0.15;
    double test_fraction = 0.15;
    std::uint64_t seed = 0;
    bool stratified = false;

    void validate() const;
};

struct DataSplit {
    Dataset train;
    Dataset validation;
    Dataset test;
};

/// Subset sizes {n_train, n_validation, n_test} for n instances: validation
/// and test get round(fraction * n), train takes the remainder.
std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitSpec& spec);

/// Shuffles positions with xoshiro256** (Fisher-Yates) and deals them out
/// to train, validation, test in that order. With stratification each class
/// is shuffled separately and the global validation/test sizes are
/// apportioned across classes by largest remainder. Each subset keeps
/// ascending id order.
DataSplit split(const Dataset& dataset, const SplitSpec& spec);

} // namespace ecoamlp
