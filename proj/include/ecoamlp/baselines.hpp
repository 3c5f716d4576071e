#pragma once

// Comparison preprocessors and classifiers.

#include "ecoamlp/data.hpp"
#include "ecoamlp/distance.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace ecoamlp {

enum class PreprocessorKind { none, ztransform, bootstrap_sample, stratified_sample, ecodb_outlier_removal };

std::string_view preprocessor_name(PreprocessorKind kind) noexcept;
/// Accepts none|ztransform|bootstrap|stratified|ecodb.
PreprocessorKind parse_preprocessor(std::string_view name);

inline constexpr double kDefaultBootstrapFraction = 1.0;
inline constexpr double kDefaultStratifiedFraction = 0.9;

/// Per-feature standardization fitted on one dataset.
struct ZTransform {
    std::vector<double> mean;
    std::vector<double> stddev; // population std; 0 maps the feature to 0

    static ZTransform fit(const Dataset& train);
    Dataset apply(const Dataset& data) const;
    std::vector<double> apply(std::span<const double> features) const;
};

/// Fits on `train` and transforms train and every dataset in `others`.
std::pair<Dataset, std::vector<Dataset>> ztransform_fit_apply(const Dataset& train, std::span<const Dataset> others);

/// round(fraction * n) draws with replacement. Output ids are 0..m-1;
/// source_id keeps the drawn instance's original id.
Dataset bootstrap_sample(const Dataset& train, double fraction, std::uint64_t seed);

/// Per class, round(fraction * n_class) instances without replacement.
/// Throws DataError if a present class would receive no instances.
Dataset stratified_sample(const Dataset& train, double fraction, std::uint64_t seed);

/// Majority label among the k nearest training instances; ties go to class 0.
int knn_classify(const Dataset& train, std::span<const double> query, std::size_t k, const Measure& measure);

/// Gaussian naive Bayes.
class NaiveBayes {
public:
    static constexpr double kVarianceFloor = 1e-9;

    /// Throws DataError if either class has fewer than two instances.
    static NaiveBayes fit(const Dataset& train);

    /// log prior + sum of log Gaussian densities, per class.
    std::array<double, 2> log_scores(std::span<const double> query) const;
    /// argmax of log_scores; ties go to class 0.
    int classify(std::span<const double> query) const;

    const std::array<std::vector<double>, 2>& means() const noexcept { return mean_; }
    const std::array<std::vector<double>, 2>& variances() const noexcept { return variance_; }

private:
    std::array<double, 2> log_prior_{};
    std::array<std::vector<double>, 2> mean_;
    std::array<std::vector<double>, 2> variance_;
};

} // namespace ecoamlp
