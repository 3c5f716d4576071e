#pragma once

// Confusion-matrix metrics. Class 1 (diabetic) is the positive class.
// "Weighted mean" precision/recall are the plain average of the two
// per-class values.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ecoamlp {

struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t tn = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;

    std::size_t total() const noexcept { return tp + tn + fp + fn; }

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct EvalReport {
    ConfusionMatrix matrix;
    double accuracy = 0.0;
    double precision_pos = 0.0;
    double recall_pos = 0.0;
    double precision_neg = 0.0;
    double recall_neg = 0.0; // specificity
    double weighted_mean_precision = 0.0;
    double weighted_mean_recall = 0.0;
    /// Names of metrics that were 0/0 and reported as 0.
    std::vector<std::string> undefined;
};

/// Throws ConfigError on empty or unequal-length inputs, DataError on a
/// label outside {0, 1}.
ConfusionMatrix confusion(std::span<const int> predictions, std::span<const int> truths);

/// Throws ConfigError when the matrix is empty.
EvalReport report(const ConfusionMatrix& matrix);

/// The same counts with the positive and negative classes exchanged.
ConfusionMatrix swap_classes(const ConfusionMatrix& matrix) noexcept;

} // namespace ecoamlp
