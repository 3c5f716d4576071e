#include "ecoamlp/metrics.hpp"

#include "ecoamlp/errors.hpp"

namespace ecoamlp {

ConfusionMatrix confusion(std::span<const int> predictions, std::span<const int> truths) {
    if (predictions.size() != truths.size()) {
        throw ConfigError("confusion: " + std::to_string(predictions.size()) + " predictions for " +
                          std::to_string(truths.size()) + " labels");
    }
    if (predictions.empty()) {
        throw ConfigError("confusion: no predictions");
    }
    ConfusionMatrix m;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const int p = predictions[i];
        const int t = truths[i];
        if ((p != 0 && p != 1) || (t != 0 && t != 1)) {
            throw DataError("confusion: labels must be 0 or 1");
        }
        if (t == 1) {
            ++(p == 1 ? m.tp : m.fn);
        } else {
            ++(p == 1 ? m.fp : m.tn);
        }
    }
    return m;
}

EvalReport report(const ConfusionMatrix& matrix) {
    if (matrix.total() == 0) {
        throw ConfigError("report: empty confusion matrix");
    }
    EvalReport r;
    r.matrix = matrix;
    const auto ratio = [&r](std::size_t num, std::size_t den, const char* name) {
        if (den == 0) {
            r.undefined.emplace_back(name);
            return 0.0;
        }
        return static_cast<double>(num) / static_cast<double>(den);
    };
    r.accuracy = ratio(matrix.tp + matrix.tn, matrix.total(), "accuracy");
    r.precision_pos = ratio(matrix.tp, matrix.tp + matrix.fp, "precision_pos");
    r.recall_pos = ratio(matrix.tp, matrix.tp + matrix.fn, "recall_pos");
    r.precision_neg = ratio(matrix.tn, matrix.tn + matrix.fn, "precision_neg");
    r.recall_neg = ratio(matrix.tn, matrix.tn + matrix.fp, "recall_neg");
    r.weighted_mean_precision = (r.precision_pos + r.precision_neg) / 2.0;
    r.weighted_mean_recall = (r.recall_pos + r.recall_neg) / 2.0;
    return r;
}

ConfusionMatrix swap_classes(const ConfusionMatrix& m) noexcept {
    return ConfusionMatrix{m.tn, m.tp, m.fn, m.fp};
}

} // namespace ecoamlp
