#pragma once

// Shared test fixtures and generators.

#include "ecoamlp/data.hpp"
#include "ecoamlp/rng.hpp"

#include <string>
#include <vector>

namespace ecoamlp::test {

inline Schema numeric_schema(std::size_t arity) {
    std::vector<FeatureDescriptor> features;
    for (std::size_t j = 0; j < arity; ++j) {
        features.push_back({"f" + std::to_string(j), FeatureKind::numeric, {}});
    }
    return Schema(std::move(features), {"0", "1"});
}

/// Rows of features with labels; ids are 0..n-1.
inline Dataset make_dataset(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels) {
    std::vector<Instance> instances;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        instances.push_back(Instance{rows[i], labels[i], i, i});
    }
    return Dataset(numeric_schema(rows.empty() ? 1 : rows.front().size()), std::move(instances));
}

/// Two Gaussian-ish clusters (uniform noise around +/- offset) with
/// roughly balanced labels.
inline Dataset random_dataset(std::uint64_t seed, std::size_t n, std::size_t arity, double offset = 1.0,
                              double noise = 1.0) {
    Xoshiro256 rng(seed);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (std::size_t i = 0; i < n; ++i) {
        const int label = static_cast<int>(rng.below(2));
        std::vector<double> row(arity);
        for (auto& v : row) {
            v = (label == 1 ? offset : -offset) + noise * rng.normal();
        }
        rows.push_back(std::move(row));
        labels.push_back(label);
    }
    // Both classes present.
    labels[0] = 0;
    if (n > 1) {
        labels[1] = 1;
    }
    return make_dataset(rows, labels);
}

inline std::string data_path(const std::string& name) { return std::string(ECOAMLP_DATA_DIR) + "/" + name; }

} // namespace ecoamlp::test
